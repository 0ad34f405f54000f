// Python bindings for the link-analysis core.  Exposes the closed forms,
// the solvers, the Monte Carlo queue oracle, and the figure sweeps.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eclink/analysis.hpp"
#include "eclink/effective_bandwidth.hpp"
#include "eclink/effective_capacity.hpp"
#include "eclink/rate_matching.hpp"
#include "eclink/rng.hpp"
#include "eclink/sim.hpp"
#include "eclink/sweeps.hpp"
#include "eclink/types.hpp"

namespace py = pybind11;
using namespace eclink;

PYBIND11_MODULE(_core, m) {
  m.doc() = "QoS-constrained throughput analysis for fixed-rate wireless links";

  // ---- types -----------------------------------------------------------
  py::class_<DtmsSource>(m, "DtmsSource")
      .def(py::init<double, double, double>(), py::arg("p11"), py::arg("p22"),
           py::arg("lambda_on"))
      .def_readonly("p11", &DtmsSource::p11)
      .def_readonly("p22", &DtmsSource::p22)
      .def_readonly("lambda_on", &DtmsSource::lambda_on)
      .def("p_on", &DtmsSource::p_on);

  py::class_<FmsSource>(m, "FmsSource")
      .def(py::init<double, double, double>(), py::arg("alpha"), py::arg("beta"),
           py::arg("lambda_on"))
      .def_readonly("alpha", &FmsSource::alpha)
      .def_readonly("beta", &FmsSource::beta)
      .def_readonly("lambda_on", &FmsSource::lambda_on)
      .def("p_on", &FmsSource::p_on);

  py::class_<MmpsSource>(m, "MmpsSource")
      .def(py::init<double, double, double>(), py::arg("alpha"), py::arg("beta"),
           py::arg("lambda_on"))
      .def_readonly("alpha", &MmpsSource::alpha)
      .def_readonly("beta", &MmpsSource::beta)
      .def_readonly("lambda_on", &MmpsSource::lambda_on)
      .def("p_on", &MmpsSource::p_on);

  py::class_<ChannelSpec>(m, "ChannelSpec")
      .def(py::init<double, double>(), py::arg("snr"), py::arg("rate"))
      .def_readonly("snr", &ChannelSpec::snr)
      .def_readonly("rate", &ChannelSpec::rate)
      .def("psi", &ChannelSpec::psi)
      .def("on_probability", &ChannelSpec::on_probability)
      .def("mean_service_rate", &ChannelSpec::mean_service_rate);

  py::class_<SteadyState>(m, "SteadyState")
      .def_readonly("p_on", &SteadyState::p_on)
      .def_readonly("lambda_avg", &SteadyState::lambda_avg);

  py::class_<DelaySpec>(m, "DelaySpec")
      .def(py::init<double, double>(), py::arg("d"), py::arg("zeta") = 1.0)
      .def_readonly("d", &DelaySpec::d)
      .def_readonly("zeta", &DelaySpec::zeta);

  m.def("to_db", &to_db, py::arg("linear"));
  m.def("from_db", &from_db, py::arg("db"));
  m.def("steady_state", &steady_state, py::arg("source"));
  m.def("peak_rate", &peak_rate, py::arg("source"));
  m.def("source_kind", &source_kind, py::arg("source"));

  // ---- closed forms ------------------------------------------------------
  m.def("effective_bandwidth", &effective_bandwidth, py::arg("source"),
        py::arg("theta"));
  m.def("effective_capacity", &effective_capacity, py::arg("channel"),
        py::arg("theta"));
  m.def("ec_rate_gradient", &ec_rate_gradient, py::arg("channel"), py::arg("theta"));
  m.def("ec_rate_curvature", &ec_rate_curvature, py::arg("channel"),
        py::arg("theta"), py::arg("h") = 1e-3);

  py::class_<RateOptimum>(m, "RateOptimum")
      .def_readonly("r_star", &RateOptimum::r_star)
      .def_readonly("ec_star", &RateOptimum::ec_star)
      .def_readonly("residual", &RateOptimum::residual)
      .def_readonly("iterations", &RateOptimum::iterations);
  m.def("optimal_rate", &optimal_rate, py::arg("snr"), py::arg("theta"));

  m.def("max_on_rate_dtms", &max_on_rate_dtms, py::arg("p11"), py::arg("p22"),
        py::arg("ec"), py::arg("theta"));
  m.def("max_on_rate_fms", &max_on_rate_fms, py::arg("alpha"), py::arg("beta"),
        py::arg("ec"), py::arg("theta"));
  m.def("max_on_rate_mmps", &max_on_rate_mmps, py::arg("alpha"), py::arg("beta"),
        py::arg("ec"), py::arg("theta"));
  m.def("max_on_rate", &max_on_rate, py::arg("shape"), py::arg("ec"),
        py::arg("theta"));
  m.def("max_avg_rate", &max_avg_rate, py::arg("shape"), py::arg("channel"),
        py::arg("theta"));

  py::enum_<SolveStatus>(m, "SolveStatus")
      .value("ok", SolveStatus::ok)
      .value("unstable", SolveStatus::unstable)
      .value("underloaded", SolveStatus::underloaded);

  py::class_<QosSolution>(m, "QosSolution")
      .def_readonly("theta_star", &QosSolution::theta_star)
      .def_readonly("eb_at_theta", &QosSolution::eb_at_theta)
      .def_readonly("gap", &QosSolution::gap)
      .def_readonly("iterations", &QosSolution::iterations)
      .def_readonly("status", &QosSolution::status);
  m.def("solve_qos_exponent", &solve_qos_exponent, py::arg("source"),
        py::arg("channel"));
  m.def("delay_violation", &delay_violation, py::arg("theta_star"),
        py::arg("a_star"), py::arg("spec"));

  // ---- analysis bundle ----------------------------------------------------
  py::class_<AnalyzeRequest>(m, "AnalyzeRequest")
      .def(py::init<SourceModel, double>(), py::arg("source"), py::arg("snr"))
      .def_readwrite("rate", &AnalyzeRequest::rate)
      .def_readwrite("theta", &AnalyzeRequest::theta)
      .def_readwrite("delay_thresholds", &AnalyzeRequest::delay_thresholds)
      .def_readwrite("zeta", &AnalyzeRequest::zeta);

  py::class_<DelayResult>(m, "DelayResult")
      .def_readonly("d", &DelayResult::d)
      .def_readonly("zeta", &DelayResult::zeta)
      .def_readonly("probability", &DelayResult::probability);

  py::class_<LinkReport>(m, "LinkReport")
      .def_readonly("p_on_source", &LinkReport::p_on_source)
      .def_readonly("lambda_on", &LinkReport::lambda_on)
      .def_readonly("lambda_avg", &LinkReport::lambda_avg)
      .def_readonly("snr", &LinkReport::snr)
      .def_readonly("rate_used", &LinkReport::rate_used)
      .def_readonly("rate_was_given", &LinkReport::rate_was_given)
      .def_readonly("psi", &LinkReport::psi)
      .def_readonly("p_on_channel", &LinkReport::p_on_channel)
      .def_readonly("mean_service_rate", &LinkReport::mean_service_rate)
      .def_readonly("theta", &LinkReport::theta)
      .def_readonly("eb_at_theta", &LinkReport::eb_at_theta)
      .def_readonly("ec_at_theta", &LinkReport::ec_at_theta)
      .def_readonly("optimum", &LinkReport::optimum)
      .def_readonly("lambda_star_on", &LinkReport::lambda_star_on)
      .def_readonly("lambda_star_avg", &LinkReport::lambda_star_avg)
      .def_readonly("operating", &LinkReport::operating)
      .def_readonly("delay", &LinkReport::delay);
  m.def("analyze_link", &analyze_link, py::arg("request"));

  // ---- Monte Carlo oracle ---------------------------------------------------
  m.def("derive_seed", &derive_seed, py::arg("seed"), py::arg("stream"));
  m.def("gen_arrivals", &gen_arrivals, py::arg("source"), py::arg("n_blocks"),
        py::arg("seed"));
  m.def("gen_channel_states", &gen_channel_states, py::arg("channel"),
        py::arg("n_blocks"), py::arg("seed"));

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<SourceModel, ChannelSpec>(), py::arg("source"),
           py::arg("channel"))
      .def_readwrite("n_blocks", &SimConfig::n_blocks)
      .def_readwrite("warmup_blocks", &SimConfig::warmup_blocks)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("store_sequences", &SimConfig::store_sequences)
      .def_readwrite("blowup_bound", &SimConfig::blowup_bound);

  py::class_<SimTrace>(m, "SimTrace")
      .def_readonly("n_blocks", &SimTrace::n_blocks)
      .def_readonly("warmup_blocks", &SimTrace::warmup_blocks)
      .def_readonly("total_arrival_bits", &SimTrace::total_arrival_bits)
      .def_readonly("total_departed_bits", &SimTrace::total_departed_bits)
      .def_readonly("final_queue_bits", &SimTrace::final_queue_bits)
      .def_readonly("total_service_capacity_bits",
                    &SimTrace::total_service_capacity_bits)
      .def_readonly("mean_arrival_rate", &SimTrace::mean_arrival_rate)
      .def_readonly("mean_service_rate", &SimTrace::mean_service_rate)
      .def_readonly("mean_queue_bits", &SimTrace::mean_queue_bits)
      .def_readonly("utilization", &SimTrace::utilization)
      .def_readonly("zeta_hat", &SimTrace::zeta_hat)
      .def_readonly("unstable", &SimTrace::unstable)
      .def_readonly("delay_hist", &SimTrace::delay_hist)
      .def_readonly("departed_mass", &SimTrace::departed_mass)
      .def_readonly("censored_mass", &SimTrace::censored_mass)
      .def_readonly("arrivals_per_block", &SimTrace::arrivals_per_block)
      .def_readonly("service_on", &SimTrace::service_on)
      .def_readonly("queue_bits", &SimTrace::queue_bits)
      .def("delay_ccdf", &SimTrace::delay_ccdf);
  m.def("simulate_queue", &simulate_queue, py::arg("config"));
  m.def("dump_trace_csv", &dump_trace_csv, py::arg("trace"), py::arg("path"));

  py::class_<McEstimate>(m, "McEstimate")
      .def_readonly("value", &McEstimate::value)
      .def_readonly("std_error", &McEstimate::std_error)
      .def_readonly("horizon", &McEstimate::horizon)
      .def_readonly("replications", &McEstimate::replications);
  m.def("estimate_eb", &estimate_eb, py::arg("source"), py::arg("theta"),
        py::arg("horizon_t"), py::arg("n_replications"), py::arg("seed"));
  m.def("estimate_ec", &estimate_ec, py::arg("channel"), py::arg("theta"),
        py::arg("horizon_t"), py::arg("n_replications"), py::arg("seed"));
  m.def("eb_from_horizon_sums", &eb_from_horizon_sums, py::arg("sums"),
        py::arg("theta"), py::arg("horizon_t"));
  m.def("ec_from_horizon_sums", &ec_from_horizon_sums, py::arg("sums"),
        py::arg("theta"), py::arg("horizon_t"));

  py::class_<MomentEstimate>(m, "MomentEstimate")
      .def_readonly("mean", &MomentEstimate::mean)
      .def_readonly("std_error", &MomentEstimate::std_error);
  m.def("estimate_arrival_rate", &estimate_arrival_rate, py::arg("source"),
        py::arg("horizon_t"), py::arg("n_replications"), py::arg("seed"));
  m.def("estimate_on_fraction", &estimate_on_fraction, py::arg("channel"),
        py::arg("horizon_t"), py::arg("n_replications"), py::arg("seed"));

  py::class_<TailFit>(m, "TailFit")
      .def_readonly("slope", &TailFit::slope)
      .def_readonly("intercept", &TailFit::intercept)
      .def_readonly("points", &TailFit::points)
      .def_readonly("d_first", &TailFit::d_first)
      .def_readonly("d_last", &TailFit::d_last);
  m.def("fit_delay_tail", &fit_delay_tail, py::arg("trace"), py::arg("d_min"),
        py::arg("d_max"), py::arg("min_tail_mass") = 25.0);

  // ---- sweeps -----------------------------------------------------------------
  py::class_<SweepTable>(m, "SweepTable")
      .def_readonly("columns", &SweepTable::columns)
      .def_readonly("rows", &SweepTable::rows);
  m.def("sweep_fig3", &sweep_fig3, py::arg("points") = 40);
  m.def("sweep_fig4", &sweep_fig4, py::arg("points") = 400);
  m.def("sweep_fig5", &sweep_fig5, py::arg("points") = 20);
  m.def("sweep_fig6", &sweep_fig6, py::arg("points") = 25,
        py::arg("delay_threshold") = 5.0);
  m.def("write_csv", &write_csv, py::arg("table"), py::arg("path"));
}
