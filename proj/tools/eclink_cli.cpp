// Command-line front end.
//
//   eclink analyze  --config cfg.json [--seed N]
//   eclink sweep    --figure fig3|fig4|fig5|fig6 --out table.csv
//                   [--points N] [--config cfg.json]
//   eclink validate --config cfg.json [--seed N]
//
// Exit codes: 0 success, 1 internal error, 2 config validation failure,
// 3 infeasible / unstable configuration, 4 simulation disagrees with the
// closed forms (validate only).

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "eclink/analysis.hpp"
#include "eclink/config.hpp"
#include "eclink/effective_bandwidth.hpp"
#include "eclink/effective_capacity.hpp"
#include "eclink/rate_matching.hpp"
#include "eclink/sim.hpp"
#include "eclink/sweeps.hpp"
#include "eclink/types.hpp"

namespace {

using eclink::RunConfig;
using json = nlohmann::ordered_json;

const char* status_name(eclink::SolveStatus s) {
  switch (s) {
    case eclink::SolveStatus::ok: return "ok";
    case eclink::SolveStatus::unstable: return "unstable";
    case eclink::SolveStatus::underloaded: return "underloaded";
  }
  return "unknown";
}

json source_json(const eclink::SourceModel& source) {
  const eclink::SteadyState ss = eclink::steady_state(source);
  json j;
  j["kind"] = eclink::source_kind(source);
  if (const auto* d = std::get_if<eclink::DtmsSource>(&source)) {
    j["p11"] = d->p11;
    j["p22"] = d->p22;
    j["lambda_on"] = d->lambda_on;
  } else if (const auto* f = std::get_if<eclink::FmsSource>(&source)) {
    j["alpha"] = f->alpha;
    j["beta"] = f->beta;
    j["lambda_on"] = f->lambda_on;
  } else if (const auto* m = std::get_if<eclink::MmpsSource>(&source)) {
    j["alpha"] = m->alpha;
    j["beta"] = m->beta;
    j["lambda_on"] = m->lambda_on;
  }
  j["p_on"] = ss.p_on;
  j["lambda_avg"] = ss.lambda_avg;
  return j;
}

eclink::SimConfig make_sim_config(const RunConfig& cfg, double rate,
                                  std::uint64_t seed) {
  eclink::SimConfig sim(cfg.source, eclink::ChannelSpec(cfg.snr, rate));
  sim.n_blocks = cfg.sim.blocks;
  sim.warmup_blocks = cfg.sim.warmup;
  sim.seed = seed;
  return sim;
}

int run_analyze(const RunConfig& cfg, std::uint64_t seed) {
  eclink::AnalyzeRequest req(cfg.source, cfg.snr);
  req.rate = cfg.rate;
  req.theta = cfg.theta;
  req.delay_thresholds = cfg.delay.thresholds;
  req.zeta = cfg.delay.zeta;

  bool zeta_simulated = false;
  double zeta_hat = 0.0;
  if (cfg.delay.zeta_from_sim) {
    const double rate =
        cfg.rate ? *cfg.rate : eclink::optimal_rate(cfg.snr, cfg.theta).r_star;
    const eclink::SimTrace trace = eclink::simulate_queue(make_sim_config(cfg, rate, seed));
    zeta_hat = trace.zeta_hat;
    zeta_simulated = true;
    // An empty-queue estimate of 0 gives no usable prefactor; keep the
    // conservative configured value in that case.
    if (zeta_hat > 0.0) req.zeta = std::min(zeta_hat, 1.0);
  }

  const eclink::LinkReport rep = eclink::analyze_link(req);

  json out;
  out["source"] = source_json(cfg.source);
  json ch;
  ch["snr_db"] = eclink::to_db(rep.snr);
  ch["snr"] = rep.snr;
  ch["rate"] = rep.rate_used;
  ch["rate_was_given"] = rep.rate_was_given;
  ch["psi"] = rep.psi;
  ch["p_on"] = rep.p_on_channel;
  ch["mean_service_rate"] = rep.mean_service_rate;
  out["channel"] = ch;
  out["qos"] = json{{"theta", rep.theta}};
  out["effective_bandwidth"] = rep.eb_at_theta;
  out["effective_capacity"] = rep.ec_at_theta;
  out["optimal_rate"] =
      json{{"rate", rep.optimum.r_star}, {"effective_capacity", rep.optimum.ec_star}};
  out["max_arrival_rate"] =
      json{{"on", rep.lambda_star_on}, {"avg", rep.lambda_star_avg}};
  json op;
  op["status"] = status_name(rep.operating.status);
  if (rep.operating.status != eclink::SolveStatus::unstable) {
    op["theta_star"] = rep.operating.theta_star;
    op["effective_bandwidth"] = rep.operating.eb_at_theta;
    op["gap"] = rep.operating.gap;
  }
  op["iterations"] = rep.operating.iterations;
  out["operating_point"] = op;
  if (zeta_simulated) out["zeta_hat"] = zeta_hat;
  json delays = json::array();
  for (const auto& d : rep.delay)
    delays.push_back(
        json{{"d", d.d}, {"zeta", d.zeta}, {"probability", d.probability}});
  out["delay_violation"] = delays;

  std::cout << out.dump(2) << "\n";

  if (rep.operating.status == eclink::SolveStatus::unstable) {
    std::cerr << "unstable: average arrival rate " << rep.lambda_avg
              << " is not below the mean service rate " << rep.mean_service_rate
              << " (stability requires lambda_avg < p_on_channel * rate)\n";
    return 3;
  }
  return 0;
}

int run_sweep(const RunConfig& cfg, const std::string& figure,
              const std::string& out_path, int points_flag) {
  const int points = points_flag > 0 ? points_flag : cfg.sweep.points;
  eclink::SweepTable table;
  if (figure == "fig3")
    table = eclink::sweep_fig3(points > 0 ? points : 40);
  else if (figure == "fig4")
    table = eclink::sweep_fig4(points > 0 ? points : 400);
  else if (figure == "fig5")
    table = eclink::sweep_fig5(points > 0 ? points : 20);
  else
    table = eclink::sweep_fig6(points > 0 ? points : 25, cfg.sweep.delay_threshold);
  eclink::write_csv(table, out_path);
  std::cout << figure << ": wrote " << table.rows.size() << " rows to " << out_path
            << "\n";
  return 0;
}

struct CheckRecorder {
  json checks = json::array();
  bool all_pass = true;

  void add(json check, bool pass) {
    check["pass"] = pass;
    checks.push_back(std::move(check));
    if (!pass) all_pass = false;
  }

  // Three-standard-error agreement between a Monte Carlo estimate and its
  // closed form; exact comparison when the spread degenerates to zero.
  void add_threesigma(const std::string& name, double estimate, double se,
                      double closed_form) {
    json c;
    c["name"] = name;
    c["estimate"] = estimate;
    c["std_error"] = se;
    c["closed_form"] = closed_form;
    c["ci_low"] = estimate - 3.0 * se;
    c["ci_high"] = estimate + 3.0 * se;
    bool pass;
    if (se > 0.0) {
      const double z = (estimate - closed_form) / se;
      c["z"] = z;
      pass = std::fabs(z) <= 3.0;
    } else {
      pass = std::fabs(estimate - closed_form) <=
             1e-9 * std::max(1.0, std::fabs(closed_form));
    }
    add(std::move(c), pass);
  }
};

int run_validate(const RunConfig& cfg, std::uint64_t seed) {
  const double rate =
      cfg.rate ? *cfg.rate : eclink::optimal_rate(cfg.snr, cfg.theta).r_star;
  const eclink::ChannelSpec channel(cfg.snr, rate);
  const eclink::SteadyState ss = eclink::steady_state(cfg.source);
  const double theta = cfg.theta;
  const double eb_cf = eclink::effective_bandwidth(cfg.source, theta);

  // The bandwidth/capacity formula checks run at sim.mc_theta, not
  // qos.theta: a large tilt puts the tilted-moment estimators in the
  // rare-event regime where no affordable replication count reaches the
  // expectation, so the comparison would measure sampling failure, not
  // formula correctness.
  const double mc = cfg.sim.mc_theta;
  const double eb_cf_mc = eclink::effective_bandwidth(cfg.source, mc);
  const double ec_cf_mc = eclink::effective_capacity(channel, mc);

  const std::uint64_t t = cfg.sim.horizon;
  const std::uint64_t reps = cfg.sim.replications;

  CheckRecorder rec;

  const auto arr = eclink::estimate_arrival_rate(cfg.source, t, reps, seed);
  rec.add_threesigma("arrival_rate_mean", arr.mean, arr.std_error, ss.lambda_avg);

  const auto onf = eclink::estimate_on_fraction(channel, t, reps, seed);
  rec.add_threesigma("channel_on_fraction", onf.mean, onf.std_error,
                     channel.on_probability());

  const auto eb1 = eclink::estimate_eb(cfg.source, mc, t, reps, seed);
  rec.add_threesigma("effective_bandwidth", eb1.value, eb1.std_error, eb_cf_mc);

  const auto ec1 = eclink::estimate_ec(channel, mc, t, reps, seed);
  rec.add_threesigma("effective_capacity", ec1.value, ec1.std_error, ec_cf_mc);

  // Horizon-doubling bias flag: the t and 2t estimates must agree within
  // their combined spread, otherwise the horizon is too short for the
  // asymptotic quantity.
  {
    const auto eb2 = eclink::estimate_eb(cfg.source, mc, 2 * t, reps, seed + 1);
    const double diff = std::fabs(eb1.value - eb2.value);
    const double band = 3.0 * (eb1.std_error + eb2.std_error);
    json c;
    c["name"] = "effective_bandwidth_horizon_bias";
    c["estimate"] = eb1.value;
    c["estimate_2t"] = eb2.value;
    c["difference"] = diff;
    c["band"] = band;
    rec.add(std::move(c), diff <= band || band == 0.0);
  }
  {
    const auto ec2 = eclink::estimate_ec(channel, mc, 2 * t, reps, seed + 1);
    const double diff = std::fabs(ec1.value - ec2.value);
    const double band = 3.0 * (ec1.std_error + ec2.std_error);
    json c;
    c["name"] = "effective_capacity_horizon_bias";
    c["estimate"] = ec1.value;
    c["estimate_2t"] = ec2.value;
    c["difference"] = diff;
    c["band"] = band;
    rec.add(std::move(c), diff <= band || band == 0.0);
  }

  // Single long queue run: conservation and the nonempty-queue fraction.
  {
    const eclink::SimTrace trace = eclink::simulate_queue(make_sim_config(cfg, rate, seed));
    const double gap = std::fabs(trace.total_arrival_bits - trace.total_departed_bits -
                                 trace.final_queue_bits);
    const double tol = 1e-6 * std::max(1.0, trace.total_arrival_bits);
    json c;
    c["name"] = "queue_conservation";
    c["arrival_bits"] = trace.total_arrival_bits;
    c["departed_bits"] = trace.total_departed_bits;
    c["final_queue_bits"] = trace.final_queue_bits;
    c["gap"] = gap;
    c["tolerance"] = tol;
    rec.add(std::move(c), gap <= tol && !trace.unstable);

    json z;
    z["name"] = "nonempty_queue_fraction";
    z["zeta_hat"] = trace.zeta_hat;
    rec.add(std::move(z), trace.zeta_hat >= 0.0 && trace.zeta_hat <= 1.0);
  }

  // Delay-tail decay: the log-CCDF slope from a long run must match the
  // exponent -theta * a(theta) predicted for the configured theta.  A theta
  // that is not the link's operating exponent fails here by design.
  if (cfg.sim.tail_blocks > 0) {
    eclink::SimConfig sim = make_sim_config(cfg, rate, seed);
    sim.n_blocks = cfg.sim.tail_blocks;
    sim.warmup_blocks = std::min<std::uint64_t>(
        std::max<std::uint64_t>(cfg.sim.warmup, 10000), cfg.sim.tail_blocks / 10);
    const eclink::SimTrace trace = eclink::simulate_queue(sim);
    json c;
    c["name"] = "delay_tail_slope";
    const double predicted = -theta * eb_cf;
    c["closed_form"] = predicted;
    constexpr double kTol = 0.15;
    c["tolerance"] = kTol;
    bool pass = false;
    try {
      const eclink::TailFit fit =
          eclink::fit_delay_tail(trace, cfg.sim.tail_d_min, cfg.sim.tail_d_max);
      const double rel = std::fabs(fit.slope - predicted) / std::fabs(predicted);
      c["estimate"] = fit.slope;
      c["rel_error"] = rel;
      c["points"] = fit.points;
      pass = rel <= kTol;
    } catch (const eclink::solver_error& e) {
      c["error"] = e.what();
    }
    rec.add(std::move(c), pass);
  }

  json out;
  out["seed"] = seed;
  json echo;
  echo["source"] = source_json(cfg.source);
  echo["snr_db"] = eclink::to_db(cfg.snr);
  echo["rate"] = rate;
  echo["theta"] = theta;
  echo["mc_theta"] = mc;
  echo["horizon"] = t;
  echo["replications"] = reps;
  out["config"] = echo;
  out["checks"] = rec.checks;
  out["pass"] = rec.all_pass;
  std::cout << out.dump(2) << "\n";

  if (!rec.all_pass) {
    std::cerr << "validate: simulation disagrees with the closed forms (see report)\n";
    return 4;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QoS-constrained throughput analysis for fixed-rate wireless links"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  app.add_option("--config", config_path, "JSON run configuration file")
      ->type_name("FILE");
  app.add_option("--seed", seed, "override sim.seed from the config")
      ->type_name("UINT")
      ->each([&](const std::string&) { seed_given = true; });

  CLI::App* analyze = app.add_subcommand("analyze", "closed-form link report (JSON)");
  analyze->fallthrough();

  CLI::App* sweep = app.add_subcommand("sweep", "write one figure sweep as CSV");
  sweep->fallthrough();
  std::string figure;
  std::string out_path;
  int points = 0;
  sweep->add_option("--figure", figure, "which sweep to generate")
      ->required()
      ->check(CLI::IsMember({"fig3", "fig4", "fig5", "fig6"}));
  sweep->add_option("--out", out_path, "output CSV path")->required();
  sweep->add_option("--points", points, "grid points per curve (0 = default)");

  CLI::App* validate =
      app.add_subcommand("validate", "Monte Carlo cross-check of the closed forms");
  validate->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      cfg = eclink::load_config_file(config_path);
    } else if (analyze->parsed() || validate->parsed()) {
      throw eclink::config_error("config: --config FILE is required for this command");
    }
    const std::uint64_t run_seed = seed_given ? seed : cfg.sim.seed;

    if (analyze->parsed()) return run_analyze(cfg, run_seed);
    if (sweep->parsed()) return run_sweep(cfg, figure, out_path, points);
    if (validate->parsed()) return run_validate(cfg, run_seed);
  } catch (const eclink::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const eclink::infeasible_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
