#include "eclink/sweeps.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "eclink/effective_bandwidth.hpp"
#include "eclink/effective_capacity.hpp"
#include "eclink/rate_matching.hpp"
#include "eclink/types.hpp"

namespace eclink {
namespace {

// Shared burstiness knob: one expected transition per block.
DtmsSource dtms_family(double p_on, double lambda_on) {
  return DtmsSource(1.0 - p_on, p_on, lambda_on);
}

void require_points(int points, int minimum) {
  if (points < minimum)
    throw domain_error("sweep: need at least " + std::to_string(minimum) + " grid points");
}

}  // namespace

std::string format_g9(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

void write_csv(const SweepTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

SweepTable sweep_fig3(int points) {
  require_points(points, 2);
  constexpr double kTheta = 1.0;
  constexpr double kPOn = 0.2;
  SweepTable t;
  t.columns = {"ec", "lambda_avg_dtms", "lambda_avg_fms", "lambda_avg_mmps"};
  for (int i = 0; i < points; ++i) {
    const double ec = 0.1 + (2.0 - 0.1) * static_cast<double>(i) / (points - 1);
    const double dtms = kPOn * max_on_rate_dtms(1.0 - kPOn, kPOn, ec, kTheta);
    const double fms = kPOn * max_on_rate_fms(kPOn, 1.0 - kPOn, ec, kTheta);
    const double mmps = kPOn * max_on_rate_mmps(kPOn, 1.0 - kPOn, ec, kTheta);
    t.rows.push_back({format_g9(ec), format_g9(dtms), format_g9(fms), format_g9(mmps)});
  }
  return t;
}

SweepTable sweep_fig4(int points) {
  require_points(points, 2);
  constexpr double kTheta = 1.0;
  constexpr double kPOn = 0.2;
  const double snr = from_db(10.0);
  SweepTable t;
  t.columns = {"rate", "ec", "lambda_avg_dtms", "lambda_avg_fms", "lambda_avg_mmps"};
  for (int i = 0; i < points; ++i) {
    const double r = 8.0 * static_cast<double>(i + 1) / points;
    const double ec = effective_capacity(ChannelSpec(snr, r), kTheta);
    const double dtms = kPOn * max_on_rate_dtms(1.0 - kPOn, kPOn, ec, kTheta);
    const double fms = kPOn * max_on_rate_fms(kPOn, 1.0 - kPOn, ec, kTheta);
    const double mmps = kPOn * max_on_rate_mmps(kPOn, 1.0 - kPOn, ec, kTheta);
    t.rows.push_back({format_g9(r), format_g9(ec), format_g9(dtms), format_g9(fms),
                      format_g9(mmps)});
  }
  return t;
}

SweepTable sweep_fig5(int points) {
  require_points(points, 2);
  constexpr double kTheta = 1.0;
  SweepTable t;
  t.columns = {"snr_db", "p_on", "ec_star",
               "lambda_on_dtms", "lambda_on_fms", "lambda_on_mmps"};
  for (double snr_db : {0.0, 10.0, 20.0}) {
    const RateOptimum opt = optimal_rate(from_db(snr_db), kTheta);
    for (int i = 0; i < points; ++i) {
      // Last grid point lands exactly on P_ON = 1 (the always-ON endpoint).
      const double p_on = 0.05 + (1.0 - 0.05) * static_cast<double>(i) / (points - 1);
      const double dtms = max_on_rate_dtms(1.0 - p_on, p_on, opt.ec_star, kTheta);
      const double fms = max_on_rate_fms(p_on, 1.0 - p_on, opt.ec_star, kTheta);
      const double mmps = max_on_rate_mmps(p_on, 1.0 - p_on, opt.ec_star, kTheta);
      t.rows.push_back({format_g9(snr_db), format_g9(p_on), format_g9(opt.ec_star),
                        format_g9(dtms), format_g9(fms), format_g9(mmps)});
    }
  }
  return t;
}

SweepTable sweep_fig6(int points, double delay_threshold) {
  require_points(points, 2);
  const DelaySpec spec(delay_threshold, 1.0);
  SweepTable t;
  t.columns = {"panel", "x", "theta_used", "eb_used", "delay_violation"};

  // Panel 1: vs SNR.  Moderately bursty source, each link at its optimal
  // rate, operating exponent solved per point.
  {
    const SourceModel src = dtms_family(0.5, 0.6);
    for (int i = 0; i < points; ++i) {
      const double snr_db = 20.0 * static_cast<double>(i) / (points - 1);
      const double snr = from_db(snr_db);
      const ChannelSpec ch(snr, optimal_rate(snr, 1.0).r_star);
      const QosSolution sol = solve_qos_exponent(src, ch);
      if (sol.status == SolveStatus::unstable)
        throw solver_error("sweep_fig6: snr panel configuration became unstable");
      const double pr = delay_violation(sol.theta_star, sol.eb_at_theta, spec);
      t.rows.push_back({"snr_db", format_g9(snr_db), format_g9(sol.theta_star),
                        format_g9(sol.eb_at_theta), format_g9(pr)});
    }
  }

  // Panel 2: vs the QoS exponent itself; the bound follows directly from
  // the exponent, no operating-point solve involved.
  {
    const SourceModel src = dtms_family(0.5, 0.6);
    for (int i = 0; i < points; ++i) {
      const double theta = 0.05 * std::pow(2.0 / 0.05, static_cast<double>(i) / (points - 1));
      const double eb = effective_bandwidth(src, theta);
      const double pr = delay_violation(theta, eb, spec);
      t.rows.push_back({"theta", format_g9(theta), format_g9(theta), format_g9(eb),
                        format_g9(pr)});
    }
  }

  // Panel 3: vs source burstiness at fixed average load lambda_avg = 1.
  {
    const double snr = from_db(10.0);
    const ChannelSpec ch(snr, optimal_rate(snr, 1.0).r_star);
    for (int i = 0; i < points; ++i) {
      const double p_on = 0.1 + (0.95 - 0.1) * static_cast<double>(i) / (points - 1);
      const SourceModel src = dtms_family(p_on, 1.0 / p_on);
      const QosSolution sol = solve_qos_exponent(src, ch);
      if (sol.status == SolveStatus::unstable)
        throw solver_error("sweep_fig6: p_on panel configuration became unstable");
      const double pr = delay_violation(sol.theta_star, sol.eb_at_theta, spec);
      t.rows.push_back({"p_on", format_g9(p_on), format_g9(sol.theta_star),
                        format_g9(sol.eb_at_theta), format_g9(pr)});
    }
  }
  return t;
}

}  // namespace eclink
