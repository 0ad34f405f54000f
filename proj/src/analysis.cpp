#include "eclink/analysis.hpp"

#include "eclink/effective_bandwidth.hpp"

namespace eclink {

LinkReport analyze_link(const AnalyzeRequest& request) {
  if (!(request.theta > 0.0) || !std::isfinite(request.theta))
    throw domain_error("analyze: theta must be positive and finite");

  LinkReport report;
  const SteadyState ss = steady_state(request.source);
  report.p_on_source = ss.p_on;
  report.lambda_on = peak_rate(request.source);
  report.lambda_avg = ss.lambda_avg;
  report.theta = request.theta;

  report.optimum = optimal_rate(request.snr, request.theta);
  report.rate_was_given = request.rate.has_value();
  report.rate_used = request.rate.value_or(report.optimum.r_star);
  if (!(report.rate_used >= 0.0))
    throw domain_error("analyze: rate must be nonnegative");

  const ChannelSpec channel(request.snr, report.rate_used);
  report.snr = request.snr;
  report.psi = channel.psi();
  report.p_on_channel = channel.on_probability();
  report.mean_service_rate = channel.mean_service_rate();

  report.eb_at_theta = effective_bandwidth(request.source, request.theta);
  report.ec_at_theta = effective_capacity(channel, request.theta);
  if (report.ec_at_theta > 0.0) {
    report.lambda_star_on = max_on_rate(request.source, report.ec_at_theta, request.theta);
    report.lambda_star_avg = ss.p_on * report.lambda_star_on;
  }

  report.operating = solve_qos_exponent(request.source, channel);
  if (report.operating.status != SolveStatus::unstable) {
    for (double d : request.delay_thresholds) {
      const DelaySpec spec(d, request.zeta);
      report.delay.push_back({d, request.zeta,
                              delay_violation(report.operating.theta_star,
                                              report.operating.eb_at_theta, spec)});
    }
  }
  return report;
}

}  // namespace eclink
