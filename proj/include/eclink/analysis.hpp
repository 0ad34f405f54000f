#pragma once

// Bundles the closed-form analytics for one source + link configuration
// into a single report: steady state, bandwidth/capacity at the requested
// exponent, the optimal rate, maximum supportable arrival rates, the
// operating exponent theta*, and delay-violation bounds.

#include <optional>
#include <vector>

#include "eclink/effective_capacity.hpp"
#include "eclink/rate_matching.hpp"
#include "eclink/types.hpp"

namespace eclink {

struct AnalyzeRequest {
  SourceModel source;
  double snr = 1.0;                  // linear
  std::optional<double> rate;        // bits/block; default: r* at theta
  double theta = 1.0;                // QoS exponent for the closed forms
  std::vector<double> delay_thresholds;  // d values for the tail bound
  double zeta = 1.0;                 // non-empty-buffer prefactor, (0, 1]

  AnalyzeRequest(SourceModel src, double snr_) : source(std::move(src)), snr(snr_) {}
};

struct DelayResult {
  double d = 0.0;
  double zeta = 1.0;
  double probability = 0.0;
};

struct LinkReport {
  // Source side.
  double p_on_source = 0.0;
  double lambda_on = 0.0;
  double lambda_avg = 0.0;

  // Channel side at the rate in effect.
  double snr = 0.0;
  double rate_used = 0.0;
  bool rate_was_given = false;
  double psi = 0.0;
  double p_on_channel = 0.0;
  double mean_service_rate = 0.0;

  // Closed forms at the requested theta.
  double theta = 0.0;
  double eb_at_theta = 0.0;
  double ec_at_theta = 0.0;
  RateOptimum optimum;

  // Maximum supportable rates at ec_at_theta.
  double lambda_star_on = 0.0;
  double lambda_star_avg = 0.0;

  // Operating point of the configured source against the link.
  QosSolution operating;
  std::vector<DelayResult> delay;  // evaluated at theta* (only when ok/underloaded)
};

LinkReport analyze_link(const AnalyzeRequest& request);

}  // namespace eclink
