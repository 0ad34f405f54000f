#pragma once

// Inverts the bandwidth = capacity matching condition: maximum supportable
// arrival rates per source model at a given effective capacity, the
// operating QoS exponent theta* where the source's effective bandwidth
// crosses the link's effective capacity, and the delay-violation bound
// Pr{D >= d} <= zeta * exp(-theta* a(theta*) d).

#include "eclink/types.hpp"

namespace eclink {

struct DelaySpec {
  double d = 0.0;     // delay threshold, blocks
  double zeta = 1.0;  // non-empty-buffer probability, (0, 1]

  DelaySpec(double d_, double zeta_ = 1.0) : d(d_), zeta(zeta_) {
    if (!(d >= 0.0) || !std::isfinite(d))
      throw domain_error("DelaySpec: d must be nonnegative and finite");
    if (!(zeta > 0.0 && zeta <= 1.0))
      throw domain_error("DelaySpec: zeta must lie in (0, 1]");
  }
};

enum class SolveStatus {
  ok,           // unique positive crossing found
  unstable,     // mean arrival rate >= mean service rate; queue grows
  underloaded,  // bandwidth < capacity up to the exponent cap; theta* is
                // reported at the cap (delay tail decays faster than any
                // tracked exponent)
};

struct QosSolution {
  double theta_star = 0.0;
  double eb_at_theta = 0.0;  // a(theta*) = C_E(theta*) at the crossing
  double gap = 0.0;          // |a(theta*) - C_E(theta*)|
  int iterations = 0;
  SolveStatus status = SolveStatus::ok;
};

// Exponent cap for the theta* search; crossings beyond it are reported as
// underloaded.
inline constexpr double kThetaCap = 1e3;

// Largest ON rate a two-state discrete Markov source may have so that its
// effective bandwidth at theta equals ec.  Throws infeasible_error when no
// positive rate can reach ec (e.g. absorbing-OFF chains).
double max_on_rate_dtms(double p11, double p22, double ec, double theta);

// Fluid-source counterpart: lambda* = ec (theta ec + alpha + beta)/(theta ec + alpha).
double max_on_rate_fms(double alpha, double beta, double ec, double theta);

// Markov-modulated Poisson counterpart; the unit-bit Poisson tilt replaces
// theta*lambda with (e^theta - 1)*lambda, so
// lambda* = theta ec (theta ec + alpha + beta)/((e^theta - 1)(theta ec + alpha)).
double max_on_rate_mmps(double alpha, double beta, double ec, double theta);

// Dispatch on the variant's transition dynamics (lambda_on is ignored).
double max_on_rate(const SourceModel& shape, double ec, double theta);

// P_ON * max_on_rate at ec = effective_capacity(channel, theta).
double max_avg_rate(const SourceModel& shape, const ChannelSpec& channel, double theta);

// Finds the unique theta* > 0 with a(theta*) = C_E(theta*): bracket by
// doubling from 1e-6 until the sign changes (cap kThetaCap), then bisect
// to 1e-12 relative.  Stability precondition lambda_avg < mean service is
// reported as status unstable rather than thrown.
QosSolution solve_qos_exponent(const SourceModel& source, const ChannelSpec& channel);

// min(1, zeta * exp(-theta_star * a_star * d)).
double delay_violation(double theta_star, double a_star, const DelaySpec& spec);

}  // namespace eclink
