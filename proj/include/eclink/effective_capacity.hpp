#pragma once

// Effective capacity of the fixed-rate ON/OFF Rayleigh link: the maximum
// constant arrival rate the time-varying service can support under an
// exponential tail constraint with exponent theta.  Channel ON/OFF states
// are independent across blocks (memoryless two-state chain).
//
// Includes the closed-form rate derivative, a finite-difference curvature
// probe, and the optimal-rate fixed-point solver.

#include "eclink/types.hpp"

namespace eclink {

struct RateOptimum {
  double r_star = 0.0;    // bits/block
  double ec_star = 0.0;   // bits/block, effective capacity at r_star
  double residual = 0.0;  // |r_star - fixed-point map(r_star)|
  int iterations = 0;
};

double channel_on_probability(const ChannelSpec& channel);

double effective_capacity(const ChannelSpec& channel, double theta);

// Closed-form dC_E/dr at channel.rate: positive below the optimum,
// negative above it.
double ec_rate_gradient(const ChannelSpec& channel, double theta);

// Five-point central second difference of C_E in the rate, step h.
// Throws solver_error when h is so small the difference is lost to
// rounding, domain_error when the stencil leaves r >= 0.
double ec_rate_curvature(const ChannelSpec& channel, double theta, double h = 1e-3);

// Solves r = (1/theta) ln(1 + snr*theta/(2^r ln 2)) by bisection on the
// strictly decreasing g(r) = rhs(r) - r over [0, log2(1 + 40*snr)].
// Residual tolerance 1e-10.  theta below kSmallTheta optimizes the
// ergodic rate e^{-psi(r)} * r instead (the theta->0 limit).
RateOptimum optimal_rate(double snr, double theta);

}  // namespace eclink
