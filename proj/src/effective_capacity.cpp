#include "eclink/effective_capacity.hpp"

#include <cmath>

namespace eclink {
namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kResidualTol = 1e-10;
constexpr int kMaxIterations = 200;

}  // namespace

double channel_on_probability(const ChannelSpec& channel) {
  return channel.on_probability();
}

double effective_capacity(const ChannelSpec& channel, double theta) {
  if (!(theta >= 0.0) || !std::isfinite(theta))
    throw domain_error("effective_capacity: theta must be nonnegative and finite");
  if (channel.rate == 0.0) return 0.0;
  if (theta < kSmallTheta) return channel.mean_service_rate();

  const double p_on = channel.on_probability();
  // 1 - e^{-theta r} computed without cancellation for small theta*r.
  const double tail = -std::expm1(-theta * channel.rate);
  return -std::log1p(-p_on * tail) / theta;
}

double ec_rate_gradient(const ChannelSpec& channel, double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw domain_error("ec_rate_gradient: theta must be positive and finite");
  const double r = channel.rate;
  const double p_on = channel.on_probability();
  const double etr = std::exp(-theta * r);
  const double tail = -std::expm1(-theta * r);     // 1 - e^{-theta r}
  const double dpsi = std::exp2(r) * kLn2 / channel.snr;  // d(psi)/dr
  const double denom = 1.0 - p_on * tail;
  return p_on * (theta * etr - dpsi * tail) / (theta * denom);
}

double ec_rate_curvature(const ChannelSpec& channel, double theta, double h) {
  const double r = channel.rate;
  if (!(h > 0.0)) throw domain_error("ec_rate_curvature: step h must be positive");
  if (!(r > 2.0 * h))
    throw domain_error("ec_rate_curvature: rate must exceed 2h so the stencil stays in r >= 0");

  const double f0 = effective_capacity(channel, theta);
  const double f1 = effective_capacity(ChannelSpec(channel.snr, r - 2.0 * h), theta);
  const double f2 = effective_capacity(ChannelSpec(channel.snr, r - h), theta);
  const double f3 = effective_capacity(ChannelSpec(channel.snr, r + h), theta);
  const double f4 = effective_capacity(ChannelSpec(channel.snr, r + 2.0 * h), theta);

  const double num = -f1 + 16.0 * f2 - 30.0 * f0 + 16.0 * f3 - f4;
  const double mag = std::fabs(f1) + 16.0 * std::fabs(f2) + 30.0 * std::fabs(f0) +
                     16.0 * std::fabs(f3) + std::fabs(f4);
  // The stencil sums ~64 function values; below this ratio the difference
  // is dominated by rounding of the individual evaluations.
  if (std::fabs(num) < 1e-12 * mag)
    throw solver_error("ec_rate_curvature: step too small, second difference lost to rounding");
  return num / (12.0 * h * h);
}

RateOptimum optimal_rate(double snr, double theta) {
  if (!(snr > 0.0) || !std::isfinite(snr))
    throw domain_error("optimal_rate: snr must be positive and finite");
  if (!(theta >= 0.0) || !std::isfinite(theta))
    throw domain_error("optimal_rate: theta must be nonnegative and finite");

  // g is strictly decreasing with g(0) > 0; its root is the fixed point.
  const bool ergodic = theta < kSmallTheta;
  auto g = [&](double r) {
    if (ergodic) return snr / (std::exp2(r) * kLn2) - r;  // theta->0 limit
    return std::log1p(snr * theta / (std::exp2(r) * kLn2)) / theta - r;
  };

  double lo = 0.0;
  double hi = std::log2(1.0 + 40.0 * snr);  // psi > 40 makes ON negligible
  int iterations = 0;
  while (g(hi) > 0.0 && hi < 1e6) {
    hi *= 2.0;
    ++iterations;
  }
  while (hi - lo > 1e-12 * std::max(1.0, hi) && iterations < kMaxIterations) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
    ++iterations;
  }

  RateOptimum out;
  out.r_star = 0.5 * (lo + hi);
  out.residual = std::fabs(g(out.r_star));
  out.iterations = iterations;
  if (out.residual > kResidualTol)
    throw solver_error("optimal_rate: residual " + std::to_string(out.residual) +
                       " above tolerance after bisection on [" + std::to_string(lo) +
                       ", " + std::to_string(hi) + "]");
  out.ec_star = effective_capacity(ChannelSpec(snr, out.r_star), theta);
  return out;
}

}  // namespace eclink
