#include "eclink/effective_bandwidth.hpp"

#include <cmath>
#include <limits>

namespace eclink {
namespace {

// Stable x + sqrt(x^2 + c) for c >= 0: rewritten when x < 0 so the two
// large terms never cancel.
double add_sqrt(double x, double c) {
  const double root = std::sqrt(x * x + c);
  if (x >= 0.0) return x + root;
  return c / (root - x);
}

}  // namespace

double eb_dtms(const DtmsSource& s, double theta) {
  if (!(theta >= 0.0) || !std::isfinite(theta))
    throw domain_error("eb_dtms: theta must be nonnegative and finite");
  if (s.lambda_on == 0.0) return 0.0;
  if (theta < kSmallTheta) return s.lambda_on * s.p_on();

  const double tl = theta * s.lambda_on;
  if (tl <= 30.0) {
    const double E = std::exp(tl);
    const double sum = s.p11 + s.p22 * E;
    // (p11 + p22 E)^2 - 4(p11+p22-1)E rearranged into a sum of nonnegative
    // terms so near-memoryless chains do not cancel.
    const double diff = s.p11 - s.p22 * E;
    const double disc = diff * diff + 4.0 * E * (1.0 - s.p11) * (1.0 - s.p22);
    const double spectral = 0.5 * (sum + std::sqrt(disc));
    return std::log(spectral) / theta;
  }

  // Large tilt: factor e^{theta*lambda} out of the spectral radius so the
  // exponential never overflows.  t = e^{-theta*lambda} <= e^{-30}.
  const double t = std::exp(-tl);
  if (s.p22 > 0.0) {
    const double diff = s.p22 - s.p11 * t;
    const double disc = diff * diff + 4.0 * t * (1.0 - s.p11) * (1.0 - s.p22);
    const double bracket = 0.5 * (s.p11 * t + s.p22 + std::sqrt(disc));
    return s.lambda_on + std::log(bracket) / theta;
  }
  // p22 == 0: spectral radius ~ sqrt(E), so factor e^{theta*lambda/2}.
  const double h = std::exp(-0.5 * tl);
  const double bracket = 0.5 * (s.p11 * h + std::sqrt(s.p11 * s.p11 * h * h + 4.0 * (1.0 - s.p11)));
  return 0.5 * s.lambda_on + std::log(bracket) / theta;
}

double eb_fms(const FmsSource& s, double theta) {
  if (!(theta >= 0.0) || !std::isfinite(theta))
    throw domain_error("eb_fms: theta must be nonnegative and finite");
  if (s.lambda_on == 0.0) return 0.0;
  if (theta < kSmallTheta) return s.lambda_on * s.p_on();

  const double tl = theta * s.lambda_on;
  const double x = tl - (s.alpha + s.beta);
  return add_sqrt(x, 4.0 * s.alpha * tl) / (2.0 * theta);
}

double eb_mmps(const MmpsSource& s, double theta) {
  if (!(theta >= 0.0) || !std::isfinite(theta))
    throw domain_error("eb_mmps: theta must be nonnegative and finite");
  if (s.lambda_on == 0.0) return 0.0;
  if (theta < kSmallTheta) return s.lambda_on * s.p_on();

  // Unit-bit Poisson arrivals tilt as (e^theta - 1) * lambda where the
  // fluid source tilts as theta * lambda.
  const double tilt = std::expm1(theta) * s.lambda_on;
  if (!std::isfinite(tilt)) return std::numeric_limits<double>::infinity();
  const double x = tilt - (s.alpha + s.beta);
  return add_sqrt(x, 4.0 * s.alpha * tilt) / (2.0 * theta);
}

double effective_bandwidth(const SourceModel& source, double theta) {
  struct Visitor {
    double theta;
    double operator()(const DtmsSource& s) const { return eb_dtms(s, theta); }
    double operator()(const FmsSource& s) const { return eb_fms(s, theta); }
    double operator()(const MmpsSource& s) const { return eb_mmps(s, theta); }
  };
  return std::visit(Visitor{theta}, source);
}

}  // namespace eclink
