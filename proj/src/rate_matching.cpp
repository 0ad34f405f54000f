#include "eclink/rate_matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eclink/effective_bandwidth.hpp"
#include "eclink/effective_capacity.hpp"

namespace eclink {
namespace {

void check_ec_theta(const char* where, double ec, double theta) {
  if (!(ec > 0.0) || !std::isfinite(ec))
    throw domain_error(std::string(where) + ": ec must be positive and finite");
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw domain_error(std::string(where) + ": theta must be positive and finite");
}

// log(e^a + e^b) without overflow; tolerates -inf arguments.
double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

double max_on_rate_dtms(double p11, double p22, double ec, double theta) {
  if (!(p11 >= 0.0 && p11 <= 1.0) || !(p22 >= 0.0 && p22 <= 1.0) || !(p11 + p22 < 2.0))
    throw domain_error("max_on_rate_dtms: require p11, p22 in [0,1] with p11 + p22 < 2");
  check_ec_theta("max_on_rate_dtms", ec, theta);

  const double p_on = (1.0 - p11) / (2.0 - p11 - p22);
  if (theta < kSmallTheta) {
    // theta->0 matches mean rates: lambda* p_on = ec.
    if (p_on == 0.0)
      throw infeasible_error("max_on_rate_dtms: source is never ON, cannot reach a positive ec");
    return ec / p_on;
  }

  const double te = theta * ec;
  if (te <= 30.0) {
    const double S = std::exp(te);
    const double num = S * (S - p11);
    // p22 (S - 1) + (1 - p11): both terms nonnegative since S > 1.
    const double den = p22 * (S - 1.0) + (1.0 - p11);
    if (!(den > 0.0) || !(num > 0.0))
      throw infeasible_error("max_on_rate_dtms: log argument non-positive, no ON rate reaches ec");
    return std::log(num / den) / theta;
  }

  // Large tilt: work with logs so e^{theta ec} never overflows.
  const double u = std::exp(-te);
  const double num_ln = 2.0 * te + std::log1p(-p11 * u);
  const double den_a = (p22 > 0.0) ? std::log(p22) + te + std::log1p(-u)
                                   : -std::numeric_limits<double>::infinity();
  const double den_b = (p11 < 1.0) ? std::log1p(-p11)
                                   : -std::numeric_limits<double>::infinity();
  const double den_ln = log_add_exp(den_a, den_b);
  if (den_ln == -std::numeric_limits<double>::infinity())
    throw infeasible_error("max_on_rate_dtms: log argument non-positive, no ON rate reaches ec");
  return (num_ln - den_ln) / theta;
}

double max_on_rate_fms(double alpha, double beta, double ec, double theta) {
  // beta == 0 is the always-ON limit; the formula is continuous there.
  if (!(alpha > 0.0) || !(beta >= 0.0))
    throw domain_error("max_on_rate_fms: require alpha > 0 and beta >= 0");
  check_ec_theta("max_on_rate_fms", ec, theta);
  if (theta < kSmallTheta) return ec * (alpha + beta) / alpha;
  const double te = theta * ec;
  return ec * (te + alpha + beta) / (te + alpha);
}

double max_on_rate_mmps(double alpha, double beta, double ec, double theta) {
  // beta == 0 is the always-ON (pure Poisson) limit; continuous there.
  if (!(alpha > 0.0) || !(beta >= 0.0))
    throw domain_error("max_on_rate_mmps: require alpha > 0 and beta >= 0");
  check_ec_theta("max_on_rate_mmps", ec, theta);
  if (theta < kSmallTheta) return ec * (alpha + beta) / alpha;
  const double te = theta * ec;
  return theta * ec * (te + alpha + beta) / (std::expm1(theta) * (te + alpha));
}

double max_on_rate(const SourceModel& shape, double ec, double theta) {
  struct Visitor {
    double ec, theta;
    double operator()(const DtmsSource& s) const {
      return max_on_rate_dtms(s.p11, s.p22, ec, theta);
    }
    double operator()(const FmsSource& s) const {
      return max_on_rate_fms(s.alpha, s.beta, ec, theta);
    }
    double operator()(const MmpsSource& s) const {
      return max_on_rate_mmps(s.alpha, s.beta, ec, theta);
    }
  };
  return std::visit(Visitor{ec, theta}, shape);
}

double max_avg_rate(const SourceModel& shape, const ChannelSpec& channel, double theta) {
  const double ec = effective_capacity(channel, theta);
  if (ec == 0.0) return 0.0;
  const double lambda_on = max_on_rate(shape, ec, theta);
  return steady_state(shape).p_on * lambda_on;
}

QosSolution solve_qos_exponent(const SourceModel& source, const ChannelSpec& channel) {
  QosSolution out;
  const SteadyState ss = steady_state(source);
  const double mean_service = channel.mean_service_rate();
  if (!(ss.lambda_avg < mean_service)) {
    out.status = SolveStatus::unstable;
    return out;
  }

  auto f = [&](double theta) {
    return effective_bandwidth(source, theta) - effective_capacity(channel, theta);
  };

  double lo = 1e-6;
  if (f(lo) >= 0.0) {
    // The bandwidth/capacity gap must open negative near theta -> 0 for a
    // stable system; a nonnegative value here means the load is already
    // at the boundary.
    out.status = SolveStatus::unstable;
    return out;
  }

  double hi = lo;
  bool bracketed = false;
  while (hi < kThetaCap) {
    hi = std::min(hi * 2.0, kThetaCap);
    ++out.iterations;
    if (f(hi) > 0.0) {
      bracketed = true;
      break;
    }
    lo = hi;
  }
  if (!bracketed) {
    out.status = SolveStatus::underloaded;
    out.theta_star = kThetaCap;
    out.eb_at_theta = effective_bandwidth(source, kThetaCap);
    out.gap = std::fabs(f(kThetaCap));
    return out;
  }

  while (hi - lo > 1e-12 * hi && out.iterations < 300) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
    ++out.iterations;
  }
  out.theta_star = 0.5 * (lo + hi);
  out.eb_at_theta = effective_bandwidth(source, out.theta_star);
  out.gap = std::fabs(f(out.theta_star));
  out.status = SolveStatus::ok;
  return out;
}

double delay_violation(double theta_star, double a_star, const DelaySpec& spec) {
  if (!(theta_star >= 0.0) || !(a_star >= 0.0))
    throw domain_error("delay_violation: theta_star and a_star must be nonnegative");
  return std::min(1.0, spec.zeta * std::exp(-theta_star * a_star * spec.d));
}

}  // namespace eclink
