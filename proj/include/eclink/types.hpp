#pragma once

// Shared domain types and unit conventions.
//
// Units: every rate is in bits per block, where one block is one fading
// realization and one Markov step.  Continuous-time source parameters
// (alpha/beta) are per-block rates; sojourn times are measured in blocks.
// SNR is linear everywhere inside the library; dB conversion happens at
// the CLI/config boundary only.

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

namespace eclink {

// Below this, closed forms switch to their analytic theta->0 limits to
// avoid catastrophic cancellation.
inline constexpr double kSmallTheta = 1e-6;

// Thrown when a value violates a documented domain invariant.
class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when an iterative solver fails to converge or a fit is degenerate.
class solver_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a closed-form inversion is asked for an infeasible point
// (e.g. a non-positive log argument).
class infeasible_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double to_db(double linear) {
  if (!(linear > 0.0)) throw domain_error("to_db: value must be positive");
  return 10.0 * std::log10(linear);
}

inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

// Decay rate of the delay/buffer tail, units 1/bit.  theta > 0; callers
// compare against kSmallTheta before evaluating exponential-tilt formulas.
struct QosExponent {
  double theta = 1.0;

  explicit QosExponent(double t) : theta(t) {
    if (!(theta > 0.0) || !std::isfinite(theta))
      throw domain_error("QosExponent: theta must be positive and finite");
  }
};

// Fixed-rate link over Rayleigh block fading.  The block is ON (serves
// `rate` bits) iff the instantaneous capacity log2(1+snr*z) exceeds
// `rate`, z ~ unit-mean exponential; equivalently z >= psi().
struct ChannelSpec {
  double snr = 1.0;   // linear, dimensionless, > 0
  double rate = 0.0;  // bits/block, >= 0

  ChannelSpec(double snr_, double rate_) : snr(snr_), rate(rate_) {
    if (!(snr > 0.0) || !std::isfinite(snr))
      throw domain_error("ChannelSpec: snr must be positive and finite");
    if (!(rate >= 0.0) || !std::isfinite(rate))
      throw domain_error("ChannelSpec: rate must be nonnegative and finite");
  }

  double psi() const { return (std::exp2(rate) - 1.0) / snr; }
  double on_probability() const { return std::exp(-psi()); }
  double mean_service_rate() const { return on_probability() * rate; }
};

// Discrete-time two-state Markov source: emits lambda_on bits per ON block.
// p11 = stay-OFF probability, p22 = stay-ON probability.
struct DtmsSource {
  double p11 = 0.0;
  double p22 = 0.0;
  double lambda_on = 0.0;  // bits/block while ON

  DtmsSource() = default;  // silent source; keeps SourceModel default-constructible

  DtmsSource(double p11_, double p22_, double lambda_on_)
      : p11(p11_), p22(p22_), lambda_on(lambda_on_) {
    if (!(p11 >= 0.0 && p11 <= 1.0) || !(p22 >= 0.0 && p22 <= 1.0))
      throw domain_error("DtmsSource: p11 and p22 must lie in [0, 1]");
    if (!(p11 + p22 < 2.0))
      throw domain_error("DtmsSource: p11 + p22 must be < 2 (chain must not be absorbing in both states)");
    if (!(lambda_on >= 0.0) || !std::isfinite(lambda_on))
      throw domain_error("DtmsSource: lambda_on must be nonnegative and finite");
  }

  double p_on() const { return (1.0 - p11) / (2.0 - p11 - p22); }
};

// Markov fluid source: emits at continuous rate lambda_on while ON.
// alpha = OFF->ON rate, beta = ON->OFF rate (per block); exponential sojourns.
struct FmsSource {
  double alpha = 1.0;
  double beta = 1.0;
  double lambda_on = 0.0;  // fluid bits/block while ON

  FmsSource() = default;

  FmsSource(double alpha_, double beta_, double lambda_on_)
      : alpha(alpha_), beta(beta_), lambda_on(lambda_on_) {
    if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
      throw domain_error("FmsSource: alpha and beta must be positive and finite");
    if (!(lambda_on >= 0.0) || !std::isfinite(lambda_on))
      throw domain_error("FmsSource: lambda_on must be nonnegative and finite");
  }

  double p_on() const { return alpha / (alpha + beta); }
};

// Markov-modulated Poisson source: while ON, unit-bit arrivals form a
// Poisson stream of intensity lambda_on per block (each arrival is 1 bit,
// so the intensity equals the bit rate while ON).
struct MmpsSource {
  double alpha = 1.0;
  double beta = 1.0;
  double lambda_on = 0.0;  // Poisson intensity (= bits/block) while ON

  MmpsSource() = default;

  MmpsSource(double alpha_, double beta_, double lambda_on_)
      : alpha(alpha_), beta(beta_), lambda_on(lambda_on_) {
    if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
      throw domain_error("MmpsSource: alpha and beta must be positive and finite");
    if (!(lambda_on >= 0.0) || !std::isfinite(lambda_on))
      throw domain_error("MmpsSource: lambda_on must be nonnegative and finite");
  }

  double p_on() const { return alpha / (alpha + beta); }
};

using SourceModel = std::variant<DtmsSource, FmsSource, MmpsSource>;

struct SteadyState {
  double p_on = 0.0;        // stationary probability of the ON state
  double lambda_avg = 0.0;  // bits/block, = lambda_on * p_on
};

SteadyState steady_state(const SourceModel& source);

double peak_rate(const SourceModel& source);  // lambda_on of the variant

const char* source_kind(const SourceModel& source);  // "dtms" | "fms" | "mmps"

}  // namespace eclink
