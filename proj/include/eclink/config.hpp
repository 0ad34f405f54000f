#pragma once

// JSON run configuration shared by the CLI subcommands.
//
// A config file is a single JSON object with sections
//   source   (required)  {"kind": "dtms"|"fms"|"mmps", ...model fields...}
//   channel  (required)  {"snr_db": <dB>, "rate": <bits/block, optional>}
//   qos      (optional)  {"theta": <positive>}           default theta = 1
//   delay    (optional)  {"d": <number or array>, "zeta": <number or "simulate">}
//   sweep    (optional)  {"points": <int>, "delay_threshold": <number>}
//   sim      (optional)  {"blocks", "warmup", "replications", "horizon",
//                         "seed", "mc_theta", "tail_blocks", "tail_d_min",
//                         "tail_d_max", "store_sequences"}
//
// SNR appears in decibels in config files only; everything in the library
// API is linear.  Unknown keys anywhere are rejected, and every error
// message carries the dotted field path (e.g. "source.p11").

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eclink/types.hpp"

namespace eclink {

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DelayConfig {
  std::vector<double> thresholds;  // empty = no delay-bound evaluation
  double zeta = 1.0;
  bool zeta_from_sim = false;  // "zeta": "simulate" — use the simulated
                               // nonempty-queue fraction instead
};

struct SweepConfig {
  int points = 0;  // 0 = per-figure default
  double delay_threshold = 5.0;
};

struct SimSettings {
  std::uint64_t blocks = 100000;  // single-run length (conservation, zeta)
  std::uint64_t warmup = 1000;
  std::uint64_t replications = 400;  // estimator replications
  std::uint64_t horizon = 200;       // estimator horizon t (blocks)
  std::uint64_t seed = 1;
  // Tilt used by the bandwidth/capacity Monte Carlo cross-checks.  Kept
  // separate from qos.theta: large tilts put the tilted-moment estimators
  // in the rare-event regime, where the sample average misses the true
  // expectation by design (it would need exponentially many replications),
  // so the formula check must run at a tilt the estimator can reach.
  double mc_theta = 0.1;
  std::uint64_t tail_blocks = 0;  // 0 = skip the delay-tail check
  double tail_d_min = 5.0;
  double tail_d_max = 25.0;
  bool store_sequences = false;
};

struct RunConfig {
  SourceModel source = DtmsSource(0.5, 0.5, 1.0);
  double snr = 1.0;  // linear (converted from channel.snr_db)
  std::optional<double> rate;
  double theta = 1.0;
  DelayConfig delay;
  SweepConfig sweep;
  SimSettings sim;
};

// Parse from a JSON string / file.  Throws config_error with a dotted
// field path on any structural or domain problem.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

}  // namespace eclink
