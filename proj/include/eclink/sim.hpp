#pragma once

// Independent Monte Carlo oracle: Markovian traffic generators, an ON/OFF
// Rayleigh service process, a fluid FIFO queue with per-bit delay
// accounting, and empirical estimators of effective bandwidth / effective
// capacity via log-sum-exp over replications.
//
// Conventions (fixed, tests depend on them):
//  - Arrival-first within a block: bits arriving in block k may be served
//    in block k, so a bit served immediately has delay 0.
//  - Queue content is fluid (real-valued) for all three source models.
//  - Queue length follows the exact Lindley form
//        serve[k] = min(q + a[k], s[k]);  q += a[k] - serve[k]
//    which reaches exactly 0 on a full drain; the FIFO buffer is used only
//    to attribute served mass back to arrival blocks (delay histogram),
//    never to track the queue length itself.
//  - Substreams: replication i draws arrivals from derive_seed(seed, 2i)
//    and channel states from derive_seed(seed, 2i+1); simulate_queue is
//    replication 0.  See rng.hpp.

#include <cstdint>
#include <string>
#include <vector>

#include "eclink/types.hpp"

namespace eclink {

struct SimConfig {
  SourceModel source;
  ChannelSpec channel;
  std::uint64_t n_blocks = 100000;
  std::uint64_t warmup_blocks = 1000;
  std::uint64_t seed = 1;
  bool store_sequences = false;  // keep per-block sequences and delay samples
  double blowup_bound = 0.0;     // 0 = auto: 1e4 + 1e3 * (lambda_on + rate)

  SimConfig(SourceModel src, ChannelSpec ch) : source(std::move(src)), channel(ch) {}
};

struct SimTrace {
  std::uint64_t n_blocks = 0;
  std::uint64_t warmup_blocks = 0;

  // Whole-run conservation totals (accumulated in long double):
  // total_departed_bits == total_arrival_bits - final_queue_bits.
  double total_arrival_bits = 0.0;
  double total_departed_bits = 0.0;
  double final_queue_bits = 0.0;
  double total_service_capacity_bits = 0.0;  // rate summed over ON blocks

  // Post-warmup summaries.
  double mean_arrival_rate = 0.0;  // bits/block
  double mean_service_rate = 0.0;  // potential service r*1{ON}, bits/block
  double mean_queue_bits = 0.0;
  double utilization = 0.0;  // mean_arrival_rate / mean_service_rate
  double zeta_hat = 0.0;     // fraction of post-warmup blocks with q > 0
  bool unstable = false;     // final queue above blow-up bound with offered load >= capacity

  // Bit-weighted delay histogram over post-warmup arrivals that departed
  // within the run: delay_hist[d] = bits departing d blocks after arrival.
  std::vector<double> delay_hist;
  double departed_mass = 0.0;  // sum of delay_hist
  double censored_mass = 0.0;  // post-warmup arrivals still queued at the end

  // Filled only when store_sequences is set.
  std::vector<double> arrivals_per_block;
  std::vector<std::uint8_t> service_on;
  std::vector<double> queue_bits;    // q after each block
  std::vector<double> delay_values;  // per served chunk: delay in blocks...
  std::vector<double> delay_masses;  // ...and the bit mass it carried

  // ccdf[d] = Pr{D >= d} over departed post-warmup mass; empty when no
  // mass departed.
  std::vector<double> delay_ccdf() const;
};

// One exponential fading draw per block; ON iff z >= psi, i.e. the
// instantaneous capacity log2(1 + snr*z) supports the rate.
std::vector<std::uint8_t> gen_channel_states(const ChannelSpec& channel,
                                             std::uint64_t n_blocks,
                                             std::uint64_t seed);

// Per-model generators (draw order is part of the determinism contract):
//  - DTMS: one uniform for the stationary initial state, then one uniform
//    per block (emit first, then step the chain).
//  - FMS: stationary initial state, then alternating exponential sojourns
//    walked across block boundaries; each block accumulates
//    lambda_on * (ON time within the block).
//  - MMPS: same modulating walk; within each ON segment, unit-bit arrivals
//    at exponential(lambda_on) gaps, binned into their blocks.
std::vector<double> gen_arrivals(const SourceModel& source,
                                 std::uint64_t n_blocks,
                                 std::uint64_t seed);

SimTrace simulate_queue(const SimConfig& config);

// Writes "block,arrival_bits,on,queue_bits" rows (9 significant digits).
// Requires a trace built with store_sequences.
void dump_trace_csv(const SimTrace& trace, const std::string& path);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t horizon = 0;
  std::uint64_t replications = 0;
};

// (1/(theta t)) ln E[e^{theta A(t)}] over per-replication cumulative
// arrivals, evaluated with log-sum-exp; delta-method standard error.
McEstimate estimate_eb(const SourceModel& source, double theta,
                       std::uint64_t horizon_t, std::uint64_t n_replications,
                       std::uint64_t seed);

// -(1/(theta t)) ln E[e^{-theta S(t)}] over per-replication cumulative
// service; same machinery with the opposite tilt.
McEstimate estimate_ec(const ChannelSpec& channel, double theta,
                       std::uint64_t horizon_t, std::uint64_t n_replications,
                       std::uint64_t seed);

// Aggregation layers behind the two estimators, exposed for direct testing:
// inputs are per-replication cumulative sums A_i(t) or S_i(t).
McEstimate eb_from_horizon_sums(const std::vector<double>& sums, double theta,
                                std::uint64_t horizon_t);
McEstimate ec_from_horizon_sums(const std::vector<double>& sums, double theta,
                                std::uint64_t horizon_t);

struct MomentEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Mean arrival rate (bits/block) across replications of length t.
MomentEstimate estimate_arrival_rate(const SourceModel& source, std::uint64_t horizon_t,
                                     std::uint64_t n_replications, std::uint64_t seed);

// Fraction of ON blocks across replications of length t.
MomentEstimate estimate_on_fraction(const ChannelSpec& channel, std::uint64_t horizon_t,
                                    std::uint64_t n_replications, std::uint64_t seed);

struct TailFit {
  double slope = 0.0;      // d ln Pr{D >= d} / dd
  double intercept = 0.0;  // ln Pr{D >= d} extrapolated to d = 0
  int points = 0;
  double d_first = 0.0;
  double d_last = 0.0;
};

// Least-squares line through (d, ln Pr{D >= d}) for integer d in
// [d_min, d_max], restricted to bins whose absolute tail mass is at least
// min_tail_mass bits — near-empty bins at the histogram's resolution floor
// otherwise dominate the fit and bias the slope.  Throws solver_error with
// fewer than three usable points.
TailFit fit_delay_tail(const SimTrace& trace, double d_min, double d_max,
                       double min_tail_mass = 25.0);

}  // namespace eclink
