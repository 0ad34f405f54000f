#include "eclink/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>
#include <numeric>

#include "eclink/rng.hpp"

namespace eclink {
namespace {

void check_budget(std::uint64_t n_blocks, std::uint64_t warmup) {
  if (n_blocks < 1) throw domain_error("simulation: n_blocks must be >= 1");
  if (warmup >= n_blocks) throw domain_error("simulation: warmup_blocks must be < n_blocks");
}

std::vector<double> arrivals_dtms(const DtmsSource& s, std::uint64_t n, SplitMix64& g) {
  std::vector<double> a(n, 0.0);
  bool on = g.u01() < s.p_on();
  for (std::uint64_t k = 0; k < n; ++k) {
    if (on) a[k] = s.lambda_on;
    const double u = g.u01();
    on = on ? (u < s.p22) : !(u < s.p11);
  }
  return a;
}

std::vector<double> arrivals_fms(const FmsSource& s, std::uint64_t n, SplitMix64& g) {
  std::vector<double> a(n, 0.0);
  const double nf = static_cast<double>(n);
  bool on = g.u01() < s.p_on();
  double t_cur = 0.0;
  double t_next = g.exponential(on ? s.beta : s.alpha);
  while (t_cur < nf) {
    const double seg_end = std::min(t_next, nf);
    if (on && s.lambda_on > 0.0 && seg_end > t_cur) {
      for (std::uint64_t k = static_cast<std::uint64_t>(t_cur); k < n && static_cast<double>(k) < seg_end; ++k) {
        const double lo = std::max(t_cur, static_cast<double>(k));
        const double hi = std::min(seg_end, static_cast<double>(k + 1));
        if (hi > lo) a[k] += s.lambda_on * (hi - lo);
      }
    }
    if (t_next >= nf) break;
    t_cur = t_next;
    on = !on;
    t_next = t_cur + g.exponential(on ? s.beta : s.alpha);
  }
  return a;
}

std::vector<double> arrivals_mmps(const MmpsSource& s, std::uint64_t n, SplitMix64& g) {
  std::vector<double> a(n, 0.0);
  const double nf = static_cast<double>(n);
  bool on = g.u01() < s.p_on();
  double t_cur = 0.0;
  double t_next = g.exponential(on ? s.beta : s.alpha);
  while (t_cur < nf) {
    const double seg_end = std::min(t_next, nf);
    if (on && s.lambda_on > 0.0) {
      // Memorylessness lets the Poisson clock restart at each ON entry.
      double t_arr = t_cur + g.exponential(s.lambda_on);
      while (t_arr < seg_end) {
        a[static_cast<std::uint64_t>(t_arr)] += 1.0;
        t_arr += g.exponential(s.lambda_on);
      }
    }
    if (t_next >= nf) break;
    t_cur = t_next;
    on = !on;
    t_next = t_cur + g.exponential(on ? s.beta : s.alpha);
  }
  return a;
}

}  // namespace

std::vector<std::uint8_t> gen_channel_states(const ChannelSpec& channel,
                                             std::uint64_t n_blocks,
                                             std::uint64_t seed) {
  std::vector<std::uint8_t> on(n_blocks, 0);
  SplitMix64 g(seed);
  const double psi = channel.psi();
  for (std::uint64_t k = 0; k < n_blocks; ++k)
    on[k] = g.exponential() >= psi ? 1 : 0;  // >= so rate 0 (psi 0) is always ON
  return on;
}

std::vector<double> gen_arrivals(const SourceModel& source, std::uint64_t n_blocks,
                                 std::uint64_t seed) {
  SplitMix64 g(seed);
  struct Visitor {
    std::uint64_t n;
    SplitMix64& g;
    std::vector<double> operator()(const DtmsSource& s) const { return arrivals_dtms(s, n, g); }
    std::vector<double> operator()(const FmsSource& s) const { return arrivals_fms(s, n, g); }
    std::vector<double> operator()(const MmpsSource& s) const { return arrivals_mmps(s, n, g); }
  };
  return std::visit(Visitor{n_blocks, g}, source);
}

SimTrace simulate_queue(const SimConfig& config) {
  check_budget(config.n_blocks, config.warmup_blocks);
  const std::uint64_t n = config.n_blocks;
  const std::uint64_t warmup = config.warmup_blocks;
  const double rate = config.channel.rate;

  const std::vector<double> arrivals = gen_arrivals(config.source, n, derive_seed(config.seed, 0));
  const std::vector<std::uint8_t> on = gen_channel_states(config.channel, n, derive_seed(config.seed, 1));

  SimTrace trace;
  trace.n_blocks = n;
  trace.warmup_blocks = warmup;
  if (config.store_sequences) {
    trace.arrivals_per_block = arrivals;
    trace.service_on = on;
    trace.queue_bits.reserve(n);
  }

  struct Chunk {
    std::uint64_t block;
    double mass;
  };
  std::deque<Chunk> fifo;

  long double tot_arr = 0.0L, tot_dep = 0.0L, tot_cap = 0.0L;
  long double pw_arr = 0.0L, pw_srv = 0.0L, pw_q = 0.0L, departed = 0.0L;
  std::uint64_t nonempty = 0;
  double q = 0.0;

  for (std::uint64_t k = 0; k < n; ++k) {
    const double a = arrivals[k];
    const double s = on[k] ? rate : 0.0;
    if (a > 0.0) fifo.push_back({k, a});

    const double serve = std::min(q + a, s);
    q = q + a - serve;  // exact 0 when s covers the whole backlog

    double rem = serve;
    while (rem > 0.0 && !fifo.empty()) {
      Chunk& c = fifo.front();
      const double take = std::min(c.mass, rem);
      if (c.block >= warmup) {
        const std::uint64_t d = k - c.block;
        if (trace.delay_hist.size() <= d) trace.delay_hist.resize(d + 1, 0.0);
        trace.delay_hist[d] += take;
        departed += take;
        if (config.store_sequences) {
          trace.delay_values.push_back(static_cast<double>(d));
          trace.delay_masses.push_back(take);
        }
      }
      c.mass -= take;
      rem -= take;
      if (c.mass <= 0.0) fifo.pop_front();
    }

    tot_arr += a;
    tot_dep += serve;
    if (on[k]) tot_cap += rate;
    if (k >= warmup) {
      pw_arr += a;
      pw_srv += s;
      pw_q += q;
      if (q > 0.0) ++nonempty;
    }
    if (config.store_sequences) trace.queue_bits.push_back(q);
  }

  for (const Chunk& c : fifo)
    if (c.block >= warmup) trace.censored_mass += c.mass;

  const double pw_blocks = static_cast<double>(n - warmup);
  trace.total_arrival_bits = static_cast<double>(tot_arr);
  trace.total_departed_bits = static_cast<double>(tot_dep);
  trace.final_queue_bits = q;
  trace.total_service_capacity_bits = static_cast<double>(tot_cap);
  trace.mean_arrival_rate = static_cast<double>(pw_arr) / pw_blocks;
  trace.mean_service_rate = static_cast<double>(pw_srv) / pw_blocks;
  trace.mean_queue_bits = static_cast<double>(pw_q) / pw_blocks;
  trace.utilization = trace.mean_service_rate > 0.0
                          ? trace.mean_arrival_rate / trace.mean_service_rate
                          : (trace.mean_arrival_rate > 0.0
                                 ? std::numeric_limits<double>::infinity()
                                 : 0.0);
  trace.zeta_hat = static_cast<double>(nonempty) / pw_blocks;
  trace.departed_mass = static_cast<double>(departed);

  const SteadyState ss = steady_state(config.source);
  const double bound = config.blowup_bound > 0.0
                           ? config.blowup_bound
                           : 1e4 + 1e3 * (peak_rate(config.source) + rate);
  trace.unstable = q > bound && ss.lambda_avg >= config.channel.mean_service_rate();
  return trace;
}

std::vector<double> SimTrace::delay_ccdf() const {
  if (departed_mass <= 0.0 || delay_hist.empty()) return {};
  std::vector<double> ccdf(delay_hist.size(), 0.0);
  long double tail = 0.0L;
  for (std::size_t d = delay_hist.size(); d-- > 0;) {
    tail += delay_hist[d];
    ccdf[d] = static_cast<double>(tail) / departed_mass;
  }
  return ccdf;
}

void dump_trace_csv(const SimTrace& trace, const std::string& path) {
  if (trace.arrivals_per_block.empty() && trace.n_blocks > 0)
    throw domain_error("dump_trace_csv: trace was built without store_sequences");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_trace_csv: cannot open " + path);
  out << "block,arrival_bits,on,queue_bits\n";
  char buf[96];
  for (std::uint64_t k = 0; k < trace.n_blocks; ++k) {
    std::snprintf(buf, sizeof buf, "%llu,%.9g,%u,%.9g",
                  static_cast<unsigned long long>(k), trace.arrivals_per_block[k],
                  static_cast<unsigned>(trace.service_on[k]), trace.queue_bits[k]);
    out << buf << '\n';
  }
}

namespace {

McEstimate from_tilted_sums(const std::vector<double>& sums, double theta,
                            std::uint64_t horizon_t, double sign) {
  if (sums.empty()) throw domain_error("estimator: need at least one replication");
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw domain_error("estimator: theta must be positive and finite");
  if (horizon_t < 1) throw domain_error("estimator: horizon must be >= 1");

  const std::size_t r = sums.size();
  double m = -std::numeric_limits<double>::infinity();
  for (double v : sums) m = std::max(m, sign * theta * v);

  // Shifted weights w_i = exp(x_i - max): mean and sample variance feed the
  // log-sum-exp value and the delta-method standard error of ln(mean).
  std::vector<double> w(r);
  long double wsum = 0.0L;
  for (std::size_t i = 0; i < r; ++i) {
    w[i] = std::exp(sign * theta * sums[i] - m);
    wsum += w[i];
  }
  const double wbar = static_cast<double>(wsum) / static_cast<double>(r);
  long double ss = 0.0L;
  for (double v : w) {
    const long double dlt = v - wbar;
    ss += dlt * dlt;
  }
  const double var = r > 1 ? static_cast<double>(ss) / static_cast<double>(r - 1) : 0.0;
  const double se_log_mean = wbar > 0.0 ? std::sqrt(var / static_cast<double>(r)) / wbar : 0.0;

  McEstimate est;
  est.value = sign * (m + std::log(wbar)) / (theta * static_cast<double>(horizon_t));
  est.std_error = se_log_mean / (theta * static_cast<double>(horizon_t));
  est.horizon = horizon_t;
  est.replications = r;
  return est;
}

MomentEstimate moments_of(const std::vector<double>& values) {
  const std::size_t r = values.size();
  long double sum = 0.0L;
  for (double v : values) sum += v;
  const double mean = static_cast<double>(sum) / static_cast<double>(r);
  long double ss = 0.0L;
  for (double v : values) {
    const long double dlt = v - mean;
    ss += dlt * dlt;
  }
  const double var = r > 1 ? static_cast<double>(ss) / static_cast<double>(r - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(r))};
}

}  // namespace

McEstimate eb_from_horizon_sums(const std::vector<double>& sums, double theta,
                                std::uint64_t horizon_t) {
  return from_tilted_sums(sums, theta, horizon_t, +1.0);
}

McEstimate ec_from_horizon_sums(const std::vector<double>& sums, double theta,
                                std::uint64_t horizon_t) {
  return from_tilted_sums(sums, theta, horizon_t, -1.0);
}

McEstimate estimate_eb(const SourceModel& source, double theta, std::uint64_t horizon_t,
                       std::uint64_t n_replications, std::uint64_t seed) {
  if (n_replications < 1) throw domain_error("estimate_eb: need n_replications >= 1");
  std::vector<double> sums(n_replications);
  for (std::uint64_t i = 0; i < n_replications; ++i) {
    const std::vector<double> a = gen_arrivals(source, horizon_t, derive_seed(seed, 2 * i));
    sums[i] = std::accumulate(a.begin(), a.end(), 0.0);
  }
  return eb_from_horizon_sums(sums, theta, horizon_t);
}

McEstimate estimate_ec(const ChannelSpec& channel, double theta, std::uint64_t horizon_t,
                       std::uint64_t n_replications, std::uint64_t seed) {
  if (n_replications < 1) throw domain_error("estimate_ec: need n_replications >= 1");
  std::vector<double> sums(n_replications);
  for (std::uint64_t i = 0; i < n_replications; ++i) {
    const std::vector<std::uint8_t> on =
        gen_channel_states(channel, horizon_t, derive_seed(seed, 2 * i + 1));
    std::uint64_t count = 0;
    for (std::uint8_t b : on) count += b;
    sums[i] = channel.rate * static_cast<double>(count);
  }
  return ec_from_horizon_sums(sums, theta, horizon_t);
}

MomentEstimate estimate_arrival_rate(const SourceModel& source, std::uint64_t horizon_t,
                                     std::uint64_t n_replications, std::uint64_t seed) {
  if (n_replications < 1 || horizon_t < 1)
    throw domain_error("estimate_arrival_rate: need horizon and replications >= 1");
  std::vector<double> rates(n_replications);
  for (std::uint64_t i = 0; i < n_replications; ++i) {
    const std::vector<double> a = gen_arrivals(source, horizon_t, derive_seed(seed, 2 * i));
    rates[i] = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(horizon_t);
  }
  return moments_of(rates);
}

MomentEstimate estimate_on_fraction(const ChannelSpec& channel, std::uint64_t horizon_t,
                                    std::uint64_t n_replications, std::uint64_t seed) {
  if (n_replications < 1 || horizon_t < 1)
    throw domain_error("estimate_on_fraction: need horizon and replications >= 1");
  std::vector<double> fracs(n_replications);
  for (std::uint64_t i = 0; i < n_replications; ++i) {
    const std::vector<std::uint8_t> on =
        gen_channel_states(channel, horizon_t, derive_seed(seed, 2 * i + 1));
    std::uint64_t count = 0;
    for (std::uint8_t b : on) count += b;
    fracs[i] = static_cast<double>(count) / static_cast<double>(horizon_t);
  }
  return moments_of(fracs);
}

TailFit fit_delay_tail(const SimTrace& trace, double d_min, double d_max,
                       double min_tail_mass) {
  if (trace.departed_mass <= 0.0)
    throw solver_error("fit_delay_tail: no departed mass to fit");
  if (!(d_min >= 0.0) || !(d_max >= d_min))
    throw domain_error("fit_delay_tail: need 0 <= d_min <= d_max");

  // Absolute tail mass per integer delay; the cutoff keeps the regression
  // away from bins the run cannot resolve.
  std::vector<long double> tail(trace.delay_hist.size() + 1, 0.0L);
  for (std::size_t d = trace.delay_hist.size(); d-- > 0;)
    tail[d] = tail[d + 1] + trace.delay_hist[d];

  std::vector<double> xs, ys;
  const std::size_t lo = static_cast<std::size_t>(std::ceil(d_min));
  for (std::size_t d = lo; d < trace.delay_hist.size() && static_cast<double>(d) <= d_max; ++d) {
    const double mass = static_cast<double>(tail[d]);
    if (mass < min_tail_mass || mass <= 0.0) continue;
    xs.push_back(static_cast<double>(d));
    ys.push_back(std::log(mass / trace.departed_mass));
  }
  if (xs.size() < 3)
    throw solver_error("fit_delay_tail: fewer than 3 usable histogram bins in [" +
                       std::to_string(d_min) + ", " + std::to_string(d_max) +
                       "] with tail mass >= " + std::to_string(min_tail_mass));

  const std::size_t np = xs.size();
  double xbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < np; ++i) {
    xbar += xs[i];
    ybar += ys[i];
  }
  xbar /= static_cast<double>(np);
  ybar /= static_cast<double>(np);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < np; ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }

  TailFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  fit.points = static_cast<int>(np);
  fit.d_first = xs.front();
  fit.d_last = xs.back();
  return fit;
}

}  // namespace eclink
