#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>

#include "doctest.h"
#include "eclink/effective_bandwidth.hpp"
#include "eclink/effective_capacity.hpp"
#include "eclink/rng.hpp"
#include "eclink/sim.hpp"
#include "eclink/types.hpp"
#include "oracle_constants.hpp"

using namespace eclink;

namespace {
double total(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}
}  // namespace

TEST_CASE("seed derivation separates substreams") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  // Stable across calls.
  CHECK(derive_seed(42, 7) == derive_seed(42, 7));
}

TEST_CASE("generators are deterministic in the seed") {
  const SourceModel src = DtmsSource(0.8, 0.2, 2.341);
  const auto a1 = gen_arrivals(src, 500, 99);
  const auto a2 = gen_arrivals(src, 500, 99);
  CHECK(a1 == a2);
  const auto a3 = gen_arrivals(src, 500, 100);
  CHECK(a1 != a3);

  const ChannelSpec ch(10.0, 1.6906);
  CHECK(gen_channel_states(ch, 500, 7) == gen_channel_states(ch, 500, 7));
  CHECK(gen_channel_states(ch, 500, 7) != gen_channel_states(ch, 500, 8));
}

TEST_CASE("channel states: zero rate is always ON, ON fraction tracks e^-psi") {
  const auto all_on = gen_channel_states(ChannelSpec(10.0, 0.0), 200, 5);
  for (auto b : all_on) CHECK(b == 1);

  const ChannelSpec ch(10.0, 1.6906);
  const auto on = gen_channel_states(ch, 20000, 11);
  double frac = 0.0;
  for (auto b : on) frac += b;
  frac /= 20000.0;
  const double p = ch.on_probability();  // 0.8003
  const double se = std::sqrt(p * (1.0 - p) / 20000.0);
  CHECK(std::fabs(frac - p) < 4.0 * se);
}

TEST_CASE("two-state chain arrivals take only the two levels") {
  const DtmsSource s(0.7, 0.4, 1.7);
  const auto a = gen_arrivals(SourceModel(s), 20000, 3);
  double on_blocks = 0.0;
  for (double v : a) {
    CHECK((v == 0.0 || v == 1.7));
    if (v > 0.0) on_blocks += 1.0;
  }
  // ON fraction near p_on = 0.3333; the chain mixes fast at these p's.
  CHECK(std::fabs(on_blocks / 20000.0 - s.p_on()) < 0.02);
}

TEST_CASE("fluid arrivals stay within one block's emission") {
  const FmsSource s(0.4, 0.8, 1.3);
  const auto a = gen_arrivals(SourceModel(s), 20000, 13);
  for (double v : a) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.3 * (1.0 + 1e-12));
  }
  CHECK(std::fabs(total(a) / 20000.0 - s.p_on() * 1.3) < 0.03);
}

TEST_CASE("poisson-modulated arrivals are whole bits") {
  const MmpsSource s(0.4, 0.8, 1.3);
  const auto a = gen_arrivals(SourceModel(s), 20000, 17);
  for (double v : a) {
    CHECK(v >= 0.0);
    CHECK(v == std::floor(v));
  }
  CHECK(std::fabs(total(a) / 20000.0 - s.p_on() * 1.3) < 0.03);
}

TEST_CASE("queue run conserves mass and attributes every post-warmup bit") {
  for (const SourceModel& src :
       {SourceModel(DtmsSource(0.8, 0.2, 2.341)), SourceModel(FmsSource(0.5, 0.7, 1.9)),
        SourceModel(MmpsSource(0.5, 0.7, 1.4))}) {
    SimConfig cfg(src, ChannelSpec(10.0, 1.6906));
    cfg.n_blocks = 50000;
    cfg.warmup_blocks = 500;
    cfg.seed = 21;
    cfg.store_sequences = true;
    const SimTrace t = simulate_queue(cfg);

    const double gap = std::fabs(t.total_arrival_bits - t.total_departed_bits -
                                 t.final_queue_bits);
    CHECK(gap <= 1e-9 * std::max(1.0, t.total_arrival_bits));

    // Histogram + censored queue covers exactly the post-warmup arrivals.
    double pw = 0.0;
    for (std::uint64_t k = cfg.warmup_blocks; k < cfg.n_blocks; ++k)
      pw += t.arrivals_per_block[k];
    CHECK(t.departed_mass + t.censored_mass ==
          doctest::Approx(pw).epsilon(1e-9));
    CHECK(total(t.delay_hist) == doctest::Approx(t.departed_mass).epsilon(1e-12));

    CHECK(t.zeta_hat >= 0.0);
    CHECK(t.zeta_hat <= 1.0);
    CHECK(!t.unstable);
    for (double qv : t.queue_bits) CHECK(qv >= 0.0);
  }
}

TEST_CASE("queue empties exactly under light load") {
  SimConfig cfg(SourceModel(DtmsSource(0.8, 0.2, 0.9)), ChannelSpec(10.0, 2.0));
  cfg.n_blocks = 20000;
  cfg.warmup_blocks = 100;
  cfg.seed = 4;
  cfg.store_sequences = true;
  const SimTrace t = simulate_queue(cfg);
  // The drain must reach literal zero, not an epsilon puddle, or the
  // nonempty-queue fraction saturates on long runs.
  std::uint64_t exact_zero = 0;
  for (double qv : t.queue_bits)
    if (qv == 0.0) ++exact_zero;
  CHECK(exact_zero > 0);
  CHECK(t.zeta_hat < 1.0);
}

TEST_CASE("nonempty-queue fraction grows with load") {
  const SourceModel src = DtmsSource(0.8, 0.2, 2.341);
  SimConfig light(src, ChannelSpec(10.0, 2.0));
  light.n_blocks = 40000;
  light.seed = 30;
  SimConfig heavy(src, ChannelSpec(10.0, 1.3));
  heavy.n_blocks = 40000;
  heavy.seed = 30;
  CHECK(simulate_queue(heavy).zeta_hat > simulate_queue(light).zeta_hat);
}

TEST_CASE("zero-rate service flags an unstable run") {
  SimConfig cfg(SourceModel(DtmsSource(0.0, 1.0, 2.0)), ChannelSpec(10.0, 0.0));
  cfg.n_blocks = 15000;
  cfg.warmup_blocks = 10;
  const SimTrace t = simulate_queue(cfg);
  CHECK(t.unstable);
  CHECK(t.final_queue_bits == doctest::Approx(2.0 * 15000).epsilon(1e-12));
}

TEST_CASE("queue run reuses the replication-0 substreams") {
  SimConfig cfg(SourceModel(MmpsSource(0.5, 0.7, 1.4)), ChannelSpec(10.0, 1.6906));
  cfg.n_blocks = 300;
  cfg.warmup_blocks = 10;
  cfg.seed = 123;
  cfg.store_sequences = true;
  const SimTrace t = simulate_queue(cfg);
  CHECK(t.arrivals_per_block == gen_arrivals(cfg.source, 300, derive_seed(123, 0)));
  CHECK(t.service_on == gen_channel_states(cfg.channel, 300, derive_seed(123, 1)));
}

TEST_CASE("log-sum-exp aggregation is exact on constant sums") {
  const std::vector<double> sums(64, 93.5);
  const McEstimate eb = eb_from_horizon_sums(sums, 0.7, 200);
  CHECK(eb.value == doctest::Approx(93.5 / 200.0).epsilon(1e-14));
  CHECK(eb.std_error == 0.0);
  const McEstimate ec = ec_from_horizon_sums(sums, 0.7, 200);
  CHECK(ec.value == doctest::Approx(93.5 / 200.0).epsilon(1e-14));
  CHECK(ec.std_error == 0.0);
}

TEST_CASE("single replication reproduces the raw generator sum") {
  const SourceModel src = FmsSource(0.5, 0.7, 1.9);
  const McEstimate est = estimate_eb(src, 0.1, 50, 1, 77);
  const double direct = total(gen_arrivals(src, 50, derive_seed(77, 0)));
  CHECK(est.value ==
        doctest::Approx(eb_from_horizon_sums({direct}, 0.1, 50).value).epsilon(1e-15));
  CHECK(est.std_error == 0.0);

  const ChannelSpec ch(10.0, 1.6906);
  const McEstimate ecs = estimate_ec(ch, 0.1, 50, 1, 77);
  const auto on = gen_channel_states(ch, 50, derive_seed(77, 1));
  double s = 0.0;
  for (auto b : on) s += b ? ch.rate : 0.0;
  CHECK(ecs.value ==
        doctest::Approx(ec_from_horizon_sums({s}, 0.1, 50).value).epsilon(1e-15));
}

TEST_CASE("estimators agree with the closed forms at moderate tilt") {
  const std::uint64_t t = 200, reps = 1500, seed = 6061;

  const SourceModel dtms = DtmsSource(0.5, 0.5, 1.0);
  const McEstimate e1 = estimate_eb(dtms, 0.1, t, reps, seed);
  CHECK(std::fabs(e1.value - effective_bandwidth(dtms, 0.1)) <= 3.0 * e1.std_error);

  const SourceModel fms = FmsSource(0.5, 0.5, 1.0);
  const McEstimate e2 = estimate_eb(fms, 0.1, t, reps, seed);
  CHECK(std::fabs(e2.value - effective_bandwidth(fms, 0.1)) <= 3.0 * e2.std_error);

  const SourceModel mmps = MmpsSource(0.5, 0.5, 1.0);
  const McEstimate e3 = estimate_eb(mmps, 0.1, t, reps, seed);
  CHECK(std::fabs(e3.value - effective_bandwidth(mmps, 0.1)) <= 3.0 * e3.std_error);

  const ChannelSpec ch(10.0, 1.73);
  const McEstimate e4 = estimate_ec(ch, 0.15, t, reps, seed);
  CHECK(std::fabs(e4.value - effective_capacity(ch, 0.15)) <= 3.0 * e4.std_error);

  const MomentEstimate mr = estimate_arrival_rate(dtms, t, reps, seed);
  CHECK(std::fabs(mr.mean - 0.5) <= 3.0 * mr.std_error);
  const MomentEstimate mo = estimate_on_fraction(ch, t, reps, seed);
  CHECK(std::fabs(mo.mean - ch.on_probability()) <= 3.0 * mo.std_error);
}

TEST_CASE("tail fit recovers an exact geometric decay") {
  SimTrace t;
  const double s = 0.8, c = 1e6;
  t.delay_hist.resize(41);
  for (int d = 0; d <= 40; ++d)
    t.delay_hist[d] = c * std::exp(-s * d) * -std::expm1(-s);
  t.departed_mass = total(t.delay_hist);

  const TailFit fit = fit_delay_tail(t, 5.0, 25.0);
  CHECK(fit.slope == doctest::Approx(-s).epsilon(1e-9));
  // Bins beyond d = 13 hold less than the 25-bit floor and must be skipped.
  CHECK(fit.d_last <= 14.0);
  CHECK(fit.points >= 8);

  // Too few usable points is an error, not a garbage fit.
  CHECK_THROWS_AS(fit_delay_tail(t, 12.0, 25.0), solver_error);
  SimTrace empty;
  CHECK_THROWS_AS(fit_delay_tail(empty, 5.0, 25.0), solver_error);
}

TEST_CASE("trace dump writes the documented CSV layout") {
  SimConfig cfg(SourceModel(DtmsSource(0.8, 0.2, 2.341)), ChannelSpec(10.0, 1.6906));
  cfg.n_blocks = 100;
  cfg.warmup_blocks = 10;
  cfg.store_sequences = true;
  const SimTrace t = simulate_queue(cfg);

  const auto path =
      (std::filesystem::temp_directory_path() / "eclink_trace_test.csv").string();
  dump_trace_csv(t, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line == "block,arrival_bits,on,queue_bits");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 100);
  std::filesystem::remove(path);

  SimTrace bare = simulate_queue(SimConfig(cfg.source, cfg.channel));
  CHECK_THROWS_AS(dump_trace_csv(bare, path), domain_error);
}

TEST_CASE("ccdf starts at 1 and is nonincreasing") {
  SimConfig cfg(SourceModel(DtmsSource(0.8, 0.2, 2.341)), ChannelSpec(10.0, 1.6906));
  cfg.n_blocks = 30000;
  cfg.warmup_blocks = 300;
  const SimTrace t = simulate_queue(cfg);
  const auto ccdf = t.delay_ccdf();
  REQUIRE(!ccdf.empty());
  CHECK(ccdf[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 1; i < ccdf.size(); ++i) CHECK(ccdf[i] <= ccdf[i - 1] + 1e-15);
}

TEST_CASE("simulation budget validation") {
  SimConfig cfg(SourceModel(DtmsSource(0.5, 0.5, 1.0)), ChannelSpec(10.0, 1.0));
  cfg.n_blocks = 100;
  cfg.warmup_blocks = 100;
  CHECK_THROWS_AS(simulate_queue(cfg), domain_error);
  CHECK_THROWS_AS(estimate_eb(cfg.source, -1.0, 10, 2, 1), domain_error);
  CHECK_THROWS_AS(eb_from_horizon_sums({}, 1.0, 10), domain_error);
}
