#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "eclink/types.hpp"
#include "oracle_constants.hpp"

using namespace eclink;

TEST_CASE("decibel conversions") {
  CHECK(from_db(0.0) == doctest::Approx(1.0));
  CHECK(from_db(10.0) == doctest::Approx(10.0));
  CHECK(from_db(20.0) == doctest::Approx(100.0));
  CHECK(to_db(10.0) == doctest::Approx(10.0));
  CHECK(to_db(from_db(7.3)) == doctest::Approx(7.3).epsilon(1e-12));
}

TEST_CASE("channel threshold, ON probability, mean service") {
  const ChannelSpec ch(10.0, 1.69);
  CHECK(ch.psi() == doctest::Approx((std::exp2(1.69) - 1.0) / 10.0).epsilon(1e-15));
  CHECK(ch.on_probability() == doctest::Approx(oracle::kPOnChannel_10_169).epsilon(1e-14));

  const ChannelSpec ch2(10.0, 1.6906);
  CHECK(ch2.on_probability() ==
        doctest::Approx(oracle::kPOnChannel_10_16906).epsilon(1e-14));
  CHECK(ch2.mean_service_rate() ==
        doctest::Approx(oracle::kMeanService_10_16906).epsilon(1e-14));

  // Zero rate transmits nothing but is always "ON".
  const ChannelSpec idle(5.0, 0.0);
  CHECK(idle.psi() == 0.0);
  CHECK(idle.on_probability() == 1.0);
  CHECK(idle.mean_service_rate() == 0.0);
}

TEST_CASE("channel validation") {
  CHECK_THROWS_AS(ChannelSpec(0.0, 1.0), domain_error);
  CHECK_THROWS_AS(ChannelSpec(-3.0, 1.0), domain_error);
  CHECK_THROWS_AS(ChannelSpec(1.0, -0.5), domain_error);
  CHECK_THROWS_AS(QosExponent(0.0), domain_error);
  CHECK_THROWS_AS(QosExponent(-1.0), domain_error);
}

TEST_CASE("two-state chain steady state") {
  const DtmsSource s(0.8, 0.2, 2.341);
  CHECK(s.p_on() == doctest::Approx(0.2).epsilon(1e-15));
  const SteadyState ss = steady_state(SourceModel(s));
  CHECK(ss.p_on == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(ss.lambda_avg == doctest::Approx(0.2 * 2.341).epsilon(1e-15));

  // Always-ON and always-OFF corners.
  CHECK(DtmsSource(0.0, 1.0, 1.0).p_on() == doctest::Approx(1.0));
  CHECK(DtmsSource(1.0, 0.5, 1.0).p_on() == doctest::Approx(0.0));
}

TEST_CASE("dtms validation") {
  CHECK_THROWS_AS(DtmsSource(-0.1, 0.5, 1.0), domain_error);
  CHECK_THROWS_AS(DtmsSource(0.5, 1.1, 1.0), domain_error);
  CHECK_THROWS_AS(DtmsSource(1.0, 1.0, 1.0), domain_error);  // periodic chain
  CHECK_THROWS_AS(DtmsSource(0.5, 0.5, -1.0), domain_error);
  CHECK_NOTHROW(DtmsSource(0.5, 0.5, 0.0));
}

TEST_CASE("fluid and poisson steady state") {
  const FmsSource f(0.2, 0.8, 1.73);
  CHECK(f.p_on() == doctest::Approx(0.2).epsilon(1e-15));
  const MmpsSource m(0.7, 0.3, 1.4);
  CHECK(m.p_on() == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(steady_state(SourceModel(m)).lambda_avg ==
        doctest::Approx(0.7 * 1.4).epsilon(1e-15));

  CHECK_THROWS_AS(FmsSource(0.0, 1.0, 1.0), domain_error);
  CHECK_THROWS_AS(FmsSource(1.0, -0.2, 1.0), domain_error);
  CHECK_THROWS_AS(MmpsSource(-1.0, 1.0, 1.0), domain_error);
  CHECK_THROWS_AS(MmpsSource(1.0, 0.0, 1.0), domain_error);
  CHECK_THROWS_AS(MmpsSource(1.0, 1.0, -0.1), domain_error);
}

TEST_CASE("source kind and peak rate") {
  CHECK(std::string(source_kind(SourceModel(DtmsSource(0.5, 0.5, 1.0)))) == "dtms");
  CHECK(std::string(source_kind(SourceModel(FmsSource(1.0, 1.0, 1.0)))) == "fms");
  CHECK(std::string(source_kind(SourceModel(MmpsSource(1.0, 1.0, 1.0)))) == "mmps");
  CHECK(peak_rate(SourceModel(DtmsSource(0.5, 0.5, 2.5))) == doctest::Approx(2.5));
}
