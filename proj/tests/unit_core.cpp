#include <doctest.h>

#include <set>

#include "erdkit/bands.hpp"
#include "erdkit/erd_measure.hpp"
#include "erdkit/errors.hpp"
#include "erdkit/montage.hpp"
#include "erdkit/timing.hpp"
#include "helpers.hpp"

using namespace erdkit;

TEST_CASE("erd measure arithmetic") {
  CHECK(erd_percent(30.0, 100.0).percent() == -70.0);
  CHECK(erd_percent(100.0, 100.0).percent() == 0.0);
  CHECK(erd_percent(60.0, 100.0).percent() == -40.0);  // identification boundary

  // Strict threshold: exactly -40 is not identified at 40.
  CHECK_FALSE(erd_percent(60.0, 100.0).identified(40.0));
  CHECK(erd_percent(59.0, 100.0).identified(40.0));

  CHECK(ErdMeasure::from_ratio(0.6).ratio() == 0.6);
  CHECK(ErdMeasure::from_percent(-40.0).ratio() == doctest::Approx(0.6));
  CHECK_THROWS_AS(erd_percent(1.0, 0.0), DegenerateReferenceError);
  CHECK_THROWS_AS(erd_percent(-1.0, 1.0), InputError);
}

TEST_CASE("erd measure round trips and view consistency") {
  testutil::Rng rng(42);
  for (int i = 0; i < 1000; ++i) {
    const double p = rng.uniform() * 200.0 - 100.0;  // [-100, 100)
    const ErdMeasure mp = ErdMeasure::from_percent(p);
    CHECK(mp.percent() == p);  // exact round trip of the constructed view
    CHECK(mp.ratio() == 1.0 + p / 100.0);

    const double r = rng.uniform() * 3.0;
    const ErdMeasure mr = ErdMeasure::from_ratio(r);
    CHECK(mr.ratio() == r);
    CHECK(mr.percent() == (r - 1.0) * 100.0);
  }
}

TEST_CASE("erd percent is scale invariant") {
  testutil::Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const double a = rng.uniform() * 50.0 + 1.0;
    const double r = rng.uniform() * 50.0 + 1.0;
    const double k = rng.uniform() * 10.0 + 0.1;
    CHECK(erd_percent(k * a, k * r).percent() ==
          doctest::Approx(erd_percent(a, r).percent()).epsilon(1e-12));
  }
}

TEST_CASE("band bank enumeration") {
  const auto full = enumerate_bands(5.5, 16.5, 2.0, 1.0);
  REQUIRE(full.size() == 10);
  CHECK(full.front().lo_hz == doctest::Approx(5.5));
  CHECK(full.front().hi_hz == doctest::Approx(7.5));
  CHECK(full.back().lo_hz == doctest::Approx(14.5));
  CHECK(full.back().hi_hz == doctest::Approx(16.5));

  const auto reporting = enumerate_bands(9.0, 14.0, 2.0, 1.0);
  REQUIRE(reporting.size() == 4);
  CHECK(reporting.front().lo_hz == doctest::Approx(9.0));
  CHECK(reporting.back().hi_hz == doctest::Approx(14.0));

  CHECK_THROWS_AS(enumerate_bands(0.0, 4.0, 2.0, 2.0), ConfigError);
}

TEST_CASE("band bank coverage: every interior frequency in two bands") {
  const auto bank = enumerate_bands(5.5, 16.5, 2.0, 1.0);
  for (double f = 6.6; f < 15.5; f += 0.137) {
    int covering = 0;
    for (const auto& b : bank) {
      if (f > b.lo_hz && f < b.hi_hz) ++covering;
    }
    CHECK_MESSAGE(covering == 2, "frequency ", f);
  }
}

TEST_CASE("default montage geometry") {
  const Montage m = default_montage();
  CHECK(m.size() == 16);
  CHECK(m.at("C3").hemisphere == Hemisphere::Left);
  CHECK(m.at("Cz").hemisphere == Hemisphere::Midline);
  CHECK(m.at("C4").hemisphere == Hemisphere::Right);
  CHECK(m.adjacent("C3", "C1"));
  CHECK(m.adjacent("FCz", "C1"));   // diagonal
  CHECK_FALSE(m.adjacent("C3", "Cz"));
  CHECK_FALSE(m.adjacent("FC3", "CP3"));
  CHECK_THROWS_AS(m.index_of("Oz"), ConfigError);
}

TEST_CASE("default differential pairs: count, groups, adjacency") {
  const Montage m = default_montage();
  const auto pairs = default_differential_pairs();
  REQUIRE(pairs.size() == 33);
  validate_pairs(m, pairs, true);

  int left = 0, inter = 0, right = 0;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& p : pairs) {
    CHECK(m.adjacent(p.pos, p.neg));
    CHECK(p.group == group_for_pair(m, p.pos, p.neg));
    auto key = std::minmax(p.pos, p.neg);
    CHECK(seen.insert({key.first, key.second}).second);  // no duplicates
    switch (p.group) {
      case PairGroup::LeftSide: ++left; break;
      case PairGroup::InterHemisphere: ++inter; break;
      case PairGroup::RightSide: ++right; break;
    }
  }
  CHECK(left == 7);
  CHECK(inter == 19);
  CHECK(right == 7);
}

TEST_CASE("pair validation rejects non-adjacent pairs in strict mode") {
  const Montage m = default_montage();
  std::vector<DifferentialPair> pairs{{"C3", "C4", PairGroup::InterHemisphere}};
  CHECK_THROWS_AS(validate_pairs(m, pairs, true), ConfigError);
  CHECK_NOTHROW(validate_pairs(m, pairs, false));
}

TEST_CASE("montage rejects inconsistent hemisphere metadata") {
  std::vector<Electrode> bad{{"A1", 0, 0, Hemisphere::Right},
                             {"A2", 0, 2, Hemisphere::Midline}};
  CHECK_THROWS_AS(Montage(bad, 2), ConfigError);
  std::vector<Electrode> dup{{"A1", 0, 0, Hemisphere::Left},
                             {"A1", 0, 1, Hemisphere::Left}};
  CHECK_THROWS_AS(Montage(dup, 2), ConfigError);
}

TEST_CASE("millisecond to sample conversion rounds half up") {
  CHECK(ms_to_samples(500.0, 512.0) == 256);
  CHECK(ms_to_samples(1000.0, 512.0) == 512);
  CHECK(ms_to_samples(1.0, 512.0) == 1);      // 0.512 rounds to 1
  CHECK(ms_to_samples(0.9, 512.0) == 0);      // 0.46 rounds to 0
  CHECK(ms_to_samples(62.5, 512.0) == 32);
}

TEST_CASE("trial timing validation") {
  TrialTiming t;
  CHECK_NOTHROW(t.validate());
  t.post_trigger_ms = 1000.0;  // not divisible into whole-ms thirds? 333.3..
  CHECK_THROWS_AS(t.validate(), ConfigError);
  t = TrialTiming{};
  t.movement_min_ms = 800.0;  // min above max
  CHECK_THROWS_AS(t.validate(), ConfigError);
  t = TrialTiming{};
  t.pre_trigger_ms = 0.0;
  CHECK_THROWS_AS(t.validate(), ConfigError);
}

TEST_CASE("trigger codes") {
  CHECK(is_valid_trigger_code(1));
  CHECK(is_valid_trigger_code(4));
  CHECK_FALSE(is_valid_trigger_code(0));
  CHECK_FALSE(is_valid_trigger_code(5));
}
