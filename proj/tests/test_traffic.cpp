#include <doctest.h>

#include "epon/errors.hpp"
#include "epon/traffic.hpp"

using namespace epon;

namespace {

const ClassMap<double> kUniform = {{1.0 / 3, 1.0 / 3, 1.0 / 3}};
const ClassMap<double> kWeights = {{0.5, 0.3, 0.2}};

SystemConfig reference_tree() { return SystemConfig::homogeneous(16, 1e9, 5e-6, 1500, 15000); }

}  // namespace

TEST_CASE("profile invariants") {
  CHECK_THROWS_AS(TrafficProfile({{0.5, 0.6, 0.1}}, kWeights, 0.1), InvalidArgument);
  CHECK_THROWS_AS(TrafficProfile({{1.2, -0.2, 0.0}}, kWeights, 0.1), InvalidArgument);
  CHECK_THROWS_AS(TrafficProfile(kUniform, {{0.5, 0.5, 0.0}}, 0.1), InvalidArgument);
  CHECK_THROWS_AS(TrafficProfile(kUniform, kWeights, 1.0), InvalidArgument);
  CHECK_THROWS_AS(TrafficProfile(kUniform, kWeights, -0.1), InvalidArgument);
  CHECK_NOTHROW(TrafficProfile({{1.0, 0.0, 0.0}}, kWeights, 0.0));
}

TEST_CASE("class arrival rates") {
  const auto tree = reference_tree();
  SUBCASE("zero load") {
    const auto rates = class_arrival_rates(TrafficProfile(kUniform, kWeights, 0.0), tree);
    for (double r : rates.values) CHECK(r == 0.0);
  }
  SUBCASE("channel normalization at 0.3") {
    const auto rates = class_arrival_rates(TrafficProfile(kUniform, kWeights, 0.3), tree);
    CHECK(rates.sum() == doctest::Approx(25000).epsilon(1e-12));
    for (double r : rates.values) CHECK(r == doctest::Approx(25000.0 / 3).epsilon(1e-12));
  }
  SUBCASE("skewed mix at 0.4") {
    const auto rates = class_arrival_rates(TrafficProfile({{0.2, 0.3, 0.5}}, kWeights, 0.4), tree);
    CHECK(rates[TrafficClass::BE] == doctest::Approx(16666.666666666667).epsilon(1e-12));
    CHECK(rates.sum() == doctest::Approx(0.4 * 1e9 / 12000).epsilon(1e-12));
  }
  SUBCASE("guaranteed-bandwidth normalization") {
    const auto rates = class_arrival_rates(
        TrafficProfile(kUniform, kWeights, 0.5, LoadNormalization::GuaranteedBandwidth), tree);
    CHECK(rates.sum() == doctest::Approx(2500).epsilon(1e-12));
  }
}

TEST_CASE("service shares") {
  const auto uniform = service_shares(TrafficProfile(kUniform, {{1.0 / 3, 1.0 / 3, 1.0 / 3}}, 0.1));
  for (double s : uniform.values) CHECK(s == doctest::Approx(1.0 / 9).epsilon(1e-14));

  const auto skewed = service_shares(TrafficProfile({{0.2, 0.3, 0.5}}, kWeights, 0.1));
  CHECK(skewed[TrafficClass::EF] == doctest::Approx(0.10).epsilon(1e-14));
  CHECK(skewed[TrafficClass::AF] == doctest::Approx(0.09).epsilon(1e-14));
  CHECK(skewed[TrafficClass::BE] == doctest::Approx(0.10).epsilon(1e-14));
  CHECK(skewed.sum() <= 1.0);

  const auto single = service_shares(TrafficProfile({{1.0, 0.0, 0.0}}, {{1.0 - 2e-12, 1e-12, 1e-12}}, 0.1));
  CHECK(single[TrafficClass::EF] == doctest::Approx(1.0).epsilon(1e-11));

  CHECK_THROWS_AS(service_shares(TrafficProfile(kUniform, kWeights, 0.0)), UndefinedShares);
}

TEST_CASE("GPS rate split") {
  const ClassMap<double> equal = {{0.2, 0.2, 0.2}};
  SUBCASE("symmetric shares") {
    const auto alloc = gps_rates(equal, all_classes(), 5000);
    for (double r : alloc.rates.values) CHECK(r == doctest::Approx(5000.0 / 3).epsilon(1e-14));
  }
  SUBCASE("single non-empty queue takes the whole base") {
    const auto alloc = gps_rates(equal, ClassSet{{true, false, false}}, 5000);
    CHECK(alloc.rates[TrafficClass::EF] == 5000);
    CHECK(alloc.rates[TrafficClass::AF] == 0);
    CHECK(alloc.rates[TrafficClass::BE] == 0);
  }
  SUBCASE("two of three") {
    const auto alloc = gps_rates({{0.10, 0.09, 0.10}}, ClassSet{{false, true, true}}, 5000);
    CHECK(alloc.rates[TrafficClass::AF] == doctest::Approx(2368.4210526315787).epsilon(1e-12));
    CHECK(alloc.rates[TrafficClass::BE] == doctest::Approx(2631.5789473684213).epsilon(1e-12));
    CHECK(alloc.rates[TrafficClass::EF] == 0.0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(gps_rates(equal, ClassSet{}, 5000), InvalidArgument);
    CHECK_THROWS_AS(gps_rates(equal, all_classes(), 0.0), InvalidArgument);
  }
}

TEST_CASE("GPS properties over generated shares") {
  // Deterministic LCG so every run checks the same cases.
  std::uint64_t state = 12345;
  auto next = [&] {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return 0.01 + static_cast<double>(state >> 11) * 0x1.0p-53;
  };
  for (int trial = 0; trial < 500; ++trial) {
    const ClassMap<double> shares = {{next(), next(), next()}};
    const double base = 100.0 * next() * 1e3;
    for (unsigned mask = 1; mask < 8; ++mask) {
      const ClassSet q = {{(mask & 1u) != 0, (mask & 2u) != 0, (mask & 4u) != 0}};
      const auto alloc = gps_rates(shares, q, base);
      CHECK(alloc.rates.sum() == doctest::Approx(base).epsilon(1e-9));

      const double scale = 0.1 + 10 * next();
      const auto scaled = gps_rates({{shares.values[0] * scale, shares.values[1] * scale,
                                      shares.values[2] * scale}},
                                    q, base);
      for (TrafficClass c : kAllClasses)
        CHECK(scaled.rates[c] == doctest::Approx(alloc.rates[c]).epsilon(1e-12));

      for (TrafficClass drop : kAllClasses) {
        if (!q[drop]) continue;
        ClassSet smaller = q;
        smaller[drop] = false;
        bool any = false;
        for (bool b : smaller.values) any = any || b;
        if (!any) continue;
        const auto reduced = gps_rates(shares, smaller, base);
        for (TrafficClass c : kAllClasses)
          if (smaller[c]) CHECK(reduced.rates[c] >= alloc.rates[c] * (1 - 1e-12));
      }
    }
  }
}
