#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "balducci/mortality.hpp"
#include "test_util.hpp"

using namespace balducci;

TEST_CASE("uniform table probabilities") {
  const MortalityTable table = testutil::uniform_table();
  CHECK(table.omega() == 11);  // truncation, not a terminal zero
  CHECK_FALSE(table.has_terminal_age());
  CHECK(table.max_queryable_age() == 10);
  for (int k = 0; k < 10; ++k) {
    const Probabilities pr = probabilities(table, 0, k);
    CHECK(pr.q == doctest::Approx(1.0 / (100.0 - k)).epsilon(1e-14));
    CHECK(pr.kpx == doctest::Approx((100.0 - k) / 100.0).epsilon(1e-14));
  }
}

TEST_CASE("table validation") {
  CHECK_THROWS_AS(load_table({}), std::invalid_argument);
  CHECK_THROWS_AS(load_table({{0, 100.0}, {2, 99.0}}), std::invalid_argument);
  CHECK_THROWS_WITH_AS(load_table({{3, 50.0}, {4, 51.0}}),
                       doctest::Contains("increasing survivor count"),
                       std::invalid_argument);
  CHECK_THROWS_AS(load_table({{0, 100.0}, {1, -1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(load_table({{0, 100.0}, {1, 0.0}, {2, 5.0}}), std::invalid_argument);
  CHECK_THROWS_AS(load_table({{0, 0.0}, {1, 0.0}}), std::invalid_argument);

  const MortalityTable single = load_table({{0, 1.0}});
  CHECK(single.omega() == 1);
  CHECK_THROWS_AS(probabilities(single, 0, 0), std::out_of_range);
}

TEST_CASE("terminal table conventions") {
  const MortalityTable table = load_table({{0, 10.0}, {1, 4.0}, {2, 0.0}});
  CHECK(table.has_terminal_age());
  CHECK(table.omega() == 2);
  CHECK(table.survivor_count(50) == 0.0);  // zero persists past the stored rows
  const Probabilities last = probabilities(table, 0, 1);
  CHECK(last.p == 0.0);
  CHECK(last.q == 1.0);
  const Probabilities past = probabilities(table, 0, 2);
  CHECK(past.terminal);
  CHECK(past.kpx == 0.0);

  // total death probability telescopes to 1
  double total = 0.0;
  for (int k = 0; k < table.omega(); ++k) {
    const Probabilities pr = probabilities(table, 0, k);
    total += pr.kpx * pr.q;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rows round-trip") {
  const MortalityTable table = testutil::uniform_table();
  const MortalityTable again = load_table(table.rows());
  CHECK(again.rows() == table.rows());
}

TEST_CASE("weibull law") {
  const WeibullLaw law(50.0, 3.0);
  CHECK(law.kpx(0, 1) == doctest::Approx(std::exp(-0.000008)).epsilon(1e-15));
  CHECK(law.kpx(7, 0) == 1.0);
  CHECK(law.kpx(0, 2) ==
        doctest::Approx(law.kpx(0, 1) * law.kpx(1, 1)).epsilon(1e-14));
  const Probabilities pr = probabilities(law, 0, 10);
  CHECK(pr.p == doctest::Approx(std::exp(std::pow(10.0 / 50.0, 3.0) -
                                         std::pow(11.0 / 50.0, 3.0))).epsilon(1e-14));
  // default truncation: first age with survival below 1e-16
  CHECK(law.kpx(0, law.omega()) < 1e-16);
  CHECK(law.kpx(0, law.omega() - 1) >= 1e-16);
  CHECK_FALSE(law.has_terminal_age());

  CHECK_THROWS_AS(WeibullLaw(0.0, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(WeibullLaw(50.0, -1.0), std::invalid_argument);
}

TEST_CASE("consistency kpx(x, k+1) = kpx(x, k) p_{x+k}") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const MortalityTable table = testutil::random_table(rng);
    const int len = static_cast<int>(table.survivors().size()) - 1;
    for (int k = 0; k + 1 <= len; ++k) {
      const Probabilities pr = probabilities(table, 0, k);
      CHECK(pr.k1px == doctest::Approx(pr.kpx * pr.p).epsilon(1e-13));
    }
  }
}
