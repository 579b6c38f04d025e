#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "symflow/combinatorics.hpp"

#include <stdexcept>

using namespace symflow::comb;

TEST_CASE("factorial basics") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(1) == 1);
  CHECK(factorial(5) == 120);
  CHECK(factorial(5) == oracle::count_all_permutations(5));
  CHECK(factorial(20) == ExactInt("2432902008176640000"));
  CHECK_THROWS_AS(factorial(-1), std::invalid_argument);
  CHECK_THROWS_AS(factorial(kTableMax + 1), std::invalid_argument);
}

TEST_CASE("binomial basics and k > n convention") {
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(6, 3) == 20);
  CHECK(binomial(6, 3) == oracle::count_subsets(6, 3));
  for (int n = 0; n <= 10; ++n) CHECK(binomial(n, 0) == 1);
  CHECK(binomial(3, 7) == 0);
  CHECK(binomial(0, 5) == 0);
  CHECK_THROWS_AS(binomial(4, -1), std::invalid_argument);
}

TEST_CASE("derangement numbers match brute force") {
  CHECK(derangements(0) == 1);
  CHECK(derangements(1) == 0);
  CHECK(derangements(3) == 2);
  CHECK(derangements(4) == 9);
  for (int k = 0; k <= 8; ++k) {
    CHECK(derangements(k) == oracle::count_permutations_with_fixed_points(k, 0));
  }
}

TEST_CASE("derangement recurrence and factorial bounds") {
  for (int k = 2; k <= 20; ++k) {
    CHECK(derangements(k) == ExactInt(k - 1) * (derangements(k - 1) + derangements(k - 2)));
    CHECK(3 * derangements(k) >= factorial(k));  // c_k >= k!/3
    CHECK(2 * derangements(k) <= factorial(k));  // c_k <= k!/2
  }
}

TEST_CASE("rencontres numbers") {
  for (int n = 1; n <= 10; ++n) {
    CHECK(rencontres(n, n) == 1);
    if (n >= 1) CHECK(rencontres(n, n - 1) == 0);
  }
  CHECK(rencontres(4, 1) == 8);
  for (int k = 0; k <= 6; ++k) {
    CHECK(rencontres(6, k) == oracle::count_permutations_with_fixed_points(6, k));
  }
  CHECK_THROWS_AS(rencontres(3, 4), std::invalid_argument);
}

TEST_CASE("rencontres fractions in lowest terms") {
  CHECK(rencontres_fraction(2, 0) == ExactRat(1, 2));
  CHECK(rencontres_fraction(3, 1) == ExactRat(1, 2));
  for (int n = 1; n <= 8; ++n) {
    CHECK(rencontres_fraction(n, n) == ExactRat(1, factorial(n)));
  }
}

TEST_CASE("distribution identities: total mass and mean one fixed point") {
  for (int n = 0; n <= 20; ++n) {
    ExactInt total = 0;
    ExactInt weighted = 0;
    for (int k = 0; k <= n; ++k) {
      total += rencontres(n, k);
      weighted += k * rencontres(n, k);
    }
    CHECK(total == factorial(n));
    if (n >= 1) CHECK(weighted == factorial(n));
  }
}

TEST_CASE("double caches agree with exact values") {
  CHECK(factorials_as_double()[10] == doctest::Approx(3628800.0));
  CHECK(derangements_as_double()[4] == doctest::Approx(9.0));
}
