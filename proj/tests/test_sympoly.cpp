#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "symflow/rng.hpp"
#include "symflow/sympoly.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace symflow;

namespace {

void check_close(const std::vector<double>& a, const std::vector<double>& b, double rel) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a[i] - b[i]) <= rel * std::max(1.0, std::max(std::abs(a[i]), std::abs(b[i]))));
  }
}

}  // namespace

TEST_CASE("elementary values on frozen points") {
  check_close(sympoly::elem_all(std::vector<double>{1, 1, 1, 1}), {1, 4, 6, 4, 1}, 0.0);
  check_close(sympoly::elem_all(std::vector<double>{1, 2, 3}), {1, 6, 11, 6}, 0.0);
  check_close(sympoly::elem_all(std::vector<double>{0, 0, 0, 0, 0}), {1, 0, 0, 0, 0, 0}, 0.0);
}

TEST_CASE("recurrence agrees with the subset-enumeration oracle") {
  for (int n = 1; n <= 12; ++n) {
    auto g = rng::substream(101, n);
    for (int rep = 0; rep < 20; ++rep) {
      const auto x = rng::uniform_point(g, n, 0.0, 10.0);
      check_close(sympoly::elem_all(x), oracle::elem_by_subsets(x), 1e-12);
    }
  }
}

TEST_CASE("normalized means") {
  const auto ones = sympoly::normalized_all(std::vector<double>{1, 1, 1, 1, 1});
  for (double s : ones) CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  const auto s123 = sympoly::normalized_all(std::vector<double>{1, 2, 3});
  CHECK(s123[2] == doctest::Approx(11.0 / 3.0).epsilon(1e-14));
  const auto s49 = sympoly::normalized_all(std::vector<double>{4, 9});
  CHECK(s49[2] == doctest::Approx(36.0).epsilon(1e-14));
}

TEST_CASE("leave-out evaluation") {
  const std::vector<double> x{1, 2, 3};
  check_close(sympoly::elem_without(x, std::vector<int>{1}), {1, 4, 3}, 0.0);
  check_close(sympoly::elem_without(x, std::vector<int>{}), sympoly::elem_all(x), 0.0);
  check_close(sympoly::elem_without(std::vector<double>{1, 1, 1, 1}, std::vector<int>{0, 3}),
              {1, 2, 1}, 0.0);
  CHECK_THROWS_AS(sympoly::elem_without(x, std::vector<int>{3}), std::invalid_argument);
  CHECK_THROWS_AS(sympoly::elem_without(x, std::vector<int>{1, 1}), std::invalid_argument);
}

TEST_CASE("permutation symmetry, scaling, deletion identity") {
  auto g = rng::substream(202, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + static_cast<int>(g.next() % 9);
    auto x = rng::uniform_point(g, n, 0.0, 10.0);
    const auto e = sympoly::elem_all(x);

    auto shuffled = x;
    for (int i = n - 1; i > 0; --i) std::swap(shuffled[i], shuffled[g.next() % (i + 1)]);
    check_close(e, sympoly::elem_all(shuffled), 1e-12);

    const double c = g.uniform(0.1, 3.0);
    auto scaled = x;
    for (double& v : scaled) v *= c;
    const auto es = sympoly::elem_all(scaled);
    double ck = 1.0;
    for (int k = 0; k <= n; ++k) {
      CHECK(std::abs(es[k] - ck * e[k]) <= 1e-12 * std::max(1.0, std::abs(ck * e[k])));
      ck *= c;
    }

    const int drop = static_cast<int>(g.next() % n);
    const auto ed = sympoly::elem_without(x, std::vector<int>{drop});
    for (int k = 1; k <= n - 1; ++k) {
      const double rebuilt = ed[k] + x[drop] * ed[k - 1];
      CHECK(std::abs(e[k] - rebuilt) <= 1e-12 * std::max(1.0, std::abs(e[k])));
    }
  }
}

TEST_CASE("newton and maclaurin inequalities") {
  CHECK(sympoly::newton_maclaurin_check(std::vector<double>{1, 1, 1, 1}).all_pass);

  const auto s = sympoly::normalized_all(std::vector<double>{1, 2, 3, 4});
  CHECK(s[1] * s[1] == doctest::Approx(6.25));
  CHECK(s[0] * s[2] == doctest::Approx(35.0 / 6.0));
  CHECK(sympoly::newton_maclaurin_check(std::vector<double>{1, 2, 3, 4}).all_pass);

  auto g = rng::substream(303, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + static_cast<int>(g.next() % 11);
    const auto x = rng::uniform_point(g, n, 0.0, 10.0);
    CHECK(sympoly::newton_maclaurin_check(x).all_pass);
  }
}

TEST_CASE("exact rational path") {
  using comb::ExactRat;
  const std::vector<ExactRat> x{ExactRat(1, 2), ExactRat(1, 3)};
  const auto e = sympoly::elem_all_exact(x);
  CHECK(e[0] == 1);
  CHECK(e[1] == ExactRat(5, 6));
  CHECK(e[2] == ExactRat(1, 6));
}
