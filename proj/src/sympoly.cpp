#include "symflow/sympoly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace symflow::sympoly {

std::vector<double> elem_all(std::span<const double> x) { return elem_all_generic(x); }

std::vector<comb::ExactRat> elem_all_exact(std::span<const comb::ExactRat> x) {
  return elem_all_generic(x);
}

std::vector<double> normalized_all(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> s = elem_all(x);
  for (int k = 0; k <= n; ++k) s[k] /= comb::to_double(comb::binomial(n, k));
  return s;
}

std::vector<double> elem_without(std::span<const double> x, std::span<const int> removed) {
  const int n = static_cast<int>(x.size());
  for (std::size_t a = 0; a < removed.size(); ++a) {
    if (removed[a] < 0 || removed[a] >= n)
      throw std::invalid_argument("elem_without: index out of range");
    for (std::size_t b = a + 1; b < removed.size(); ++b) {
      if (removed[a] == removed[b]) throw std::invalid_argument("elem_without: duplicate index");
    }
  }
  std::vector<double> kept;
  kept.reserve(x.size() - removed.size());
  for (int i = 0; i < n; ++i) {
    if (std::find(removed.begin(), removed.end(), i) == removed.end()) kept.push_back(x[i]);
  }
  return elem_all(kept);
}

NewtonMaclaurinReport newton_maclaurin_check(std::span<const double> x, double tol) {
  const int n = static_cast<int>(x.size());
  const std::vector<double> s = normalized_all(x);
  NewtonMaclaurinReport rep;
  for (int k = 1; k + 1 <= n; ++k) {
    const double lhs = s[k] * s[k];
    const double rhs = s[k - 1] * s[k + 1];
    const double slack = tol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
    const bool ok = lhs >= rhs - slack;
    rep.newton_ok.push_back(ok);
    rep.all_pass = rep.all_pass && ok;
  }
  for (int k = 1; k + 1 <= n; ++k) {
    const double rk = std::pow(s[k], 1.0 / k);
    const double rk1 = std::pow(s[k + 1], 1.0 / (k + 1));
    const double slack = tol * std::max({1.0, rk, rk1});
    const bool ok = rk >= rk1 - slack;
    rep.maclaurin_ok.push_back(ok);
    rep.all_pass = rep.all_pass && ok;
  }
  return rep;
}

}  // namespace symflow::sympoly
