#include "symflow/fixedpoint.hpp"

#include "symflow/sympoly.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace symflow::fixedpoint {

namespace {

constexpr int kEnumMax = 10;
constexpr int kPermanentMax = 28;
constexpr int kPermanentExactMax = 20;

void require_nonnegative(std::span<const double> x, const char* what) {
  for (double v : x) {
    if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + ": coordinates must be >= 0");
  }
}

void require_n_at_least(std::span<const double> x, int n_min, const char* what) {
  if (static_cast<int>(x.size()) < n_min)
    throw std::invalid_argument(std::string(what) + ": needs n >= " + std::to_string(n_min));
}

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double ryser_double(const std::vector<double>& dense, int n) {
  std::vector<double> row_sum(n, 0.0);
  KahanSum acc;
  const std::uint32_t subsets = 1u << n;
  std::uint32_t gray = 0;
  for (std::uint32_t s = 1; s < subsets; ++s) {
    const int j = std::countr_zero(s);
    const std::uint32_t next_gray = s ^ (s >> 1);
    const bool added = (next_gray >> j) & 1u;
    const double sgn = added ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) row_sum[i] += sgn * dense[i * n + j];
    gray = next_gray;
    double prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= row_sum[i];
    const int cardinality = std::popcount(gray);
    acc.add(((n - cardinality) % 2 == 0) ? prod : -prod);
  }
  return acc.sum;
}

comb::ExactInt ryser_exact(const std::vector<comb::ExactInt>& dense, int n) {
  std::vector<comb::ExactInt> row_sum(n, 0);
  comb::ExactInt acc = 0;
  const std::uint32_t subsets = 1u << n;
  std::uint32_t gray = 0;
  for (std::uint32_t s = 1; s < subsets; ++s) {
    const int j = std::countr_zero(s);
    const std::uint32_t next_gray = s ^ (s >> 1);
    const bool added = (next_gray >> j) & 1u;
    for (int i = 0; i < n; ++i) {
      if (added)
        row_sum[i] += dense[i * n + j];
      else
        row_sum[i] -= dense[i * n + j];
    }
    gray = next_gray;
    comb::ExactInt prod = 1;
    for (int i = 0; i < n; ++i) prod *= row_sum[i];
    const int cardinality = std::popcount(gray);
    if ((n - cardinality) % 2 == 0)
      acc += prod;
    else
      acc -= prod;
  }
  return acc;
}

}  // namespace

const std::vector<double>& lhs_weights(int n) {
  if (n < 0 || n > comb::kTableMax) throw std::invalid_argument("lhs_weights: n out of range");
  static const std::vector<std::vector<double>> rows = [] {
    std::vector<std::vector<double>> r(comb::kTableMax + 1);
    for (int m = 0; m <= comb::kTableMax; ++m) {
      r[m].resize(m + 1);
      for (int i = 0; i <= m; ++i) {
        r[m][i] = comb::to_double(comb::ExactRat(comb::derangements(m - i), comb::factorial(m)));
      }
    }
    return r;
  }();
  return rows[n];
}

double lhs_formula(std::span<const double> x) {
  require_nonnegative(x, "lhs_formula");
  const int n = static_cast<int>(x.size());
  const std::vector<double>& w = lhs_weights(n);
  const std::vector<double> e = sympoly::elem_all(x);
  KahanSum acc;
  for (int i = 0; i <= n; ++i) acc.add(w[i] * e[i]);
  return acc.sum;
}

double lhs_enumerate(std::span<const double> x) {
  require_nonnegative(x, "lhs_enumerate");
  const int n = static_cast<int>(x.size());
  if (n > kEnumMax)
    throw std::domain_error("lhs_enumerate: n = " + std::to_string(n) + " exceeds the n! limit " +
                            std::to_string(kEnumMax));
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  KahanSum acc;
  do {
    double prod = 1.0;  // empty product over fix(pi) = 1
    for (int i = 0; i < n; ++i) {
      if (perm[i] == i) prod *= x[i];
    }
    acc.add(prod);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc.sum / comb::factorials_as_double()[n];
}

double permanent(const OnesPlusDiag& m) {
  const int n = static_cast<int>(m.diag.size());
  if (n < 1) throw std::invalid_argument("permanent: empty matrix");
  if (n > kPermanentMax)
    throw std::domain_error("permanent: n = " + std::to_string(n) + " exceeds the 2^n limit " +
                            std::to_string(kPermanentMax));
  require_nonnegative(m.diag, "permanent");
  std::vector<double> dense(static_cast<std::size_t>(n) * n, 1.0);
  for (int i = 0; i < n; ++i) dense[static_cast<std::size_t>(i) * n + i] = m.diag[i];
  return ryser_double(dense, n);
}

comb::ExactInt permanent_exact(std::span<const std::int64_t> diag) {
  const int n = static_cast<int>(diag.size());
  if (n < 1) throw std::invalid_argument("permanent_exact: empty matrix");
  if (n > kPermanentExactMax)
    throw std::domain_error("permanent_exact: n exceeds " + std::to_string(kPermanentExactMax));
  std::vector<comb::ExactInt> dense(static_cast<std::size_t>(n) * n, 1);
  for (int i = 0; i < n; ++i) dense[static_cast<std::size_t>(i) * n + i] = diag[i];
  return ryser_exact(dense, n);
}

double lhs_permanent(std::span<const double> x) {
  OnesPlusDiag m{std::vector<double>(x.begin(), x.end())};
  return permanent(m) / comb::factorials_as_double()[x.size()];
}

double rhs_value(std::span<const double> x) {
  require_nonnegative(x, "rhs_value");
  require_n_at_least(x, 2, "rhs_value");
  const int n = static_cast<int>(x.size());
  std::vector<double> roots(n);
  for (int i = 0; i < n; ++i) roots[i] = std::sqrt(x[i]);
  const std::vector<double> e = sympoly::elem_all(roots);
  return e[2] / comb::to_double(comb::binomial(n, 2));
}

double gap(std::span<const double> x) { return lhs_formula(x) - rhs_value(x); }

MeasureEval evaluate(std::span<const double> x) {
  MeasureEval ev;
  ev.lhs_formula = lhs_formula(x);
  ev.rhs = rhs_value(x);
  ev.gap = ev.lhs_formula - ev.rhs;
  const int n = static_cast<int>(x.size());
  if (n <= kEnumMax) ev.lhs_enum = lhs_enumerate(x);
  if (n <= kPermanentMax) ev.lhs_permanent = lhs_permanent(x);
  return ev;
}

comb::ExactRat lhs_formula_exact(std::span<const comb::ExactRat> x) {
  const int n = static_cast<int>(x.size());
  if (n > comb::kTableMax) throw std::invalid_argument("lhs_formula_exact: n out of range");
  const std::vector<comb::ExactRat> e = sympoly::elem_all_exact(x);
  comb::ExactRat acc = 0;
  for (int i = 0; i <= n; ++i) acc += comb::ExactRat(comb::derangements(n - i)) * e[i];
  return acc / comb::ExactRat(comb::factorial(n));
}

Gradient gradient(std::span<const double> x) {
  require_nonnegative(x, "gradient");
  require_n_at_least(x, 2, "gradient");
  const int n = static_cast<int>(x.size());
  std::vector<double> roots(n);
  double root_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    roots[i] = std::sqrt(x[i]);
    root_sum += roots[i];
  }
  Gradient g;
  g.partials.resize(n);
  g.valid.assign(n, true);
  std::vector<double> reduced;
  reduced.reserve(n - 1);
  for (int i = 0; i < n; ++i) {
    const double others = root_sum - roots[i];
    if (x[i] == 0.0 && others > 0.0) {
      g.partials[i] = -std::numeric_limits<double>::infinity();
      g.valid[i] = false;
      continue;
    }
    reduced.clear();
    for (int j = 0; j < n; ++j) {
      if (j != i) reduced.push_back(x[j]);
    }
    const double ratio_sum = others > 0.0 ? others / roots[i] : 0.0;
    g.partials[i] = lhs_formula(reduced) / n - ratio_sum / (n * (n - 1.0));
  }
  return g;
}

double hessian_entry(std::span<const double> x, int i, int j) {
  const int n = static_cast<int>(x.size());
  if (i < 0 || i >= n || j < 0 || j >= n) throw std::invalid_argument("hessian_entry: bad index");
  for (double v : x) {
    if (!(v > 0.0)) throw std::invalid_argument("hessian_entry: needs strictly positive coordinates");
  }
  require_n_at_least(x, 2, "hessian_entry");
  const double scale = 1.0 / (n * (n - 1.0));
  if (i == j) {
    double ratio_sum = 0.0;
    for (int a = 0; a < n; ++a) {
      if (a != i) ratio_sum += std::sqrt(x[a] / (x[i] * x[i] * x[i]));
    }
    return 0.5 * scale * ratio_sum;
  }
  std::vector<double> reduced;
  reduced.reserve(n - 2);
  for (int a = 0; a < n; ++a) {
    if (a != i && a != j) reduced.push_back(x[a]);
  }
  return scale * lhs_formula(reduced) - 0.5 * scale / std::sqrt(x[i] * x[j]);
}

}  // namespace symflow::fixedpoint
