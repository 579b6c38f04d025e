#include "symflow/combinatorics.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace symflow::comb {

namespace {

void check_table_range(int k, const char* what) {
  if (k < 0 || k > kTableMax) {
    throw std::invalid_argument(std::string(what) + " out of range [0, " +
                                std::to_string(kTableMax) + "]: " + std::to_string(k));
  }
}

struct Tables {
  std::array<ExactInt, kTableMax + 1> fact;
  std::array<ExactInt, kTableMax + 1> der;
  std::vector<double> fact_d;
  std::vector<double> der_d;

  Tables() {
    fact[0] = 1;
    for (int k = 1; k <= kTableMax; ++k) fact[k] = fact[k - 1] * k;

    der[0] = 1;
    der[1] = 0;
    for (int k = 2; k <= kTableMax; ++k) der[k] = ExactInt(k - 1) * (der[k - 1] + der[k - 2]);

    // The two standard formulas must agree exactly.
    for (int k = 0; k <= kTableMax; ++k) {
      ExactInt alternating = 0;
      for (int j = 0; j <= k; ++j) {
        ExactInt term = fact[k] / fact[j];
        alternating += (j % 2 == 0) ? term : -term;
      }
      if (alternating != der[k]) throw std::logic_error("derangement table self-check failed");
    }

    fact_d.reserve(kTableMax + 1);
    der_d.reserve(kTableMax + 1);
    for (int k = 0; k <= kTableMax; ++k) {
      fact_d.push_back(to_double(fact[k]));
      der_d.push_back(to_double(der[k]));
    }
  }
};

const Tables& tables() {
  static const Tables t;  // built once; safe under concurrent first use
  return t;
}

}  // namespace

const ExactInt& factorial(int k) {
  check_table_range(k, "factorial argument");
  return tables().fact[k];
}

ExactInt binomial(int n, int k) {
  if (n < 0 || k < 0) throw std::invalid_argument("binomial arguments must be non-negative");
  if (k > n) return 0;
  check_table_range(n, "binomial argument");
  return tables().fact[n] / (tables().fact[k] * tables().fact[n - k]);
}

const ExactInt& derangements(int k) {
  check_table_range(k, "derangements argument");
  return tables().der[k];
}

ExactInt rencontres(int n, int k) {
  if (k > n) throw std::invalid_argument("rencontres requires k <= n");
  if (n < 0 || k < 0) throw std::invalid_argument("rencontres arguments must be non-negative");
  check_table_range(n, "rencontres argument");
  return binomial(n, k) * tables().der[n - k];
}

ExactRat rencontres_fraction(int n, int k) {
  ExactRat r(rencontres(n, k), factorial(n));
  return r;  // cpp_rational normalizes to lowest terms with positive denominator
}

double to_double(const ExactInt& v) { return v.convert_to<double>(); }

double to_double(const ExactRat& v) { return v.convert_to<double>(); }

const std::vector<double>& factorials_as_double() { return tables().fact_d; }

const std::vector<double>& derangements_as_double() { return tables().der_d; }

}  // namespace symflow::comb
