#pragma once

#include "symflow/combinatorics.hpp"

#include <span>
#include <vector>

namespace symflow::sympoly {

/// Elementary symmetric values e_0..e_n of x, by the coefficient recurrence
/// for prod_i (1 + x_i t): one linear factor multiplied in at a time, O(n^2).
/// On non-negative input every intermediate is non-negative, so there is no
/// cancellation.
template <class T>
std::vector<T> elem_all_generic(std::span<const T> x) {
  std::vector<T> e(x.size() + 1, T(0));
  e[0] = T(1);
  for (std::size_t m = 0; m < x.size(); ++m) {
    for (std::size_t k = m + 1; k >= 1; --k) e[k] += x[m] * e[k - 1];
  }
  return e;
}

std::vector<double> elem_all(std::span<const double> x);

std::vector<comb::ExactRat> elem_all_exact(std::span<const comb::ExactRat> x);

/// Normalized means s_k = e_k / C(n, k) for k = 0..n.
std::vector<double> normalized_all(std::span<const double> x);

/// e_0..e_{n-m} of x with the listed coordinates (0-based, distinct) removed.
/// Recomputes from scratch; deflation is unstable near zero coordinates.
std::vector<double> elem_without(std::span<const double> x, std::span<const int> removed);

struct NewtonMaclaurinReport {
  std::vector<bool> newton_ok;     // s_k^2 >= s_{k-1} s_{k+1}, k = 1..n-1
  std::vector<bool> maclaurin_ok;  // s_k^{1/k} >= s_{k+1}^{1/(k+1)}, k = 1..n-1
  bool all_pass = true;
};

/// Checks log-concavity of {s_k} and monotonicity of {s_k^{1/k}} on a
/// non-negative point, with symmetric relative slack tol.
NewtonMaclaurinReport newton_maclaurin_check(std::span<const double> x, double tol = 1e-12);

}  // namespace symflow::sympoly
