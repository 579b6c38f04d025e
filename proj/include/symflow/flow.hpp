#pragma once

#include "symflow/combinatorics.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace symflow::flow {

// Critical-point machinery for the gap function on the compact region
// C = {x >= 0, sum x_i <= 6n}: outside C the gap is at least 5/6, inside it
// every point other than the all-ones vector admits a certified direction of
// strict decrease. Descent directions for mixed points come from the pair
// operators O_k = x_k d/dx_k - x_n d/dx_n acting on the gap, which factor as
//
//   O_k gap(x) = (x_k - x_n) * S_k(x) / n!
//
// for sorted x, with S_k the quantity computed by descent_factor below.

/// A point sorted non-decreasingly together with the original positions.
struct SortedPoint {
  std::vector<double> coords;  // non-decreasing
  std::vector<int> order;      // order[sorted_pos] = original index (stable)

  static SortedPoint from(std::span<const double> x);
  int n() const { return static_cast<int>(coords.size()); }
};

enum class Region {
  outside_compact,
  boundary,
  all_above_one,
  all_below_one,
  critical_candidate,
  descent,
};

const char* region_name(Region r);

struct FlowReport {
  Region region = Region::descent;
  // Signed quantity certifying the classification: the compact-region margin,
  // the smallest partial derivative, the gradient-ones inner product, the
  // largest |x_i - 1|, or the directional derivative along the descent
  // direction (negative).
  double witness = 0.0;
  std::optional<int> k;  // 1-based sorted position for pair-operator descents
  std::optional<std::vector<double>> direction;  // in original coordinate order
};

struct CompactCheck {
  bool inside = false;   // sum x_i <= 6n
  double margin = 0.0;   // 6n - sum x_i
};

CompactCheck in_compact(std::span<const double> x);

/// S_k for the sorted point (k is the 1-based sorted position, 1 <= k <= n-1):
///   S_k(x) = sum_{i=1}^{n-2} c_{n-i} e_{i-1}(x without positions k, n)
///          - (n-2)! sum_{i != k, n} sqrt(x_i) / (sqrt(x_k) + sqrt(x_n)).
/// Requires n >= 4 and x_k + x_n > 0.
double descent_factor(const SortedPoint& x, int k);

/// O_k gap(x) = x_k d gap/dx_k - x_n d gap/dx_n, via the closed form
/// (x_k - x_n) S_k / n!. When both x_k and x_n are positive the value is
/// cross-checked against the gradient route to 1e-8 relative.
double pair_derivative(const SortedPoint& x, int k);

/// The scalar term F_k(v) = c_{n-1}/(n-2) + c_{n-2} v
///                        - (n-2)! sqrt(v) / (sqrt(x_k) + sqrt(x_n)),
/// whose sums bound S_k from below.
double descent_factor_term(double v, double x_k, double x_n, int n);

/// F_k(x_j) + F_k(x_{n-j}), the paired form used when single terms can go
/// negative. Requires floor(n/2) <= k <= n-2 and k+1 <= j <= n-1.
double pair_term_bound(const SortedPoint& x, int k, int j);

struct AuxParams {
  int n = 4;   // even: n = 2l, t in {0..l-2}; odd: n = 2l+1, t in {1..l-1}
  int t = 0;
  double y = 0.0;  // in [0, 1]
};

/// Lower bound on S_k for equal-tail points x_k < x_{k+1} = ... = x_n >= 1
/// with y = sqrt(x_k/x_n), even n = 2l, k = l-t-1:
///   f(y,t) = sum_{i=1}^{n-2} c_{n-i} C(l+t, i-1)
///          - (n-2)! ((l+t)/(y+1) + (l-t-2) y/(y+1)).
/// The combinatorial sum is evaluated in exact integers; only the y part is
/// floating point.
double tail_bound_even(const AuxParams& p);

/// Odd-n counterpart, n = 2l+1, k = l-t:
///   g(y,t) = sum_{i=1}^{n-2} c_{n-i} C(l+t, i-1)
///          - (n-2)! ((l+t)/(y+1) + (l-t-1) y/(y+1)).
double tail_bound_odd(const AuxParams& p);

/// Fully exact variants for rational y; these realize the exact identities
/// f(0, l-2) = 0 and g(0, l-1) = 0.
comb::ExactRat tail_bound_even_exact(int n, int t, const comb::ExactRat& y);
comb::ExactRat tail_bound_odd_exact(int n, int t, const comb::ExactRat& y);

/// Classifies a point of the non-negative orthant (n >= 4):
///  - outside_compact / boundary by the sum margin;
///  - descent along +ones from the all-zero point;
///  - descent along +b_i when some x_i = 0 (one-sided difference witness);
///  - critical_candidate when every |x_i - 1| <= 1e-9;
///  - all_above_one (witness: min partial) / all_below_one (witness:
///    <grad, ones>);
///  - otherwise descent along x_k b_k - x_n b_n for the largest k with
///    x_k < x_{k+1} in sorted order, witness O_k gap < 0.
FlowReport classify(std::span<const double> x);

enum class DescendStatus { converged, max_iters, stalled };

struct DescendResult {
  std::vector<double> final_point;
  double final_gap = 0.0;
  std::vector<double> gap_trajectory;  // strictly decreasing by construction
  int iterations = 0;
  DescendStatus status = DescendStatus::max_iters;
};

/// Follows the certified decrease direction from classify with a halving
/// backtracking line search (floor 1e-12); every accepted step strictly
/// decreases the gap. Stops at a critical candidate, after max_iters, or
/// when no decreasing step above the floor exists.
DescendResult descend(std::span<const double> x0, double step, int max_iters);

}  // namespace symflow::flow
