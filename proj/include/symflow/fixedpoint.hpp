#pragma once

#include "symflow/combinatorics.hpp"

#include <optional>
#include <span>
#include <vector>

namespace symflow::fixedpoint {

// The two sides of the inequality this library certifies, for a point
// x in R_{>=0}^n:
//
//   lhs(x) = (1/n!) sum_i c_{n-i} e_i(x)
//          = average over permutations pi of prod_{i in fix(pi)} x_i,
//   rhs(x) = s_2(sqrt(x)),
//
// and gap(x) = lhs(x) - rhs(x), which is >= 0 with equality only at the
// all-ones point (for n >= 3).

using Point = std::vector<double>;

/// n x n matrix with the given diagonal and every off-diagonal entry 1.
/// Its permanent divided by n! equals lhs(diag).
struct OnesPlusDiag {
  std::vector<double> diag;
};

struct MeasureEval {
  double lhs_formula = 0.0;            // derangement-weighted symmetric sum
  std::optional<double> lhs_enum;      // full S_n enumeration, n <= 10
  std::optional<double> lhs_permanent; // per(M(x)) / n!, n <= 28
  double rhs = 0.0;
  double gap = 0.0;                    // lhs_formula - rhs
};

struct Gradient {
  std::vector<double> partials;
  // partials[i] is meaningful iff valid[i]; x_i = 0 with some other
  // coordinate positive makes the derivative diverge to -infinity.
  std::vector<bool> valid;
};

/// Weights c_{n-i}/n! for i = 0..n, each rounded from the exact rational
/// exactly once.
const std::vector<double>& lhs_weights(int n);

/// Canonical evaluator: (1/n!) sum_i c_{n-i} e_i(x). Defined for n >= 0
/// (the empty point gives 1).
double lhs_formula(std::span<const double> x);

/// Cross-check evaluator: averages prod_{i in fix(pi)} x_i over all n!
/// permutations. Rejects n > 10.
double lhs_enumerate(std::span<const double> x);

/// Permanent of the dense matrix materialized from m, by Ryser's formula
/// with Gray-code row-sum updates and compensated summation. Rejects n > 28.
double permanent(const OnesPlusDiag& m);

/// Exact-integer Ryser permanent for integer diagonals (used to check
/// per(M(0)) = c_n without floating-point cancellation). Rejects n > 20.
comb::ExactInt permanent_exact(std::span<const std::int64_t> diag);

/// Cross-check evaluator: permanent(M(x)) / n!.
double lhs_permanent(std::span<const double> x);

/// s_2 of the coordinate-wise square root.
double rhs_value(std::span<const double> x);

/// lhs_formula - rhs_value; the hot path used by sampling loops.
double gap(std::span<const double> x);

/// All evaluators that are in range, plus the gap.
MeasureEval evaluate(std::span<const double> x);

/// Exact rational evaluation of lhs_formula on a rational point.
comb::ExactRat lhs_formula_exact(std::span<const comb::ExactRat> x);

/// Partial derivatives of gap:
///   d/dx_i = (1/n) lhs(x with i removed) - (1/(n(n-1))) sum_{j != i} sqrt(x_j/x_i).
/// Divergent coordinates are flagged via the mask instead of throwing; the
/// boundary analysis deliberately evaluates there.
Gradient gradient(std::span<const double> x);

/// Second partial d^2 gap / dx_j dx_i (0-based indices). Requires every
/// coordinate strictly positive.
double hessian_entry(std::span<const double> x, int i, int j);

}  // namespace symflow::fixedpoint
