#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace symflow::comb {

using ExactInt = boost::multiprecision::cpp_int;
using ExactRat = boost::multiprecision::cpp_rational;

// Tables cover everything this artifact needs; n! overflows 64-bit at n = 21,
// so all values are arbitrary-precision.
inline constexpr int kTableMax = 64;

/// k! for 0 <= k <= kTableMax.
const ExactInt& factorial(int k);

/// C(n, k). Returns 0 when k > n (the convention used by leave-out sums
/// whose index can exceed the vector length).
ExactInt binomial(int n, int k);

/// Number of derangements c_k of a k-element set; c_0 = 1, c_1 = 0.
/// Built by the recurrence c_k = (k-1)(c_{k-1} + c_{k-2}) and cross-checked
/// against the alternating sum k! * sum_j (-1)^j / j! at table build.
const ExactInt& derangements(int k);

/// Rencontres number D(n, k): permutations of an n-element set with exactly
/// k fixed points, D(n, k) = C(n, k) * c_{n-k}.
ExactInt rencontres(int n, int k);

/// d(n, k) = D(n, k) / n!, in lowest terms.
ExactRat rencontres_fraction(int n, int k);

double to_double(const ExactInt& v);
double to_double(const ExactRat& v);

/// k! and c_k rounded to double once (index 0..kTableMax); cached for hot loops.
const std::vector<double>& factorials_as_double();
const std::vector<double>& derangements_as_double();

}  // namespace symflow::comb
