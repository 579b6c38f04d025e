#include "symflow/flow.hpp"

#include "symflow/fixedpoint.hpp"
#include "symflow/sympoly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace symflow::flow {

namespace {

constexpr double kOnesTolerance = 1e-9;   // per-coordinate ball around the all-ones point
constexpr double kBoundaryProbeStep = 1e-8;
constexpr double kStepFloor = 1e-12;
constexpr double kCrossCheckTol = 1e-8;

void require_nonnegative(std::span<const double> x, const char* what) {
  for (double v : x) {
    if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + ": coordinates must be >= 0");
  }
}

void require_n4(int n, const char* what) {
  if (n < 4) throw std::invalid_argument(std::string(what) + ": needs n >= 4");
}

// Closed form of O_k gap without the gradient cross-check; classify and
// descend call this in their inner loops.
double pair_derivative_closed(const SortedPoint& x, int k) {
  const int n = x.n();
  const double xk = x.coords[k - 1];
  const double xn = x.coords[n - 1];
  return (xk - xn) * descent_factor(x, k) / comb::factorials_as_double()[n];
}

std::vector<double> ones_direction(int n) { return std::vector<double>(n, 1.0); }

double one_sided_quotient(std::span<const double> x, std::span<const double> dir) {
  std::vector<double> shifted(x.begin(), x.end());
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += kBoundaryProbeStep * dir[i];
  return (fixedpoint::gap(shifted) - fixedpoint::gap(x)) / kBoundaryProbeStep;
}

}  // namespace

SortedPoint SortedPoint::from(std::span<const double> x) {
  SortedPoint sp;
  const int n = static_cast<int>(x.size());
  sp.order.resize(n);
  std::iota(sp.order.begin(), sp.order.end(), 0);
  std::stable_sort(sp.order.begin(), sp.order.end(),
                   [&](int a, int b) { return x[a] < x[b]; });
  sp.coords.resize(n);
  for (int i = 0; i < n; ++i) sp.coords[i] = x[sp.order[i]];
  return sp;
}

const char* region_name(Region r) {
  switch (r) {
    case Region::outside_compact: return "outside_compact";
    case Region::boundary: return "boundary";
    case Region::all_above_one: return "all_above_one";
    case Region::all_below_one: return "all_below_one";
    case Region::critical_candidate: return "critical_candidate";
    case Region::descent: return "descent";
  }
  return "unknown";
}

CompactCheck in_compact(std::span<const double> x) {
  require_nonnegative(x, "in_compact");
  double sum = 0.0;
  for (double v : x) sum += v;
  const double margin = 6.0 * static_cast<double>(x.size()) - sum;
  return CompactCheck{margin >= 0.0, margin};
}

double descent_factor(const SortedPoint& x, int k) {
  const int n = x.n();
  require_n4(n, "descent_factor");
  if (k < 1 || k > n - 1) throw std::invalid_argument("descent_factor: k must be in [1, n-1]");
  const double xk = x.coords[k - 1];
  const double xn = x.coords[n - 1];
  if (xk + xn <= 0.0) throw std::invalid_argument("descent_factor: x_k + x_n must be positive");

  std::vector<double> rest;
  rest.reserve(n - 2);
  double root_rest = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == k - 1 || i == n - 1) continue;
    rest.push_back(x.coords[i]);
    root_rest += std::sqrt(x.coords[i]);
  }
  const std::vector<double> e = sympoly::elem_all(rest);
  const std::vector<double>& c = comb::derangements_as_double();
  double combinatorial = 0.0;
  for (int i = 1; i <= n - 2; ++i) combinatorial += c[n - i] * e[i - 1];
  const double denom = std::sqrt(xk) + std::sqrt(xn);
  return combinatorial - comb::factorials_as_double()[n - 2] * root_rest / denom;
}

double pair_derivative(const SortedPoint& x, int k) {
  const double closed = pair_derivative_closed(x, k);
  const int n = x.n();
  const double xk = x.coords[k - 1];
  const double xn = x.coords[n - 1];
  if (xk > 0.0 && xn > 0.0) {
    const fixedpoint::Gradient g = fixedpoint::gradient(x.coords);
    const double via_gradient = xk * g.partials[k - 1] - xn * g.partials[n - 1];
    if (std::abs(closed - via_gradient) > kCrossCheckTol * std::max(1.0, std::abs(closed))) {
      throw std::logic_error("pair_derivative: closed form and gradient route disagree");
    }
  }
  return closed;
}

double descent_factor_term(double v, double x_k, double x_n, int n) {
  require_n4(n, "descent_factor_term");
  if (!(v >= 0.0)) throw std::invalid_argument("descent_factor_term: v must be >= 0");
  const double denom = std::sqrt(x_k) + std::sqrt(x_n);
  if (!(denom > 0.0)) throw std::invalid_argument("descent_factor_term: degenerate denominator");
  const std::vector<double>& c = comb::derangements_as_double();
  return c[n - 1] / (n - 2.0) + c[n - 2] * v -
         comb::factorials_as_double()[n - 2] * std::sqrt(v) / denom;
}

double pair_term_bound(const SortedPoint& x, int k, int j) {
  const int n = x.n();
  require_n4(n, "pair_term_bound");
  if (k < n / 2 || k > n - 2) throw std::invalid_argument("pair_term_bound: k out of range");
  if (j < k + 1 || j > n - 1) throw std::invalid_argument("pair_term_bound: j out of range");
  const double xk = x.coords[k - 1];
  const double xn = x.coords[n - 1];
  return descent_factor_term(x.coords[j - 1], xk, xn, n) +
         descent_factor_term(x.coords[n - j - 1], xk, xn, n);
}

namespace {

comb::ExactInt tail_bound_combinatorial(int n, int ell, int t) {
  comb::ExactInt sum = 0;
  for (int i = 1; i <= n - 2; ++i) sum += comb::derangements(n - i) * comb::binomial(ell + t, i - 1);
  return sum;
}

void check_even_params(int n, int t) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("tail_bound_even: n must be even, >= 4");
  const int ell = n / 2;
  if (t < 0 || t > ell - 2) throw std::invalid_argument("tail_bound_even: t out of [0, l-2]");
}

void check_odd_params(int n, int t) {
  if (n < 5 || n % 2 != 1) throw std::invalid_argument("tail_bound_odd: n must be odd, >= 5");
  const int ell = (n - 1) / 2;
  if (t < 1 || t > ell - 1) throw std::invalid_argument("tail_bound_odd: t out of [1, l-1]");
}

void check_y_unit(double y) {
  if (!(y >= 0.0 && y <= 1.0)) throw std::invalid_argument("tail bound: y must be in [0, 1]");
}

}  // namespace

double tail_bound_even(const AuxParams& p) {
  check_even_params(p.n, p.t);
  check_y_unit(p.y);
  const int ell = p.n / 2;
  const double combinatorial = comb::to_double(tail_bound_combinatorial(p.n, ell, p.t));
  const double head = (ell + p.t) / (p.y + 1.0);
  const double tail = (ell - p.t - 2.0) * p.y / (p.y + 1.0);
  return combinatorial - comb::factorials_as_double()[p.n - 2] * (head + tail);
}

double tail_bound_odd(const AuxParams& p) {
  check_odd_params(p.n, p.t);
  check_y_unit(p.y);
  const int ell = (p.n - 1) / 2;
  const double combinatorial = comb::to_double(tail_bound_combinatorial(p.n, ell, p.t));
  const double head = (ell + p.t) / (p.y + 1.0);
  const double tail = (ell - p.t - 1.0) * p.y / (p.y + 1.0);
  return combinatorial - comb::factorials_as_double()[p.n - 2] * (head + tail);
}

comb::ExactRat tail_bound_even_exact(int n, int t, const comb::ExactRat& y) {
  check_even_params(n, t);
  if (y < 0 || y > 1) throw std::invalid_argument("tail_bound_even_exact: y must be in [0, 1]");
  const int ell = n / 2;
  const comb::ExactRat yp1 = y + 1;
  comb::ExactRat result(tail_bound_combinatorial(n, ell, t));
  result -= comb::ExactRat(comb::factorial(n - 2)) *
            (comb::ExactRat(ell + t) / yp1 + comb::ExactRat(ell - t - 2) * y / yp1);
  return result;
}

comb::ExactRat tail_bound_odd_exact(int n, int t, const comb::ExactRat& y) {
  check_odd_params(n, t);
  if (y < 0 || y > 1) throw std::invalid_argument("tail_bound_odd_exact: y must be in [0, 1]");
  const int ell = (n - 1) / 2;
  const comb::ExactRat yp1 = y + 1;
  comb::ExactRat result(tail_bound_combinatorial(n, ell, t));
  result -= comb::ExactRat(comb::factorial(n - 2)) *
            (comb::ExactRat(ell + t) / yp1 + comb::ExactRat(ell - t - 1) * y / yp1);
  return result;
}

FlowReport classify(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  require_n4(n, "classify");
  require_nonnegative(x, "classify");

  FlowReport rep;
  const CompactCheck cc = in_compact(x);
  if (cc.margin < 0.0) {
    rep.region = Region::outside_compact;
    rep.witness = cc.margin;
    return rep;
  }
  if (cc.margin == 0.0) {
    rep.region = Region::boundary;
    rep.witness = cc.margin;
    return rep;
  }

  const bool all_zero = std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
  if (all_zero) {
    rep.region = Region::descent;
    rep.direction = ones_direction(n);
    rep.witness = one_sided_quotient(x, *rep.direction);
    return rep;
  }

  // A vanishing coordinate makes the derivative diverge to -infinity, so the
  // inward basis vector is a decrease direction.
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0.0) {
      rep.region = Region::descent;
      std::vector<double> dir(n, 0.0);
      dir[i] = 1.0;
      rep.direction = std::move(dir);
      rep.witness = one_sided_quotient(x, *rep.direction);
      return rep;
    }
  }

  double max_dev = 0.0;
  for (double v : x) max_dev = std::max(max_dev, std::abs(v - 1.0));
  if (max_dev <= kOnesTolerance) {
    rep.region = Region::critical_candidate;
    rep.witness = max_dev;
    return rep;
  }

  const bool above = std::all_of(x.begin(), x.end(), [](double v) { return v > 1.0; });
  if (above) {
    const fixedpoint::Gradient g = fixedpoint::gradient(x);
    rep.region = Region::all_above_one;
    rep.witness = *std::min_element(g.partials.begin(), g.partials.end());
    return rep;
  }
  const bool below = std::all_of(x.begin(), x.end(), [](double v) { return v < 1.0; });
  if (below) {
    const fixedpoint::Gradient g = fixedpoint::gradient(x);
    rep.region = Region::all_below_one;
    rep.witness = std::accumulate(g.partials.begin(), g.partials.end(), 0.0);
    return rep;
  }

  // Mixed point: largest k with x_k < x_{k+1} in sorted order. It exists
  // because the point is neither constant (not all >1/<1/=1) nor unsorted.
  const SortedPoint sp = SortedPoint::from(x);
  int k = 0;
  for (int i = n - 1; i >= 1; --i) {
    if (sp.coords[i - 1] < sp.coords[i]) {
      k = i;
      break;
    }
  }
  rep.region = Region::descent;
  rep.k = k;
  rep.witness = pair_derivative_closed(sp, k);
  std::vector<double> dir(n, 0.0);
  dir[sp.order[k - 1]] = sp.coords[k - 1];
  dir[sp.order[n - 1]] = -sp.coords[n - 1];
  rep.direction = std::move(dir);
  return rep;
}

namespace {

// Backtracking step along a fixed direction; accepts the first strict
// decrease. Returns true and updates (x, fx, h) on success.
bool line_step(std::vector<double>& x, double& fx, double& h, double h0,
               const std::vector<double>& dir) {
  const int n = static_cast<int>(x.size());
  double norm = 0.0;
  for (double v : dir) norm += v * v;
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) return false;
  for (double trial = h; trial >= kStepFloor; trial *= 0.5) {
    std::vector<double> candidate(n);
    for (int i = 0; i < n; ++i) candidate[i] = std::max(x[i] + trial * dir[i] / norm, 0.0);
    const double fc = fixedpoint::gap(candidate);
    if (fc < fx) {
      x = std::move(candidate);
      fx = fc;
      h = std::min(trial * 2.0, std::max(h0, 1.0));
      return true;
    }
  }
  return false;
}

// Step along the pair ray x_up rising, x_dn falling. The first trial lands
// exactly on the tie point (both coordinates snapped to the same double) so
// the sorted tie is exact and the next classification moves to a smaller k;
// infinitesimal pair steps would approach the tie only asymptotically.
bool pair_step(std::vector<double>& x, double& fx, int i_up, int i_dn) {
  const double a = x[i_up];
  const double b = x[i_dn];
  const double merged = 2.0 * a * b / (a + b);  // the ray hits x_up = x_dn here
  {
    std::vector<double> candidate = x;
    candidate[i_up] = merged;
    candidate[i_dn] = merged;
    const double fc = fixedpoint::gap(candidate);
    if (fc < fx) {
      x = std::move(candidate);
      fx = fc;
      return true;
    }
  }
  const double s_star = (b - a) / (a + b);
  for (double s = 0.5 * s_star; s >= kStepFloor; s *= 0.5) {
    std::vector<double> candidate = x;
    candidate[i_up] = a * (1.0 + s);
    candidate[i_dn] = b * (1.0 - s);
    const double fc = fixedpoint::gap(candidate);
    if (fc < fx) {
      x = std::move(candidate);
      fx = fc;
      return true;
    }
  }
  return false;
}

}  // namespace

DescendResult descend(std::span<const double> x0, double step, int max_iters) {
  const int n = static_cast<int>(x0.size());
  require_n4(n, "descend");
  require_nonnegative(x0, "descend");
  if (!(step > 0.0)) throw std::invalid_argument("descend: step must be positive");

  std::vector<double> x(x0.begin(), x0.end());
  double fx = fixedpoint::gap(x);
  DescendResult result;
  result.gap_trajectory.push_back(fx);

  double h = step;
  for (int iter = 0; iter < max_iters; ++iter) {
    const FlowReport rep = classify(x);
    if (rep.region == Region::critical_candidate) {
      result.status = DescendStatus::converged;
      break;
    }

    bool accepted = false;
    if (rep.region == Region::descent && rep.k) {
      int i_up = -1, i_dn = -1;
      for (int i = 0; i < n; ++i) {
        if ((*rep.direction)[i] > 0.0) i_up = i;
        if ((*rep.direction)[i] < 0.0) i_dn = i;
      }
      accepted = pair_step(x, fx, i_up, i_dn);
    } else if (rep.direction) {
      accepted = line_step(x, fx, h, step, *rep.direction);  // boundary directions
    } else if (rep.region == Region::all_below_one) {
      accepted = line_step(x, fx, h, step, ones_direction(n));
    }

    if (!accepted) {
      // all_above_one, points that drifted out of the compact region, and
      // pair moves whose progress fell below float resolution all descend
      // along the gradient (divergent coordinates point inward).
      const fixedpoint::Gradient g = fixedpoint::gradient(x);
      std::vector<double> dir(n);
      for (int i = 0; i < n; ++i) dir[i] = g.valid[i] ? -g.partials[i] : 1.0;
      accepted = line_step(x, fx, h, step, dir);
    }

    result.iterations = iter + 1;
    if (!accepted) {
      result.status = DescendStatus::stalled;
      break;
    }
    result.gap_trajectory.push_back(fx);
  }

  result.final_point = std::move(x);
  result.final_gap = fx;
  return result;
}

}  // namespace symflow::flow
