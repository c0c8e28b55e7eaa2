#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace sgf::adaptive {

/// Integral value with an absolute error bound and the number of innermost
/// integrand evaluations spent producing it.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  bool converged = true;
};

struct Tolerance {
  double abs_tol;
  double rel_tol;
  int max_intervals = 2000;
  int max_depth = 60;
};

namespace gk15 {

inline constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
inline constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace gk15

namespace detail {

struct Interval {
  double lo;
  double hi;
  double value;
  double error;
  int depth;
  bool operator<(const Interval& other) const { return error < other.error; }
};

/// One 15-point Kronrod panel. The integrand returns an Estimate so that
/// errors of nested integrals propagate through the Kronrod weights; an
/// inner integral that missed its tolerance shows up through that error.
template <class F>
Interval panel(F& f, double lo, double hi, int depth, long& evals) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::array<Estimate, 15> v;
  for (int i = 0; i < 7; ++i) {
    v[static_cast<std::size_t>(i)] = f(centre - half * gk15::kNodes[static_cast<std::size_t>(i)]);
    v[static_cast<std::size_t>(14 - i)] = f(centre + half * gk15::kNodes[static_cast<std::size_t>(i)]);
  }
  v[7] = f(centre);
  double kron = gk15::kKronrod[7] * v[7].value;
  double gauss = gk15::kGauss[3] * v[7].value;
  double inner_err = gk15::kKronrod[7] * v[7].error;
  for (std::size_t i = 0; i < 7; ++i) {
    const double pair = v[i].value + v[14 - i].value;
    kron += gk15::kKronrod[i] * pair;
    inner_err += gk15::kKronrod[i] * (v[i].error + v[14 - i].error);
    if (i % 2 == 1) gauss += gk15::kGauss[i / 2] * pair;
  }
  for (const auto& e : v) evals += e.evaluations;
  const double value = kron * half;
  const double error = std::fabs((kron - gauss) * half) + std::fabs(half) * inner_err;
  return {lo, hi, value, error, depth};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration over the union of the
/// consecutive intervals defined by `points` (sorted, at least two entries).
/// The interval with the largest error is bisected until the summed error is
/// within max(abs_tol, rel_tol |value|) or the interval budget runs out.
template <class F>
Estimate integrate(F&& f, std::vector<double> points, const Tolerance& tol) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  Estimate out;
  if (points.size() < 2) return out;

  long evals = 0;
  std::priority_queue<detail::Interval> queue;
  std::vector<detail::Interval> frozen;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    queue.push(detail::panel(f, points[i], points[i + 1], 0, evals));
  }
  auto totals = [&] {
    double value = 0.0;
    double error = 0.0;
    auto copy = queue;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
    for (const auto& iv : frozen) {
      value += iv.value;
      error += iv.error;
    }
    return std::pair{value, error};
  };

  auto [value, error] = totals();
  int intervals = static_cast<int>(queue.size());
  while (!queue.empty() && error > std::max(tol.abs_tol, tol.rel_tol * std::fabs(value))) {
    if (intervals >= tol.max_intervals) break;
    const detail::Interval worst = queue.top();
    queue.pop();
    if (worst.depth >= tol.max_depth) {
      frozen.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.lo + worst.hi);
    const detail::Interval left = detail::panel(f, worst.lo, mid, worst.depth + 1, evals);
    const detail::Interval right = detail::panel(f, mid, worst.hi, worst.depth + 1, evals);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++intervals;
  }
  // Re-sum from scratch so the running updates leave no rounding residue.
  auto [v, e] = totals();
  out.value = v;
  out.error = e;
  out.evaluations = evals;
  out.converged = e <= std::max(tol.abs_tol, tol.rel_tol * std::fabs(v));
  return out;
}

/// Plain scalar integrand wrapper: value with zero error, one evaluation.
template <class G>
auto scalar(G&& g) {
  return [g = std::forward<G>(g)](double x) { return Estimate{g(x), 0.0, 1, true}; };
}

}  // namespace sgf::adaptive
