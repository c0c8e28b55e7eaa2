#include "sgf/specfun.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#ifdef SGF_HAVE_QUADMATH
#include <quadmath.h>
#endif

namespace sgf {

namespace {

#ifdef SGF_HAVE_QUADMATH
__extension__ typedef __float128 wide_t;
wide_t wide_log(wide_t x) { return logq(x); }
wide_t wide_abs(wide_t x) { return fabsq(x); }
const wide_t kEulerWide = strtoflt128("0.577215664901532860606512090082402431", nullptr);
#else
typedef long double wide_t;
wide_t wide_log(wide_t x) { return std::log(x); }
wide_t wide_abs(wide_t x) { return std::fabs(x); }
const wide_t kEulerWide = 0.577215664901532860606512090082402431L;
#endif

constexpr double kEuler = std::numbers::egamma;

// Small-argument series in plain double; cancellation costs < 1 digit for u <= 1.
double e1_series_double(double u) {
  double term = 1.0;
  double sum = 0.0;
  for (int n = 1; n < 200; ++n) {
    term *= -u / n;
    const double contrib = term / n;
    sum += contrib;
    if (std::fabs(contrib) < 1e-18 * std::fabs(sum)) break;
  }
  return -kEuler - std::log(u) - sum;
}

std::vector<QuadratureNode> build_gauss_legendre(int order) {
  std::vector<QuadratureNode> rule(static_cast<std::size_t>(order));
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule[static_cast<std::size_t>(i)] = {x, w};
    rule[static_cast<std::size_t>(order - 1 - i)] = {-x, w};
  }
  if (order % 2 == 1) rule[static_cast<std::size_t>(order / 2)].node = 0.0;
  return rule;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (n_outer < 1 || n_inner < 1) {
    throw std::invalid_argument("quadrature orders must be >= 1 (got N=" +
                                std::to_string(n_outer) + ", M=" + std::to_string(n_inner) + ")");
  }
}

std::vector<QuadratureNode> chebyshev_nodes(int order) {
  if (order < 1) throw std::invalid_argument("chebyshev_nodes: order must be >= 1");
  std::vector<QuadratureNode> rule;
  rule.reserve(static_cast<std::size_t>(order));
  const double weight = std::numbers::pi / order;
  for (int k = 1; k <= order; ++k) {
    rule.push_back({std::cos((2.0 * k - 1.0) * std::numbers::pi / (2.0 * order)), weight});
  }
  // cos() is not exactly odd-symmetric in floating point; mirror the upper half.
  for (int k = 0; k < order / 2; ++k) {
    rule[static_cast<std::size_t>(order - 1 - k)].node = -rule[static_cast<std::size_t>(k)].node;
  }
  if (order % 2 == 1) rule[static_cast<std::size_t>(order / 2)].node = 0.0;
  return rule;
}

double chebyshev_jacobian(double node, ChebyshevWeight weight) {
  return weight == ChebyshevWeight::kStandard ? std::sqrt((1.0 - node) * (1.0 + node))
                                              : std::sqrt(1.0 + node * node);
}

const std::vector<QuadratureNode>& gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  static std::mutex mutex;
  static std::map<int, std::vector<QuadratureNode>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_gauss_legendre(order)).first;
  return it->second;
}

namespace detail {

double e1_series(double u) {
  if (!(u > 0.0)) throw std::domain_error("e1_series: argument must be > 0");
  const wide_t x = u;
  wide_t term = 1;
  wide_t sum = 0;
  for (int n = 1; n < 4000; ++n) {
    term *= -x / n;
    const wide_t contrib = term / n;
    sum += contrib;
    if (n > u && wide_abs(contrib) < static_cast<wide_t>(1e-40)) break;
  }
  return static_cast<double>(-kEulerWide - wide_log(x) - sum);
}

double e1_continued_fraction_scaled(double u) {
  if (!(u > 0.0)) throw std::domain_error("e1_continued_fraction_scaled: argument must be > 0");
  constexpr double kTiny = 1e-300;
  double b = u + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::fabs(del - 1.0) <= 1e-16) break;
  }
  return h;
}

double hyp2f1_pathloss_series(double alpha, double z) {
  const double x = -z;
  const double c = 2.0 + 2.0 / alpha;
  const double w = x / (1.0 + x);
  // Pfaff: 2F1(1, b; c; z) = (1 - z)^-1 2F1(1, c - b; c; z / (z - 1)), c - b = 1.
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 100000; ++k) {
    term *= (k + 1.0) / (c + k) * w;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / (1.0 + x);
}

double hyp2f1_pathloss_integral(double alpha, double z) {
  const double x = -z;
  const double beta = 2.0 / alpha;
  const double b = 1.0 + beta;
  // b * int_0^inf exp(-(beta+1) u) / (1 + x exp(-u)) du; the integrand turns
  // over at u = ln x and its poles sit pi away from the real axis.
  const double upper = std::max(std::log(x), 0.0) + 50.0 / (1.0 + beta);
  constexpr double kPanel = 4.0;
  const int panels = static_cast<int>(std::ceil(upper / kPanel));
  const auto& rule = gauss_legendre(20);
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = p * kPanel;
    const double half = 0.5 * kPanel;
    const double mid = lo + half;
    double panel = 0.0;
    for (const auto& [node, weight] : rule) {
      const double u = mid + half * node;
      panel += weight * std::exp(-(beta + 1.0) * u) / (1.0 + x * std::exp(-u));
    }
    total += half * panel;
  }
  return b * total;
}

}  // namespace detail

double hyp2f1_pathloss(double alpha, double z) {
  if (!(alpha > 0.0)) throw std::invalid_argument("hyp2f1_pathloss: alpha must be > 0");
  if (z > 0.0) throw std::domain_error("hyp2f1_pathloss: only z <= 0 is supported");
  if (std::isnan(z)) throw std::domain_error("hyp2f1_pathloss: z is NaN");
  if (z == 0.0) return 1.0;
  if (-z <= 9.0) return detail::hyp2f1_pathloss_series(alpha, z);
  return detail::hyp2f1_pathloss_integral(alpha, z);
}

double e1_scaled(double u) {
  if (!(u > 0.0)) throw std::domain_error("e1_scaled: argument must be > 0");
  if (u <= 1.0) return std::exp(u) * e1_series_double(u);
  if (u < detail::kE1SeriesLimit) return std::exp(u) * detail::e1_series(u);
  return detail::e1_continued_fraction_scaled(u);
}

double exp_int_ei(double x) {
  if (!(x < 0.0)) throw std::domain_error("exp_int_ei: only x < 0 is supported");
  const double u = -x;
  if (u <= 1.0) return -e1_series_double(u);
  if (u < detail::kE1SeriesLimit) return -detail::e1_series(u);
  return -detail::e1_continued_fraction_scaled(u) * std::exp(-u);
}

double phi_kernel(double a, double b) {
  if (!(a > 0.0)) throw std::invalid_argument("phi_kernel: a must be > 0");
  if (!(b >= 0.0)) throw std::invalid_argument("phi_kernel: b must be >= 0");
  if (b == 0.0) return std::log1p(1.0 / a);
  if (a > 2.0 && b < 2.0) {
    // The E1 difference below cancels badly here; the integrand is entire
    // apart from a pole at t = -a, far enough away for a fixed rule.
    double sum = 0.0;
    for (const auto& [node, weight] : gauss_legendre(20)) {
      const double t = 0.5 * (node + 1.0);
      sum += weight * std::exp(-b * t) / (t + a);
    }
    return 0.5 * sum;
  }
  // int_0^1 = int_0^inf - int_1^inf, each an exponentially scaled E1.
  return e1_scaled(a * b) - std::exp(-b) * e1_scaled((1.0 + a) * b);
}

}  // namespace sgf
