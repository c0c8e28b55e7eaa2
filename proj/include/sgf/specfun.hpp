#pragma once

#include <vector>

namespace sgf {

/// Orders of the two nested Chebyshev-Gauss rules used by the closed-form
/// rate expressions. `n_outer` drives the first sum, `n_inner` the second.
struct QuadratureSpec {
  int n_outer = 200;
  int n_inner = 200;

  /// Throws std::invalid_argument unless both orders are >= 1.
  void validate() const;
};

struct QuadratureNode {
  double node;
  double weight;
};

/// Chebyshev-Gauss rule of the first kind:
/// node_k = cos((2k-1)pi / 2K), weight_k = pi / K, k = 1..K.
/// Nodes are returned in strictly decreasing order.
std::vector<QuadratureNode> chebyshev_nodes(int order);

/// Factor that turns the Chebyshev-Gauss rule into a plain integral over
/// [-1, 1]: sum w_k J(x_k) f(x_k) ~ int f(x) dx.
///
/// kStandard is sqrt(1 - x^2), the factor the rule actually requires.
/// kLiteral is sqrt(1 + x^2), kept only so the published form of the
/// closed-form expressions can be reproduced for comparison.
enum class ChebyshevWeight { kStandard, kLiteral };

double chebyshev_jacobian(double node, ChebyshevWeight weight);

/// Gauss hypergeometric 2F1(1, (2+alpha)/alpha; 2 + 2/alpha; z) for z <= 0.
///
/// This is the only 2F1 parameter pattern the rate expressions need. For
/// |z| <= 9 the Pfaff transform maps the argument into [0, 0.9] where the
/// series converges quickly; beyond that the Euler integral
/// b * int_0^1 r^(2/alpha) / (1 - z r) dr is evaluated in log coordinates.
/// Throws std::domain_error for z > 0, std::invalid_argument for alpha <= 0.
double hyp2f1_pathloss(double alpha, double z);

/// Exponential integral Ei(x) = int_{-inf}^x e^t / t dt for x < 0.
/// Throws std::domain_error for x >= 0.
double exp_int_ei(double x);

/// e^u E1(u) = -e^u Ei(-u) for u > 0, evaluated without forming the
/// overflow/underflow pair explicitly.
double e1_scaled(double u);

/// Phi(a, b) = int_0^1 exp(-b t) / (t + a) dt for a > 0, b >= 0.
/// Throws std::invalid_argument outside that domain.
double phi_kernel(double a, double b);

/// Gauss-Legendre nodes and weights on [-1, 1], computed once per order.
const std::vector<QuadratureNode>& gauss_legendre(int order);

namespace detail {

/// Switch point between the series and continued-fraction branches of E1.
inline constexpr double kE1SeriesLimit = 10.0;

/// Power series -gamma - ln u - sum (-u)^n / (n n!) for E1(u), summed in
/// extended precision (the alternating terms reach ~e^u / u while E1 is
/// ~e^-u / u).
double e1_series(double u);

/// Modified Lentz evaluation of the E1 continued fraction; returns
/// e^u E1(u). Accurate for u >= ~2.
double e1_continued_fraction_scaled(double u);

/// The two branches of hyp2f1_pathloss, exposed for cross-checking.
double hyp2f1_pathloss_series(double alpha, double z);
double hyp2f1_pathloss_integral(double alpha, double z);

}  // namespace detail

}  // namespace sgf
