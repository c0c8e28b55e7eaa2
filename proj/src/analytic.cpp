#include "sgf/analytic.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace sgf {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kEuler = std::numbers::egamma;
// exp(-x) is exactly zero in double beyond this.
constexpr double kExpUnderflow = 745.2;
constexpr double kSingularRel = 1e-9;
constexpr double kSingularStep = 1e-6;

struct WeightedNodes {
  std::vector<double> node;
  std::vector<double> weight;  // Chebyshev weight times the selected Jacobian
};

WeightedNodes weighted_nodes(int order, ChebyshevWeight kind) {
  WeightedNodes out;
  for (const auto& [x, w] : chebyshev_nodes(order)) {
    out.node.push_back(x);
    out.weight.push_back(w * chebyshev_jacobian(x, kind));
  }
  return out;
}

// Nested Chebyshev sum of a summand returning std::array<double, K>.
template <std::size_t K, class Summand>
std::array<double, K> double_sum_n(const QuadratureSpec& quad, ChebyshevWeight kind,
                                   Summand&& summand) {
  quad.validate();
  const WeightedNodes outer = weighted_nodes(quad.n_outer, kind);
  const WeightedNodes inner = weighted_nodes(quad.n_inner, kind);
  std::array<double, K> total{};
  for (std::size_t n = 0; n < outer.node.size(); ++n) {
    std::array<double, K> row{};
    for (std::size_t m = 0; m < inner.node.size(); ++m) {
      const std::array<double, K> v = summand(outer.node[n], inner.node[m]);
      for (std::size_t k = 0; k < K; ++k) row[k] += inner.weight[m] * v[k];
    }
    for (std::size_t k = 0; k < K; ++k) total[k] += outer.weight[n] * row[k];
  }
  return total;
}

template <class Summand>
double double_sum(const QuadratureSpec& quad, ChebyshevWeight kind, Summand&& summand) {
  return double_sum_n<1>(quad, kind, [&](double en, double em) {
    return std::array<double, 1>{summand(en, em)};
  })[0];
}

// Ratio lambda_GB P_GB z^-alpha / sigma^2 and friends, all in linear mW.
struct LinkScales {
  double a_ratio;  // P_GF y^-alpha / (lambda_GB P_GB z^-alpha)
  double b;        // sigma^2 z^alpha / (lambda_GB P_GB)
};

LinkScales link_scales(const SystemParams& p, double y, double z) {
  const double gb = p.fading_mean_gb * p.p_gb_mw();
  const double ratio = std::pow(z / y, p.pathloss_exp);
  return {p.p_gf_mw() * ratio / gb, p.noise_mw() * std::pow(z, p.pathloss_exp) / gb};
}

double escaled(double u) { return e1_scaled(u); }

double xi_literal_at(const SystemParams& p, double y, double z) {
  const DeltaSet d = delta_set(y, z, p);
  return phi_kernel(1.0, d.d2) - d.d3 * phi_kernel(1.0, 2.0 * d.d2) - phi_kernel(d.d4, d.d2) +
         d.d3 * phi_kernel(d.d4, 2.0 * d.d2);
}

double xi_exact_at(const SystemParams& p, double y, double z) {
  const DeltaSet d = delta_set(y, z, p);
  if (d.d2 == 0.0) return 0.0;
  const double c = d.d2 * (1.0 + d.d4);
  return phi_kernel(1.0, d.d2) - phi_kernel(d.d4, d.d2) - escaled(0.5 * c) + escaled(d.d2 * d.d4);
}

// delta1 * xi, averaged across the removable pole when needed.
template <class XiFn>
double d1_times_xi(const SystemParams& p, double y, double z, XiFn&& xi_fn) {
  const DeltaSet d = delta_set(y, z, p);
  if (!d.d1_singular) return d.d1 * xi_fn(p, y, z);
  const double lo = y * (1.0 - kSingularStep);
  const double hi = y * (1.0 + kSingularStep);
  return 0.5 * (delta_set(lo, z, p).d1 * xi_fn(p, lo, z) + delta_set(hi, z, p).d1 * xi_fn(p, hi, z));
}

}  // namespace

HelperBundle::HelperBundle(const SystemParams& params)
    : radius_m(params.radius_m),
      theta1(params.fading_mean_gf * params.p_gf_mw() / (params.fading_mean_gb * params.p_gb_mw())),
      theta2(params.noise_mw() / (params.fading_mean_gb * params.p_gb_mw())) {}

double psi(double y, double z, double t, const SystemParams& params) {
  return link_scales(params, y, z).a_ratio * t + 1.0 / params.fading_mean_gf;
}

DeltaSet delta_set(double y, double z, const SystemParams& params) {
  const double alpha = params.pathloss_exp;
  const double gb_rx = params.fading_mean_gb * params.p_gb_mw() * std::pow(z, -alpha);
  const double gf_rx = params.fading_mean_gf * params.p_gf_mw() * std::pow(y, -alpha);
  DeltaSet d{};
  const double denom = gb_rx - gf_rx;
  d.d1_singular = std::fabs(denom) < kSingularRel * gb_rx;
  d.d1 = params.fading_mean_gf * gb_rx / denom;
  d.d2 = params.noise_mw() / gb_rx;
  d.d3 = std::exp(-params.noise_mw() * std::pow(y, alpha) / (params.fading_mean_gf * params.p_gf_mw()));
  d.d4 = gb_rx / gf_rx;
  return d;
}

double xi(double node_n, double node_m, const SystemParams& params) {
  const HelperBundle h(params);
  return xi_literal_at(params, h.omega1(node_n), h.omega1(node_m));
}

double xi_exact_split(double node_n, double node_m, const SystemParams& params) {
  const HelperBundle h(params);
  return xi_exact_at(params, h.omega1(node_n), h.omega1(node_m));
}

namespace detail {

double gb_high_summand(const HelperBundle& h, double alpha, double node_n, double node_m,
                       GbNormalization norm) {
  const double z = h.omega1(node_n);
  const double t = HelperBundle::omega2(node_m);
  const double expo = h.theta2 * std::pow(z, alpha) * t;
  if (expo > kExpUnderflow) return 0.0;
  const double shape = norm == GbNormalization::kCorrected ? kLn2 * (1.0 + 0.5 * alpha)
                                                           : 1.0 + 1.0 / alpha;
  const double pre = 2.0 * std::pow(h.radius_m, alpha - 1.0) /
                     (shape * h.theta1 * (node_m + 1.0) * (node_m + 1.0));
  const double arg = -std::pow(h.radius_m / z, alpha) / (h.theta1 * t);
  return pre * std::exp(-expo) / (std::pow(z, alpha - 1.0) * (t + t * t)) *
         hyp2f1_pathloss(alpha, arg);
}

GbLowTerms gb_low_summand(const SystemParams& p, double y, double z, LowRateSplit split) {
  const double r2 = p.radius_m * p.radius_m;
  const double lf = p.fading_mean_gf;
  GbLowTerms out{};
  if (split == LowRateSplit::kLiteral) {
    out.i3 = y * z * d1_times_xi(p, y, z, xi_literal_at) / (kLn2 * lf * r2);
    const double psi1 = psi(y, z, 1.0, p);
    const double expo = psi1 * p.noise_mw() * std::pow(y, p.pathloss_exp) / p.p_gf_mw();
    out.i4 = y * z * std::exp(-expo) / (lf * psi1 * r2);
    return out;
  }
  out.i3 = y * z * d1_times_xi(p, y, z, xi_exact_at) / (kLn2 * lf * r2);
  const DeltaSet d = delta_set(y, z, p);
  const double share = d.d4 / (1.0 + d.d4);
  // E(c/2) - E(c) -> ln 2 as c -> 0.
  const double c = d.d2 * (1.0 + d.d4);
  const double tail = c == 0.0 ? kLn2 : escaled(0.5 * c) - escaled(c);
  out.i4 = y * z * share * tail / (kLn2 * r2);
  return out;
}

double gf_summand(const SystemParams& p, double y, double z, bool approx) {
  const double th = p.sic_threshold;
  const LinkScales s = link_scales(p, y, z);
  const double gate = th * s.b;
  if (!(gate < kExpUnderflow)) return 0.0;
  const double psi_t = th * s.a_ratio + 1.0 / p.fading_mean_gf;
  const double k = psi_t * p.noise_mw() * std::pow(y, p.pathloss_exp) / p.p_gf_mw();
  const double kernel = approx ? -(std::log(k) + kEuler) * (1.0 - k) : escaled(k);
  return y * z * std::exp(-gate) * kernel /
         (kLn2 * p.fading_mean_gf * p.radius_m * p.radius_m * psi_t);
}

}  // namespace detail

double rate_gb_high(const SystemParams& params, const QuadratureSpec& quad,
                    const FormulaVariant& variant) {
  params.validate();
  const HelperBundle h(params);
  const double alpha = params.pathloss_exp;
  return double_sum(quad, variant.weight, [&](double en, double em) {
    return detail::gb_high_summand(h, alpha, en, em, variant.gb_norm);
  });
}

GbLowTerms rate_gb_low_terms(const SystemParams& params, const QuadratureSpec& quad,
                             const FormulaVariant& variant) {
  params.validate();
  const HelperBundle h(params);
  const auto sums = double_sum_n<2>(quad, variant.weight, [&](double en, double em) {
    const GbLowTerms t =
        detail::gb_low_summand(params, h.omega1(en), h.omega1(em), variant.low_split);
    return std::array<double, 2>{t.i3, t.i4};
  });
  const GbLowTerms total{sums[0], sums[1]};
  return total;
}

double rate_gb_low(const SystemParams& params, const QuadratureSpec& quad,
                   const FormulaVariant& variant) {
  const GbLowTerms t = rate_gb_low_terms(params, quad, variant);
  return t.i3 + t.i4;
}

double rate_gb(const SystemParams& params, const QuadratureSpec& quad,
               const FormulaVariant& variant) {
  return rate_gb_high(params, quad, variant) + rate_gb_low(params, quad, variant);
}

double rate_gf(const SystemParams& params, const QuadratureSpec& quad,
               const FormulaVariant& variant) {
  params.validate();
  const HelperBundle h(params);
  return double_sum(quad, variant.weight, [&](double en, double em) {
    return detail::gf_summand(params, h.omega1(en), h.omega1(em), false);
  });
}

double rate_gf_approx(const SystemParams& params, const QuadratureSpec& quad,
                      const FormulaVariant& variant) {
  params.validate();
  const HelperBundle h(params);
  return double_sum(quad, variant.weight, [&](double en, double em) {
    return detail::gf_summand(params, h.omega1(en), h.omega1(em), true);
  });
}

}  // namespace sgf
