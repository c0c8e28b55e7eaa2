#pragma once

#include "sgf/model.hpp"
#include "sgf/specfun.hpp"

namespace sgf {

/// Selects between the closed forms as published and the corrected forms.
/// Every "literal" choice reproduces the printed expression term for term;
/// ERRATA.md lists the numeric effect of each.
enum class GbNormalization {
  kCorrected,  // 2 R^(alpha-1) / (ln2 (1 + alpha/2))
  kLiteral,    // 2 R^(alpha-1) / (1 + 1/alpha)
};

enum class LowRateSplit {
  kExact,    // interference split at the true decoding boundary x0(t)
  kLiteral,  // fixed split at sigma^2 y^alpha / P_GF (exact only at t = 1/2)
};

struct FormulaVariant {
  ChebyshevWeight weight = ChebyshevWeight::kStandard;
  GbNormalization gb_norm = GbNormalization::kCorrected;
  LowRateSplit low_split = LowRateSplit::kExact;

  static FormulaVariant corrected() { return {}; }
  static FormulaVariant literal() {
    return {ChebyshevWeight::kLiteral, GbNormalization::kLiteral, LowRateSplit::kLiteral};
  }
};

/// Node maps and power ratios shared by all closed forms.
struct HelperBundle {
  double radius_m;
  double theta1;  // lambda_GF P_GF / (lambda_GB P_GB)
  double theta2;  // sigma^2 / (lambda_GB P_GB)

  explicit HelperBundle(const SystemParams& params);

  /// Chebyshev node in (-1, 1) -> distance in (0, R).
  double omega1(double node) const { return 0.5 * radius_m * (node + 1.0); }
  /// Chebyshev node in (-1, 1] -> SINR threshold in [1, inf).
  static double omega2(double node) { return 2.0 / (node + 1.0); }
};

/// P_GF y^-alpha t / (lambda_GB P_GB z^-alpha) + 1 / lambda_GF.
double psi(double y, double z, double t, const SystemParams& params);

struct DeltaSet {
  double d1;  // lambda_GF / (1 - 1/d4); pole where d4 == 1
  double d2;  // sigma^2 z^alpha / (lambda_GB P_GB)
  double d3;  // exp(-sigma^2 y^alpha / (lambda_GF P_GF))
  double d4;  // (lambda_GB P_GB z^-alpha) / (lambda_GF P_GF y^-alpha)
  /// True when the d1 denominator is within 1e-9 of cancelling.
  bool d1_singular;
};

DeltaSet delta_set(double y, double z, const SystemParams& params);

/// Published four-Phi combination at distances (Omega1(node_n), Omega1(node_m)).
double xi(double node_n, double node_m, const SystemParams& params);

/// Three-term replacement for xi when the split point is exact:
/// Phi(1, b) - Phi(d4, b) - E(b (1 + d4) / 2) + E(b d4), E(u) = e^u E1(u).
double xi_exact_split(double node_n, double node_m, const SystemParams& params);

/// Ergodic GB rate restricted to SINR thresholds in [1, inf).
double rate_gb_high(const SystemParams& params, const QuadratureSpec& quad,
                    const FormulaVariant& variant = FormulaVariant::corrected());

struct GbLowTerms {
  double i3;  // Xi-bearing sum
  double i4;  // Psi-bearing sum
};

/// The two sums of the GB rate restricted to SINR thresholds in [0, 1].
GbLowTerms rate_gb_low_terms(const SystemParams& params, const QuadratureSpec& quad,
                             const FormulaVariant& variant = FormulaVariant::corrected());

double rate_gb_low(const SystemParams& params, const QuadratureSpec& quad,
                   const FormulaVariant& variant = FormulaVariant::corrected());

/// rate_gb_high + rate_gb_low.
double rate_gb(const SystemParams& params, const QuadratureSpec& quad,
               const FormulaVariant& variant = FormulaVariant::corrected());

/// Ergodic GF rate with SIC success at params.sic_threshold. Exact for
/// thresholds >= 1; below 1 the expression drops the admission constraint.
double rate_gf(const SystemParams& params, const QuadratureSpec& quad,
               const FormulaVariant& variant = FormulaVariant::corrected());

/// rate_gf with e^k E1(k) replaced by its small-k expansion
/// -(ln k + gamma)(1 - k). Meaningful only when P_GF / sigma^2 is large.
double rate_gf_approx(const SystemParams& params, const QuadratureSpec& quad,
                      const FormulaVariant& variant = FormulaVariant::corrected());

namespace detail {

/// Per-node-pair summands, exposed for term-level tests. Each already
/// carries the distance Jacobians but not the Chebyshev weights.
double gb_high_summand(const HelperBundle& h, double alpha, double node_n, double node_m,
                       GbNormalization norm);
GbLowTerms gb_low_summand(const SystemParams& params, double y, double z, LowRateSplit split);
double gf_summand(const SystemParams& params, double y, double z, bool approx);

}  // namespace detail

}  // namespace sgf
