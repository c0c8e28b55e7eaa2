#pragma once

#include "sgf/analytic.hpp"
#include "sgf/model.hpp"

namespace sgf {

/// Tolerances for the nested adaptive integration. The semi-infinite SINR
/// threshold range is mapped by t = lo + u / (1 - u), u in [0, 1 - infinity_clip].
struct IntegrationConfig {
  double abs_tol = 1e-20;
  double rel_tol = 1e-7;
  /// Maximum bisection depth of any single interval.
  int max_depth = 50;
  /// Maximum number of subintervals per one-dimensional integral.
  int max_intervals = 400;
  double infinity_clip = 1e-12;

  /// Throws std::invalid_argument; rel_tol must be >= 1e-10.
  void validate() const;
};

struct OracleResult {
  double value = 0.0;
  double err_est = 0.0;
  bool converged = true;
  long evaluations = 0;
};

/// kFirst integrates E[log2(1 + SINR) 1{event}], kSecond the mean of its
/// square, so callers can form the per-trial variance of a rate estimator.
enum class Moment { kFirst, kSecond };

/// Ergodic GB rate, SINR thresholds in [1, inf). Numeric over
/// (y = GF distance, z = GB distance, t = threshold); the fading integrals
/// are done in closed form.
OracleResult integrate_gb_high(const SystemParams& params, const IntegrationConfig& cfg,
                               Moment moment = Moment::kFirst);

struct GbLowItems {
  OracleResult item_one;  // interference-limited part, x below the split point
  OracleResult item_two;  // admission-limited tail, x above the split point
};

/// Ergodic GB rate, SINR thresholds in [0, 1), as its two items. kExact
/// splits the GF fading range where the SINR and admission constraints
/// cross; kLiteral uses the fixed split sigma^2 y^alpha / P_GF, for which
/// item two no longer depends on t and is a 2-D integral.
GbLowItems integrate_gb_low_items(const SystemParams& params, const IntegrationConfig& cfg,
                                  LowRateSplit split = LowRateSplit::kExact,
                                  Moment moment = Moment::kFirst);

OracleResult integrate_gb_low(const SystemParams& params, const IntegrationConfig& cfg,
                              LowRateSplit split = LowRateSplit::kExact,
                              Moment moment = Moment::kFirst);

/// integrate_gb_high + integrate_gb_low(kExact).
OracleResult integrate_gb(const SystemParams& params, const IntegrationConfig& cfg,
                          Moment moment = Moment::kFirst);

/// Ergodic GF rate with SIC success at params.sic_threshold. Applies the
/// admission constraint for every threshold, including thresholds below 1.
OracleResult integrate_gf(const SystemParams& params, const IntegrationConfig& cfg,
                          Moment moment = Moment::kFirst);

namespace detail {

/// Conditional tail probabilities given both distances, with the GF fading
/// integrated out. Exposed for the non-negativity tests.
double gb_tail_high(const SystemParams& params, double y, double z, double t);
double gb_tail_low(const SystemParams& params, double y, double z, double t, LowRateSplit split,
                   int item);
double gf_tail(const SystemParams& params, double y, double z, double t);

}  // namespace detail

}  // namespace sgf
