#include "sgf/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgf/adaptive.hpp"

namespace sgf {

namespace {

using adaptive::Estimate;

constexpr double kLn2 = std::numbers::ln2;
// Distance breakpoints at R * 10^-k, k = 1..kDecades.
constexpr int kDecades = 13;

// Everything the fading-averaged tails need for one (y, z) pair, computed
// once per pair rather than once per threshold sample.
struct Pair {
  double a_ratio;  // P_GF y^-alpha / (lambda_GB P_GB z^-alpha)
  double b;        // sigma^2 z^alpha / (lambda_GB P_GB)
  double per_t;    // sigma^2 y^alpha / P_GF: GF fading needed per unit SINR
  double lf;       // lambda_GF
  double theta;    // SIC threshold
};

Pair make_pair(const SystemParams& p, double y, double z) {
  const double gb = p.fading_mean_gb * p.p_gb_mw();
  const double alpha = p.pathloss_exp;
  return {p.p_gf_mw() * std::pow(z / y, alpha) / gb, p.noise_mw() * std::pow(z, alpha) / gb,
          p.noise_mw() * std::pow(y, alpha) / p.p_gf_mw(), p.fading_mean_gf, p.sic_threshold};
}

double tail_high(const Pair& s, double t) {
  return std::exp(-t * s.b) / (1.0 + s.lf * t * s.a_ratio);
}

double tail_low(const Pair& s, double t, LowRateSplit split, int item) {
  const double inv_la = 1.0 / (s.lf * s.a_ratio);
  // psi(t) x0 and psi(1) x0, arranged so a_ratio -> inf stays finite.
  double psi_t_x0;
  double psi_1_x0;
  if (split == LowRateSplit::kExact) {
    const double lead = t * s.b / (1.0 - t);
    psi_t_x0 = lead * (t + inv_la);
    psi_1_x0 = lead * (1.0 + inv_la);
  } else {
    psi_t_x0 = (t * s.a_ratio + 1.0 / s.lf) * s.per_t;
    psi_1_x0 = (s.a_ratio + 1.0 / s.lf) * s.per_t;
  }
  if (item == 1) return std::exp(-t * s.b) * -std::expm1(-psi_t_x0) / (s.lf * t * s.a_ratio + 1.0);
  return std::exp(-psi_1_x0) / (s.lf * s.a_ratio + 1.0);
}

double tail_gf(const Pair& s, double t) {
  const double th = s.theta;
  const double x1 = s.per_t * t;
  const double psi_th = th * s.a_ratio + 1.0 / s.lf;
  const double head = std::exp(-th * s.b - psi_th * x1) / (s.lf * psi_th);
  if (th >= 1.0) return head;
  // Below 1 the admission constraint binds for GF fading above xs.
  const double xs = th * s.b / ((1.0 - th) * s.a_ratio);
  const double xm = std::max(x1, xs);
  const double psi_1 = s.a_ratio + 1.0 / s.lf;
  return head * -std::expm1(-psi_th * (xm - x1)) + std::exp(-psi_1 * xm) / (s.lf * psi_1);
}

double threshold_weight(double t, Moment moment) {
  if (moment == Moment::kFirst) return 1.0 / ((1.0 + t) * kLn2);
  return 2.0 * std::log1p(t) / ((1.0 + t) * kLn2 * kLn2);
}

adaptive::Tolerance tolerance(const IntegrationConfig& cfg) {
  return {cfg.abs_tol, cfg.rel_tol, cfg.max_intervals, cfg.max_depth};
}

void push_if_inside(std::vector<double>& pts, double x, double lo, double hi) {
  if (std::isfinite(x) && x > lo && x < hi) pts.push_back(x);
}

// Breakpoints at 1/rate, 2/rate, ..., 64/rate so that an exp(-rate x) decay
// is never hidden between the nodes of a single panel (all-zero samples
// would report a zero error).
void push_decay(std::vector<double>& pts, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) return;
  for (int j = 0; j <= 6; ++j) pts.push_back(std::ldexp(1.0, j) / rate);
}

std::vector<double> distance_points(double radius) {
  std::vector<double> pts{0.0, radius};
  for (int k = 1; k <= kDecades; ++k) pts.push_back(radius * std::pow(10.0, -k));
  return pts;
}

// Threshold integral over [lo, inf) in u = (t - lo) / (1 + t - lo).
template <class Tail>
Estimate semi_infinite(const IntegrationConfig& cfg, double lo, const std::vector<double>& knees,
                       Moment moment, Tail&& tail) {
  const double u_max = 1.0 - cfg.infinity_clip;
  std::vector<double> pts{0.0, u_max};
  for (double t : knees) {
    const double s = t - lo;
    if (s > 0.0) push_if_inside(pts, s / (1.0 + s), 0.0, u_max);
  }
  auto f = [&](double u) {
    const double s = u / (1.0 - u);
    const double t = lo + s;
    const double jac = 1.0 / ((1.0 - u) * (1.0 - u));
    return tail(t) * threshold_weight(t, moment) * jac;
  };
  return adaptive::integrate(adaptive::scalar(f), pts, tolerance(cfg));
}

template <class Tail>
Estimate unit_interval(const IntegrationConfig& cfg, const std::vector<double>& knees,
                       Moment moment, Tail&& tail) {
  std::vector<double> pts{0.0, 1.0};
  for (double t : knees) push_if_inside(pts, t, 0.0, 1.0);
  auto f = [&](double t) { return tail(t) * threshold_weight(t, moment); };
  return adaptive::integrate(adaptive::scalar(f), pts, tolerance(cfg));
}

// E over (y, z) of inner(y, z), both distances with density 2x / R^2.
// inner returns an Estimate; errors propagate outward.
template <class Inner>
Estimate over_distances(const SystemParams& p, const IntegrationConfig& cfg, Inner&& inner) {
  const double r = p.radius_m;
  const double alpha = p.pathloss_exp;
  const double gb = p.fading_mean_gb * p.p_gb_mw();
  const double noise = p.noise_mw();

  std::vector<double> y_pts = distance_points(r);
  // GF received SNR crosses 1.
  push_if_inside(y_pts, std::pow(p.p_gf_mw() / noise, 1.0 / alpha), 0.0, r);
  const std::vector<double> z_base = [&] {
    std::vector<double> pts = distance_points(r);
    // exp(-c z^alpha) decays for GB received SNR below 1 and below the SIC
    // threshold; z^alpha = 2^j / c for j = 0..6.
    std::vector<double> powers;
    push_decay(powers, noise / gb);
    if (p.sic_threshold > 0.0) push_decay(powers, noise * p.sic_threshold / gb);
    for (double zp : powers) push_if_inside(pts, std::pow(zp, 1.0 / alpha), 0.0, r);
    return pts;
  }();
  const double admit_ratio = std::pow(gb / p.p_gf_mw(), 1.0 / alpha);

  auto over_y = [&](double y) {
    std::vector<double> z_pts = z_base;
    // Mean received powers of the two users coincide.
    push_if_inside(z_pts, y * admit_ratio, 0.0, r);
    auto over_z = [&](double z) {
      Estimate e = inner(y, z);
      const double dens = 2.0 * z / (r * r);
      e.value *= dens;
      e.error *= dens;
      return e;
    };
    Estimate e = adaptive::integrate(over_z, z_pts, tolerance(cfg));
    const double dens = 2.0 * y / (r * r);
    e.value *= dens;
    e.error *= dens;
    return e;
  };
  return adaptive::integrate(over_y, y_pts, tolerance(cfg));
}

OracleResult to_result(const Estimate& e) {
  return {e.value, e.error, e.converged, e.evaluations};
}

OracleResult combine(const OracleResult& a, const OracleResult& b) {
  return {a.value + b.value, a.err_est + b.err_est, a.converged && b.converged,
          a.evaluations + b.evaluations};
}

}  // namespace

void IntegrationConfig::validate() const {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("oracle abs_tol must be > 0");
  if (!(rel_tol >= 1e-10)) throw std::invalid_argument("oracle rel_tol must be >= 1e-10");
  if (max_depth < 1) throw std::invalid_argument("oracle max_depth must be >= 1");
  if (max_intervals < 1) throw std::invalid_argument("oracle max_intervals must be >= 1");
  if (!(infinity_clip > 0.0 && infinity_clip < 0.5)) {
    throw std::invalid_argument("oracle infinity_clip must lie in (0, 0.5)");
  }
}

namespace detail {

double gb_tail_high(const SystemParams& p, double y, double z, double t) {
  return tail_high(make_pair(p, y, z), t);
}

double gb_tail_low(const SystemParams& p, double y, double z, double t, LowRateSplit split,
                   int item) {
  return tail_low(make_pair(p, y, z), t, split, item);
}

double gf_tail(const SystemParams& p, double y, double z, double t) {
  return tail_gf(make_pair(p, y, z), t);
}

}  // namespace detail

OracleResult integrate_gb_high(const SystemParams& params, const IntegrationConfig& cfg,
                               Moment moment) {
  params.validate();
  cfg.validate();
  const Estimate e = over_distances(params, cfg, [&](double y, double z) {
    const Pair s = make_pair(params, y, z);
    std::vector<double> knees{1.0 + 1.0 / (s.lf * s.a_ratio)};
    push_decay(knees, s.b);
    return semi_infinite(cfg, 1.0, knees, moment, [&](double t) { return tail_high(s, t); });
  });
  return to_result(e);
}

GbLowItems integrate_gb_low_items(const SystemParams& params, const IntegrationConfig& cfg,
                                  LowRateSplit split, Moment moment) {
  params.validate();
  cfg.validate();
  auto knees = [&](const Pair& s) {
    // c t / (1 - t) is the tail exponent of the exact split.
    const double c = s.b * (1.0 + 1.0 / (s.lf * s.a_ratio));
    std::vector<double> pts{1.0 - c};
    push_decay(pts, s.b);
    if (split == LowRateSplit::kExact) push_decay(pts, c);
    return pts;
  };
  GbLowItems out;
  out.item_one = to_result(over_distances(params, cfg, [&](double y, double z) {
    const Pair s = make_pair(params, y, z);
    return unit_interval(cfg, knees(s), moment, [&](double t) { return tail_low(s, t, split, 1); });
  }));
  if (split == LowRateSplit::kExact) {
    out.item_two = to_result(over_distances(params, cfg, [&](double y, double z) {
      const Pair s = make_pair(params, y, z);
      return unit_interval(cfg, knees(s), moment,
                           [&](double t) { return tail_low(s, t, split, 2); });
    }));
  } else {
    // The tail does not depend on t, and both threshold weights integrate to
    // exactly 1 over [0, 1].
    out.item_two = to_result(over_distances(params, cfg, [&](double y, double z) {
      return Estimate{tail_low(make_pair(params, y, z), 0.5, split, 2), 0.0, 1, true};
    }));
  }
  return out;
}

OracleResult integrate_gb_low(const SystemParams& params, const IntegrationConfig& cfg,
                              LowRateSplit split, Moment moment) {
  const GbLowItems items = integrate_gb_low_items(params, cfg, split, moment);
  return combine(items.item_one, items.item_two);
}

OracleResult integrate_gb(const SystemParams& params, const IntegrationConfig& cfg, Moment moment) {
  return combine(integrate_gb_high(params, cfg, moment),
                 integrate_gb_low(params, cfg, LowRateSplit::kExact, moment));
}

OracleResult integrate_gf(const SystemParams& params, const IntegrationConfig& cfg, Moment moment) {
  params.validate();
  cfg.validate();
  if (std::isinf(params.sic_threshold)) return {};
  const Estimate e = over_distances(params, cfg, [&](double y, double z) {
    const Pair s = make_pair(params, y, z);
    const double th = s.theta;
    std::vector<double> knees;
    push_decay(knees, (th * s.a_ratio + 1.0 / s.lf) * s.per_t);
    if (th < 1.0) knees.push_back(th * s.b / ((1.0 - th) * s.a_ratio) / s.per_t);
    return semi_infinite(cfg, 0.0, knees, moment, [&](double t) { return tail_gf(s, t); });
  });
  return to_result(e);
}

}  // namespace sgf
