#include "sgf/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sgf {

namespace {

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw std::invalid_argument(std::string(field) + ": " + what);
}

}  // namespace

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

void SystemParams::validate() const {
  require(std::isfinite(radius_m) && radius_m > 0.0, "radius_m", "must be > 0");
  require(std::isfinite(pathloss_exp) && pathloss_exp > 0.0, "pathloss_exp", "must be > 0");
  require(std::isfinite(p_gb_dbm), "p_gb_dbm", "must be finite");
  require(std::isfinite(p_gf_dbm), "p_gf_dbm", "must be finite");
  require(std::isfinite(noise_dbm), "noise_dbm", "must be finite");
  require(std::isfinite(fading_mean_gb) && fading_mean_gb > 0.0, "fading_mean_gb", "must be > 0");
  require(std::isfinite(fading_mean_gf) && fading_mean_gf > 0.0, "fading_mean_gf", "must be > 0");
  require(sic_threshold >= 0.0 && !std::isnan(sic_threshold), "sic_threshold", "must be >= 0");
  require(p_gb_mw() > 0.0 && p_gf_mw() > 0.0 && noise_mw() > 0.0, "power",
          "linear-scale value underflows to zero");
}

double sample_distance(double radius_m, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("sample_distance: u must lie in [0, 1]");
  return radius_m * std::sqrt(u);
}

double sample_fading(double mean, double u) {
  if (!(u > 0.0 && u <= 1.0)) throw std::invalid_argument("sample_fading: u must lie in (0, 1]");
  return -mean * std::log(u);
}

double received_power(double p_dbm, double h2, double d_m, double alpha) {
  if (!(d_m > 0.0)) throw std::invalid_argument("received_power: distance must be > 0");
  return dbm_to_mw(p_dbm) * h2 * std::pow(d_m, -alpha);
}

LinkOutcome evaluate_link(const SystemParams& params, const ChannelDraw& draw) {
  const double noise = params.noise_mw();
  LinkOutcome out{};
  out.g_gf = received_power(params.p_gf_dbm, draw.h2_gf, draw.d_gf_m, params.pathloss_exp);
  out.g_gb = received_power(params.p_gb_dbm, draw.h2_gb, draw.d_gb_m, params.pathloss_exp);
  out.admitted = out.g_gf < out.g_gb;
  out.gamma_gb = out.admitted ? out.g_gb / (out.g_gf + noise) : out.g_gb / noise;
  out.gamma_gf = out.g_gf / noise;
  out.sic_ok = out.admitted && out.gamma_gb > params.sic_threshold;
  return out;
}

}  // namespace sgf
