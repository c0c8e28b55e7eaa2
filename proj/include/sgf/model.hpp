#pragma once

namespace sgf {

/// dBm -> linear milliwatts.
double dbm_to_mw(double dbm);

/// Physical constants of one uplink scenario: a base station at the centre of
/// a disc, one grant-based (GB) user and one grant-free (GF) candidate placed
/// uniformly in the disc, Rayleigh fading on both links.
///
/// User-facing powers are in dBm; all internal arithmetic is in linear mW.
struct SystemParams {
  double radius_m = 600.0;
  double pathloss_exp = 2.8;
  double p_gb_dbm = -60.0;  // 30 dB above the default noise floor
  double p_gf_dbm = 20.0;
  double noise_dbm = -90.0;
  double fading_mean_gb = 1.0;
  double fading_mean_gf = 1.0;
  /// SINR the GB signal must exceed for SIC to succeed.
  double sic_threshold = 1.0;

  double p_gb_mw() const { return dbm_to_mw(p_gb_dbm); }
  double p_gf_mw() const { return dbm_to_mw(p_gf_dbm); }
  double noise_mw() const { return dbm_to_mw(noise_dbm); }

  /// Transmit SNR P / sigma^2 in dB.
  double rho_gb_db() const { return p_gb_dbm - noise_dbm; }
  double rho_gf_db() const { return p_gf_dbm - noise_dbm; }

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;
};

/// One random realisation: two link distances and two fading power gains.
struct ChannelDraw {
  double d_gf_m;
  double d_gb_m;
  double h2_gf;
  double h2_gb;
};

/// Per-trial quantities derived from a draw.
struct LinkOutcome {
  double g_gf;  // GF received power at the BS, mW
  double g_gb;  // GB received power at the BS (the admission threshold), mW
  bool admitted;
  double gamma_gb;
  double gamma_gf;
  bool sic_ok;
};

/// Inverse CDF of the distance density 2x / R^2 on [0, R]: R * sqrt(u).
/// Throws std::invalid_argument for u outside [0, 1].
double sample_distance(double radius_m, double u);

/// Exponential variate with the given mean from u in (0, 1]: -mean * ln(u).
/// Throws std::invalid_argument for u outside (0, 1].
double sample_fading(double mean, double u);

/// P * h2 * d^-alpha in mW. Throws std::invalid_argument for d <= 0.
double received_power(double p_dbm, double h2, double d_m, double alpha);

/// Applies the dynamic admission rule (GF admitted iff its received power is
/// strictly below the GB received power) and computes both SINRs.
///
/// When the GF user is not admitted there is no interference and gamma_gb is
/// the interference-free SNR; rate estimators gate on `admitted` regardless.
LinkOutcome evaluate_link(const SystemParams& params, const ChannelDraw& draw);

}  // namespace sgf
