#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sgf/model.hpp"

namespace sgf {

/// Sample mean of a per-trial rate with its standard error and the event
/// frequencies that gate it.
struct RateEstimate {
  double mean_bpcu = 0.0;
  double std_err = 0.0;
  std::uint64_t trials = 0;
  double admit_prob = 0.0;
  double sic_success_prob = 0.0;
};

struct SimulationResult {
  RateEstimate gb;
  RateEstimate gf;
};

/// Counter-based generator: the k-th uniform of trial i is a pure function
/// of (seed, i, k), so any partition of trials across threads draws the
/// same numbers.
namespace rng {

/// SplitMix64 output function.
std::uint64_t mix64(std::uint64_t x);

/// Uniform in (0, 1] with 53 random bits.
double to_unit(std::uint64_t bits);

/// Uniform k in {0, 1, 2, 3} of trial i: in order d_GF, d_GB, |h_GF|^2, |h_GB|^2.
double trial_uniform(std::uint64_t seed, std::uint64_t trial, unsigned k);

/// Seed for point `index` of a sweep.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace rng

/// Draw for trial `trial` under `seed`.
ChannelDraw draw_channel(const SystemParams& params, std::uint64_t seed, std::uint64_t trial);

/// Trials are processed in fixed blocks of this many; block moments are
/// merged in a fixed pairwise tree.
inline constexpr std::uint64_t kTrialBlock = 4096;

/// Estimates both ergodic rates as indicator-weighted sample means:
/// gb averages log2(1 + SINR_GB) 1{admitted}, gf averages
/// log2(1 + SINR_GF) 1{admitted and SIC succeeds}.
/// Bit-identical for any `jobs` >= 1. Throws std::invalid_argument when
/// trials == 0.
SimulationResult simulate(const SystemParams& params, std::uint64_t trials, std::uint64_t seed,
                          unsigned jobs = 1);

/// Names accepted by apply_axis and sweep_simulate.
const std::vector<std::string>& axis_names();

/// Sets one scenario field. rho_gb_db / rho_gf_db set the transmit power to
/// noise_dbm + value. Throws std::invalid_argument for unknown names.
void apply_axis(SystemParams& params, std::string_view axis, double value);

struct SweepPoint {
  double value;
  SimulationResult result;
};

/// One simulate() per value, point i seeded with rng::sub_seed(seed, i).
std::vector<SweepPoint> sweep_simulate(const SystemParams& base, std::string_view axis,
                                       const std::vector<double>& values, std::uint64_t trials,
                                       std::uint64_t seed, unsigned jobs = 1);

/// GB SINR of every admitted trial, in trial order.
std::vector<double> admitted_gb_sinr(const SystemParams& params, std::uint64_t trials,
                                     std::uint64_t seed);

/// Rebuilds the GB rate from the empirical coverage probability:
/// int_0^t_max P(SINR > t, admitted) / ((1 + t) ln 2) dt by the trapezoid
/// rule on `grid` log-spaced points in [t_max * 1e-8, t_max] plus t = 0.
double layer_cake_gb_rate(std::vector<double> admitted_sinr, std::uint64_t trials,
                          double t_max = 1e3, int grid = 4000);

}  // namespace sgf
