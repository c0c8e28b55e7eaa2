#include "sgf/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace sgf {

namespace rng {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double to_unit(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

double trial_uniform(std::uint64_t seed, std::uint64_t trial, unsigned k) {
  const std::uint64_t key = mix64(seed);
  return to_unit(mix64(key + (4 * trial + k + 1) * kGolden));
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + 1));
}

}  // namespace rng

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Welford mean / M2 pair with Chan's merge.
struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    n += 1.0;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }

  static Moments merge(const Moments& a, const Moments& b) {
    if (a.n == 0.0) return b;
    if (b.n == 0.0) return a;
    Moments out;
    out.n = a.n + b.n;
    const double d = b.mean - a.mean;
    out.mean = a.mean + d * (b.n / out.n);
    out.m2 = a.m2 + b.m2 + d * d * (a.n * b.n / out.n);
    return out;
  }
};

struct BlockStats {
  Moments gb;
  Moments gf;
  std::uint64_t admitted = 0;
  std::uint64_t sic_ok = 0;

  static BlockStats merge(const BlockStats& a, const BlockStats& b) {
    return {Moments::merge(a.gb, b.gb), Moments::merge(a.gf, b.gf), a.admitted + b.admitted,
            a.sic_ok + b.sic_ok};
  }
};

BlockStats run_block(const SystemParams& params, std::uint64_t seed, std::uint64_t first,
                     std::uint64_t last) {
  BlockStats s;
  for (std::uint64_t i = first; i < last; ++i) {
    const LinkOutcome o = evaluate_link(params, draw_channel(params, seed, i));
    s.gb.add(o.admitted ? std::log1p(o.gamma_gb) / kLn2 : 0.0);
    s.gf.add(o.sic_ok ? std::log1p(o.gamma_gf) / kLn2 : 0.0);
    s.admitted += o.admitted ? 1 : 0;
    s.sic_ok += o.sic_ok ? 1 : 0;
  }
  return s;
}

// Adjacent pairs merged level by level; an odd tail is carried up unchanged.
BlockStats merge_tree(std::vector<BlockStats> level) {
  while (level.size() > 1) {
    std::vector<BlockStats> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      next.push_back(BlockStats::merge(level[i], level[i + 1]));
    }
    if (level.size() % 2 == 1) next.push_back(level.back());
    level = std::move(next);
  }
  return level.front();
}

RateEstimate to_estimate(const Moments& m, std::uint64_t trials, double admit, double sic) {
  RateEstimate r;
  r.mean_bpcu = m.mean;
  r.trials = trials;
  r.std_err = trials > 1 ? std::sqrt(m.m2 / (m.n - 1.0) / m.n) : 0.0;
  r.admit_prob = admit;
  r.sic_success_prob = sic;
  return r;
}

}  // namespace

ChannelDraw draw_channel(const SystemParams& params, std::uint64_t seed, std::uint64_t trial) {
  ChannelDraw d;
  d.d_gf_m = sample_distance(params.radius_m, rng::trial_uniform(seed, trial, 0));
  d.d_gb_m = sample_distance(params.radius_m, rng::trial_uniform(seed, trial, 1));
  d.h2_gf = sample_fading(params.fading_mean_gf, rng::trial_uniform(seed, trial, 2));
  d.h2_gb = sample_fading(params.fading_mean_gb, rng::trial_uniform(seed, trial, 3));
  return d;
}

SimulationResult simulate(const SystemParams& params, std::uint64_t trials, std::uint64_t seed,
                          unsigned jobs) {
  if (trials == 0) throw std::invalid_argument("simulate: trials must be >= 1");
  params.validate();
  const std::uint64_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
  std::vector<BlockStats> stats(blocks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t b = next++; b < blocks; b = next++) {
      const std::uint64_t first = b * kTrialBlock;
      stats[b] = run_block(params, seed, first, std::min(trials, first + kTrialBlock));
    }
  };
  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, jobs), blocks));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  const BlockStats total = merge_tree(std::move(stats));
  const double n = static_cast<double>(trials);
  const double admit = static_cast<double>(total.admitted) / n;
  const double sic = static_cast<double>(total.sic_ok) / n;
  return {to_estimate(total.gb, trials, admit, sic), to_estimate(total.gf, trials, admit, sic)};
}

const std::vector<std::string>& axis_names() {
  static const std::vector<std::string> names{
      "radius_m",       "pathloss_exp",   "p_gb_dbm",      "p_gf_dbm",   "noise_dbm",
      "fading_mean_gb", "fading_mean_gf", "sic_threshold", "rho_gb_db", "rho_gf_db"};
  return names;
}

void apply_axis(SystemParams& params, std::string_view axis, double value) {
  if (axis == "radius_m") params.radius_m = value;
  else if (axis == "pathloss_exp") params.pathloss_exp = value;
  else if (axis == "p_gb_dbm") params.p_gb_dbm = value;
  else if (axis == "p_gf_dbm") params.p_gf_dbm = value;
  else if (axis == "noise_dbm") params.noise_dbm = value;
  else if (axis == "fading_mean_gb") params.fading_mean_gb = value;
  else if (axis == "fading_mean_gf") params.fading_mean_gf = value;
  else if (axis == "sic_threshold") params.sic_threshold = value;
  else if (axis == "rho_gb_db") params.p_gb_dbm = params.noise_dbm + value;
  else if (axis == "rho_gf_db") params.p_gf_dbm = params.noise_dbm + value;
  else {
    std::string msg = "unknown sweep axis '" + std::string(axis) + "'; valid axes:";
    for (const auto& n : axis_names()) msg += " " + n;
    throw std::invalid_argument(msg);
  }
}

std::vector<SweepPoint> sweep_simulate(const SystemParams& base, std::string_view axis,
                                       const std::vector<double>& values, std::uint64_t trials,
                                       std::uint64_t seed, unsigned jobs) {
  if (values.empty()) throw std::invalid_argument("sweep_simulate: values must be non-empty");
  std::vector<SweepPoint> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    SystemParams p = base;
    apply_axis(p, axis, values[i]);
    out.push_back({values[i], simulate(p, trials, rng::sub_seed(seed, i), jobs)});
  }
  return out;
}

std::vector<double> admitted_gb_sinr(const SystemParams& params, std::uint64_t trials,
                                     std::uint64_t seed) {
  params.validate();
  std::vector<double> out;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const LinkOutcome o = evaluate_link(params, draw_channel(params, seed, i));
    if (o.admitted) out.push_back(o.gamma_gb);
  }
  return out;
}

double layer_cake_gb_rate(std::vector<double> admitted_sinr, std::uint64_t trials, double t_max,
                          int grid) {
  if (trials == 0) throw std::invalid_argument("layer_cake_gb_rate: trials must be >= 1");
  if (grid < 2) throw std::invalid_argument("layer_cake_gb_rate: grid must be >= 2");
  std::sort(admitted_sinr.begin(), admitted_sinr.end());
  const double n = static_cast<double>(trials);
  auto integrand = [&](double t) {
    // Count of samples strictly above t.
    const auto above = admitted_sinr.end() - std::upper_bound(admitted_sinr.begin(),
                                                              admitted_sinr.end(), t);
    return static_cast<double>(above) / n / ((1.0 + t) * kLn2);
  };
  std::vector<double> ts{0.0};
  const double t_min = t_max * 1e-8;
  for (int i = 0; i < grid; ++i) {
    ts.push_back(t_min * std::pow(t_max / t_min, static_cast<double>(i) / (grid - 1)));
  }
  double total = 0.0;
  double prev = integrand(ts[0]);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double cur = integrand(ts[i]);
    total += 0.5 * (prev + cur) * (ts[i] - ts[i - 1]);
    prev = cur;
  }
  return total;
}

}  // namespace sgf
