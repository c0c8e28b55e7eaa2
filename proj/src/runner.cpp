#include "sgf/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "sgf/analytic.hpp"
#include "sgf/errors.hpp"
#include "sgf/montecarlo.hpp"
#include "sgf/oracle.hpp"

#ifndef SGF_VERSION
#define SGF_VERSION "unknown"
#endif

namespace sgf {

namespace {

constexpr double kAnalyticRelTol = 1e-2;
constexpr double kMcSigmas = 3.0;

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string cell(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

PointResult evaluate_point(const ScenarioConfig& cfg, std::size_t index, double value,
                           unsigned mc_jobs) {
  PointResult r;
  r.axis_value = value;
  r.params = cfg.params;
  if (!cfg.axis.empty()) apply_axis(r.params, cfg.axis, value);
  r.params.validate();
  const RunMode mode = cfg.mode;
  const bool all = mode == RunMode::kCompare;

  if (all || mode == RunMode::kAnalytic) {
    const FormulaVariant variant = cfg.variant();
    r.gb_analytic = rate_gb(r.params, cfg.quad, variant);
    r.gf_analytic = rate_gf(r.params, cfg.quad, variant);
    r.gf_approx = rate_gf_approx(r.params, cfg.quad, variant);
  }
  if (all || mode == RunMode::kOracle) {
    const OracleResult gb = integrate_gb(r.params, cfg.oracle);
    const OracleResult gf = integrate_gf(r.params, cfg.oracle);
    r.gb_oracle = gb.value;
    r.gf_oracle = gf.value;
    r.gb_oracle_err = gb.err_est;
    r.gf_oracle_err = gf.err_est;
    r.oracle_converged = gb.converged && gf.converged;
  }
  if (all || mode == RunMode::kMonteCarlo) {
    const std::uint64_t seed = cfg.axis.empty() ? cfg.seed : rng::sub_seed(cfg.seed, index);
    const SimulationResult mc = simulate(r.params, cfg.trials, seed, mc_jobs);
    r.gb_mc = mc.gb.mean_bpcu;
    r.gb_mc_stderr = mc.gb.std_err;
    r.gf_mc = mc.gf.mean_bpcu;
    r.gf_mc_stderr = mc.gf.std_err;
    r.admit_prob = mc.gb.admit_prob;
    r.sic_prob = mc.gf.sic_success_prob;
  }
  return r;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

nlohmann::json params_json(const SystemParams& p) {
  return {{"radius_m", p.radius_m},
          {"pathloss_exp", p.pathloss_exp},
          {"noise_dbm", p.noise_dbm},
          {"p_gb_dbm", p.p_gb_dbm},
          {"p_gf_dbm", p.p_gf_dbm},
          {"rho_gb_db", p.rho_gb_db()},
          {"rho_gf_db", p.rho_gf_db()},
          {"fading_mean_gb", p.fading_mean_gb},
          {"fading_mean_gf", p.fading_mean_gf},
          {"sic_threshold", p.sic_threshold}};
}

}  // namespace

std::vector<PointResult> evaluate_points(const ScenarioConfig& cfg) {
  const std::vector<double> values = cfg.axis_values();
  std::vector<PointResult> rows(values.size());
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, cfg.jobs), values.size()));
  // A lone point gets the whole job budget for its simulation instead.
  const unsigned mc_jobs = values.size() == 1 ? std::max(1u, cfg.jobs) : 1u;
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size() && !failed; i = next++) {
      try {
        rows[i] = evaluate_point(cfg, i, values[i], mc_jobs);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return rows;
}

std::string results_csv(const std::vector<PointResult>& rows, bool has_axis) {
  std::string out =
      "axis_value,rate_gb_analytic,rate_gb_oracle,rate_gb_mc,rate_gb_mc_stderr,"
      "rate_gf_analytic,rate_gf_approx,rate_gf_oracle,rate_gf_mc,rate_gf_mc_stderr,"
      "admit_prob,sic_prob\n";
  for (const auto& r : rows) {
    out += has_axis ? fmt(r.axis_value) : std::string();
    for (const auto* v : {&r.gb_analytic, &r.gb_oracle, &r.gb_mc, &r.gb_mc_stderr, &r.gf_analytic,
                          &r.gf_approx, &r.gf_oracle, &r.gf_mc, &r.gf_mc_stderr, &r.admit_prob,
                          &r.sic_prob}) {
      out += ',';
      out += cell(*v);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> compare_flags(const std::vector<PointResult>& rows) {
  std::vector<std::string> flags;
  auto check = [&](const PointResult& r, const char* user, const std::optional<double>& analytic,
                   const std::optional<double>& oracle, const std::optional<double>& mc,
                   const std::optional<double>& se) {
    if (!oracle) return;
    const std::string where = "axis_value=" + fmt(r.axis_value) + " " + user + ": ";
    if (analytic) {
      const double rel = std::fabs(*analytic - *oracle) / std::fabs(*oracle);
      if (!(rel <= kAnalyticRelTol)) {
        flags.push_back(where + "analytic " + fmt(*analytic) + " vs oracle " + fmt(*oracle) +
                        " (relative gap " + fmt(rel) + ")");
      }
    }
    if (mc && se) {
      const double gap = std::fabs(*mc - *oracle);
      if (!(gap <= kMcSigmas * *se)) {
        flags.push_back(where + "monte carlo " + fmt(*mc) + " vs oracle " + fmt(*oracle) +
                        " (gap " + fmt(gap) + ", 3 stderr " + fmt(kMcSigmas * *se) + ")");
      }
    }
  };
  for (const auto& r : rows) {
    check(r, "gb", r.gb_analytic, r.gb_oracle, r.gb_mc, r.gb_mc_stderr);
    check(r, "gf", r.gf_analytic, r.gf_oracle, r.gf_mc, r.gf_mc_stderr);
  }
  return flags;
}

std::string figure_svg(const std::vector<PointResult>& rows, const std::string& axis) {
  struct Series {
    const char* name;
    const char* colour;
    const char* dash;
    std::optional<double> PointResult::*field;
  };
  const Series series[] = {
      {"GB analytic", "#1f77b4", "", &PointResult::gb_analytic},
      {"GB oracle", "#1f77b4", "2,3", &PointResult::gb_oracle},
      {"GB Monte Carlo", "#aec7e8", "6,3", &PointResult::gb_mc},
      {"GF analytic", "#d62728", "", &PointResult::gf_analytic},
      {"GF high-SNR approx", "#ff9896", "8,4", &PointResult::gf_approx},
      {"GF oracle", "#d62728", "2,3", &PointResult::gf_oracle},
      {"GF Monte Carlo", "#ff7f0e", "6,3", &PointResult::gf_mc},
  };
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& r : rows) {
    for (const auto& s : series) {
      const auto& v = r.*(s.field);
      if (!v || !(*v > 0.0)) continue;
      xmin = std::min(xmin, r.axis_value);
      xmax = std::max(xmax, r.axis_value);
      ymin = std::min(ymin, std::log10(*v));
      ymax = std::max(ymax, std::log10(*v));
    }
  }
  if (!(xmin <= xmax)) xmin = 0.0, xmax = 1.0, ymin = -1.0, ymax = 0.0;
  if (xmax == xmin) xmin -= 1.0, xmax += 1.0;
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  if (ymax == ymin) ymax += 1.0;

  constexpr double kW = 640, kH = 420, kL = 70, kR = 170, kT = 20, kB = 50;
  auto px = [&](double x) { return kL + (x - xmin) / (xmax - xmin) * (kW - kL - kR); };
  auto py = [&](double ly) { return kH - kB - (ly - ymin) / (ymax - ymin) * (kH - kT - kB); };
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                "font-family=\"sans-serif\" font-size=\"11\">\n",
                kW, kH);
  out += buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                "stroke=\"black\"/>\n",
                kL, kT, kW - kL - kR, kH - kT - kB);
  out += buf;
  for (double e = ymin; e <= ymax; e += 1.0) {
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">1e%.0f</text>\n", kL - 4,
                  py(e) + 4, e);
    out += buf;
  }
  for (int i = 0; i <= 4; ++i) {
    const double x = xmin + (xmax - xmin) * i / 4.0;
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%g</text>\n",
                  px(x), kH - kB + 16, x);
    out += buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%s</text>\n",
                kL + (kW - kL - kR) / 2, kH - 12, axis.empty() ? "point" : axis.c_str());
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"14\" y=\"%.1f\" transform=\"rotate(-90 14 %.1f)\" "
                "text-anchor=\"middle\">ergodic rate (BPCU)</text>\n",
                kT + (kH - kT - kB) / 2, kT + (kH - kT - kB) / 2);
  out += buf;

  int legend = 0;
  for (const auto& s : series) {
    std::string points;
    for (const auto& r : rows) {
      const auto& v = r.*(s.field);
      if (!v || !(*v > 0.0)) continue;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(r.axis_value), py(std::log10(*v)));
      points += buf;
    }
    if (points.empty()) continue;
    points.pop_back();
    out += "<polyline fill=\"none\" stroke=\"" + std::string(s.colour) +
           "\" stroke-width=\"1.5\" stroke-dasharray=\"" + s.dash + "\" points=\"" + points +
           "\"/>\n";
    const double ly = kT + 14 + 16 * legend++;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" "
                  "stroke-width=\"1.5\" stroke-dasharray=\"%s\"/>"
                  "<text x=\"%.1f\" y=\"%.1f\">%s</text>\n",
                  kW - kR + 10, ly, kW - kR + 34, ly, s.colour, s.dash, kW - kR + 38, ly + 4,
                  s.name);
    out += buf;
  }
  out += "</svg>\n";
  return out;
}

int run(const ScenarioConfig& config, std::ostream& log) {
  const auto started = std::chrono::steady_clock::now();
  for (const auto& d : config.applied_defaults) log << "default: " << d << '\n';
  log << "mode=" << to_string(config.mode) << " points=" << config.axis_values().size()
      << " jobs=" << config.jobs << '\n';

  try {
    std::filesystem::create_directories(config.out_dir);
  } catch (const std::filesystem::filesystem_error& e) {
    log << "error: cannot create output directory: " << e.what() << '\n';
    return kExitIo;
  }

  std::vector<PointResult> rows;
  try {
    rows = evaluate_points(config);
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  const std::vector<std::string> flags = compare_flags(rows);
  bool oracle_ok = true;
  for (const auto& r : rows) oracle_ok = oracle_ok && r.oracle_converged;
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  nlohmann::json manifest;
  manifest["tool"] = "sgfnoma";
  manifest["version"] = SGF_VERSION;
  manifest["compiler"] = __VERSION__;
  manifest["mode"] = std::string(to_string(config.mode));
  manifest["seed"] = config.seed;
  manifest["trials"] = config.trials;
  manifest["jobs"] = config.jobs;
  manifest["formula"] = config.formula;
  manifest["config"] = serialize(config);
  manifest["base_params"] = params_json(config.params);
  manifest["power_convention"] =
      "powers are absolute dBm; rho_*_db = p_*_dbm - noise_dbm is the transmit SNR; sweeping "
      "rho_*_db moves only that user's power";
  manifest["axis"] = config.axis.empty() ? nlohmann::json(nullptr) : nlohmann::json(config.axis);
  nlohmann::json points = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json pt = params_json(r.params);
    if (!config.axis.empty()) pt["axis_value"] = r.axis_value;
    if (r.gb_oracle) {
      pt["gb_oracle_err_est"] = r.gb_oracle_err;
      pt["gf_oracle_err_est"] = r.gf_oracle_err;
      pt["oracle_converged"] = r.oracle_converged;
    }
    points.push_back(pt);
  }
  manifest["points"] = points;
  manifest["compare_flags"] = flags;
  manifest["wall_time_s"] = wall;

  try {
    const std::filesystem::path dir(config.out_dir);
    write_file(dir / "results.csv", results_csv(rows, !config.axis.empty()));
    write_file(dir / "run.json", manifest.dump(2) + "\n");
    if (config.svg) write_file(dir / "figure.svg", figure_svg(rows, config.axis));
  } catch (const IoError& e) {
    log << "error: " << e.what() << '\n';
    return kExitIo;
  }

  for (const auto& f : flags) log << "flag: " << f << '\n';
  if (config.mode == RunMode::kCompare) {
    log << "compare: " << flags.size() << " flagged check(s) over " << rows.size() << " point(s)\n";
  }
  log << "wrote " << config.out_dir << " in " << fmt(wall) << " s\n";
  if (!oracle_ok) {
    log << "warning: oracle missed its tolerance at one or more points; see run.json\n";
    return kExitTolerance;
  }
  if (config.strict && !flags.empty()) return kExitTolerance;
  return kExitOk;
}

}  // namespace sgf
