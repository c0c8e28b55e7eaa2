#include "sgf/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "sgf/errors.hpp"
#include "sgf/montecarlo.hpp"

namespace sgf {

namespace {

struct Entry {
  std::string value;
  std::string origin;  // "line N" or "command line"
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void fail(const Entry& e, std::string_view key, const std::string& what) {
  throw ConfigError(e.origin + ": key '" + std::string(key) + "': " + what + " (got '" + e.value +
                    "')");
}

double to_double(const Entry& e, std::string_view key) {
  double v = 0.0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) fail(e, key, "malformed number");
  if (std::isnan(v)) fail(e, key, "NaN is not allowed");
  return v;
}

std::uint64_t to_uint(const Entry& e, std::string_view key) {
  std::uint64_t v = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec == std::errc() && ptr == last) return v;
  // Accept integral floating forms such as 1e6.
  const double d = to_double(e, key);
  if (d < 0.0 || d != std::floor(d) || d > 9007199254740992.0) {
    fail(e, key, "expected a non-negative integer");
  }
  return static_cast<std::uint64_t>(d);
}

bool to_bool(const Entry& e, std::string_view key) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  fail(e, key, "expected true or false");
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

RunMode to_mode(const Entry& e) {
  if (e.value == "analytic") return RunMode::kAnalytic;
  if (e.value == "oracle") return RunMode::kOracle;
  if (e.value == "montecarlo") return RunMode::kMonteCarlo;
  if (e.value == "compare") return RunMode::kCompare;
  fail(e, "mode", "expected analytic, oracle, montecarlo or compare");
}

}  // namespace

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::kAnalytic: return "analytic";
    case RunMode::kOracle: return "oracle";
    case RunMode::kMonteCarlo: return "montecarlo";
    case RunMode::kCompare: return "compare";
  }
  return "analytic";
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "mode",        "radius_m",       "alpha",          "p_gb_dbm",       "p_gf_dbm",
      "noise_dbm",   "fading_mean_gb", "fading_mean_gf", "sic_threshold",  "quad_n",
      "quad_m",      "trials",         "seed",           "axis",           "from",
      "to",          "step",           "out",            "jobs",           "formula",
      "svg",         "strict",         "oracle_rel_tol", "oracle_abs_tol",
  };
  return keys;
}

std::vector<double> ScenarioConfig::axis_values() const {
  if (axis.empty()) return {std::nan("")};
  std::vector<double> values;
  const double span = (to - from) / step;
  const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) values.push_back(from + static_cast<double>(i) * step);
  return values;
}

FormulaVariant ScenarioConfig::variant() const {
  return formula == "literal" ? FormulaVariant::literal() : FormulaVariant::corrected();
}

bool ScenarioConfig::operator==(const ScenarioConfig& o) const {
  const SystemParams& a = params;
  const SystemParams& b = o.params;
  return mode == o.mode && a.radius_m == b.radius_m && a.pathloss_exp == b.pathloss_exp &&
         a.p_gb_dbm == b.p_gb_dbm && a.p_gf_dbm == b.p_gf_dbm && a.noise_dbm == b.noise_dbm &&
         a.fading_mean_gb == b.fading_mean_gb && a.fading_mean_gf == b.fading_mean_gf &&
         a.sic_threshold == b.sic_threshold && quad.n_outer == o.quad.n_outer &&
         quad.n_inner == o.quad.n_inner && oracle.rel_tol == o.oracle.rel_tol &&
         oracle.abs_tol == o.oracle.abs_tol && trials == o.trials && seed == o.seed &&
         axis == o.axis && from == o.from && to == o.to && step == o.step &&
         out_dir == o.out_dir && jobs == o.jobs && formula == o.formula && svg == o.svg &&
         strict == o.strict;
}

ScenarioConfig parse_config(std::string_view text, const Overrides& overrides) {
  std::map<std::string, Entry> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const std::string origin = "line " + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(origin + ": expected key=value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(origin + ": empty key");
    if (entries.count(key)) {
      throw ConfigError(origin + ": key '" + key + "' repeats " + entries[key].origin);
    }
    entries[key] = {value, origin};
  }
  for (const auto& [key, value] : overrides) entries[key] = {value, "command line"};

  for (const auto& [key, e] : entries) {
    bool known = key == "rho_gb_db" || key == "rho_gf_db";
    for (const auto& k : config_keys()) known = known || k == key;
    if (!known) throw ConfigError(e.origin + ": unknown key '" + key + "'");
  }
  if (!entries.count("mode")) throw ConfigError("missing required key 'mode'");

  ScenarioConfig cfg;
  auto take = [&](const std::string& key, auto&& apply, const std::string& default_text) {
    const auto it = entries.find(key);
    if (it == entries.end()) {
      cfg.applied_defaults.push_back(key + "=" + default_text);
      return;
    }
    apply(it->second);
  };
  auto positive = [&](const std::string& key, double& field) {
    take(key, [&](const Entry& e) {
      field = to_double(e, key);
      if (!(field > 0.0) || std::isinf(field)) fail(e, key, "must be a finite value > 0");
    }, fmt(field));
  };
  auto finite = [&](const std::string& key, double& field) {
    take(key, [&](const Entry& e) {
      field = to_double(e, key);
      if (!std::isfinite(field)) fail(e, key, "must be finite");
    }, fmt(field));
  };

  take("mode", [&](const Entry& e) { cfg.mode = to_mode(e); }, "");
  positive("radius_m", cfg.params.radius_m);
  positive("alpha", cfg.params.pathloss_exp);
  finite("noise_dbm", cfg.params.noise_dbm);
  positive("fading_mean_gb", cfg.params.fading_mean_gb);
  positive("fading_mean_gf", cfg.params.fading_mean_gf);

  // Powers: absolute dBm or transmit SNR relative to the noise floor.
  auto power = [&](const std::string& dbm_key, const std::string& rho_key, double& field) {
    const bool has_dbm = entries.count(dbm_key) > 0;
    const auto rho = entries.find(rho_key);
    if (rho != entries.end()) {
      if (has_dbm) {
        throw ConfigError(rho->second.origin + ": key '" + rho_key + "' conflicts with '" +
                          dbm_key + "'; give only one");
      }
      const double v = to_double(rho->second, rho_key);
      if (!std::isfinite(v)) fail(rho->second, rho_key, "must be finite");
      field = cfg.params.noise_dbm + v;
      return;
    }
    finite(dbm_key, field);
  };
  power("p_gb_dbm", "rho_gb_db", cfg.params.p_gb_dbm);
  power("p_gf_dbm", "rho_gf_db", cfg.params.p_gf_dbm);

  take("sic_threshold", [&](const Entry& e) {
    cfg.params.sic_threshold = to_double(e, "sic_threshold");
    if (!(cfg.params.sic_threshold >= 0.0)) fail(e, "sic_threshold", "must be >= 0");
  }, fmt(cfg.params.sic_threshold));

  auto order = [&](const std::string& key, int& field) {
    take(key, [&](const Entry& e) {
      const std::uint64_t v = to_uint(e, key);
      if (v < 1 || v > 100000) fail(e, key, "must lie in [1, 100000]");
      field = static_cast<int>(v);
    }, std::to_string(field));
  };
  order("quad_n", cfg.quad.n_outer);
  order("quad_m", cfg.quad.n_inner);

  take("trials", [&](const Entry& e) {
    cfg.trials = to_uint(e, "trials");
    if (cfg.trials < 1) fail(e, "trials", "must be >= 1");
  }, std::to_string(cfg.trials));
  take("seed", [&](const Entry& e) { cfg.seed = to_uint(e, "seed"); }, std::to_string(cfg.seed));

  take("axis", [&](const Entry& e) {
    cfg.axis = e.value == "none" ? "" : e.value;
    if (cfg.axis.empty()) return;
    bool ok = false;
    for (const auto& n : axis_names()) ok = ok || n == cfg.axis;
    if (!ok) {
      std::string valid;
      for (const auto& n : axis_names()) valid += " " + n;
      fail(e, "axis", "unknown axis; valid axes: none" + valid);
    }
  }, "none");
  finite("from", cfg.from);
  finite("to", cfg.to);
  take("step", [&](const Entry& e) {
    cfg.step = to_double(e, "step");
    if (!(cfg.step > 0.0) || std::isinf(cfg.step)) fail(e, "step", "must be a finite value > 0");
  }, fmt(cfg.step));
  if (!cfg.axis.empty() && cfg.from > cfg.to) {
    const auto it = entries.find("to");
    throw ConfigError((it != entries.end() ? it->second.origin : std::string("defaults")) +
                      ": key 'to': sweep end " + fmt(cfg.to) + " is below start " + fmt(cfg.from));
  }
  if (!cfg.axis.empty() && (cfg.to - cfg.from) / cfg.step > 1e6) {
    throw ConfigError("key 'step': sweep has more than 1e6 points");
  }

  take("out", [&](const Entry& e) {
    if (e.value.empty()) fail(e, "out", "must not be empty");
    cfg.out_dir = e.value;
  }, cfg.out_dir);
  take("jobs", [&](const Entry& e) {
    const std::uint64_t v = to_uint(e, "jobs");
    if (v < 1 || v > 1024) fail(e, "jobs", "must lie in [1, 1024]");
    cfg.jobs = static_cast<unsigned>(v);
  }, std::to_string(cfg.jobs));
  take("formula", [&](const Entry& e) {
    if (e.value != "corrected" && e.value != "literal") {
      fail(e, "formula", "expected corrected or literal");
    }
    cfg.formula = e.value;
  }, cfg.formula);
  take("svg", [&](const Entry& e) { cfg.svg = to_bool(e, "svg"); }, cfg.svg ? "true" : "false");
  take("strict", [&](const Entry& e) { cfg.strict = to_bool(e, "strict"); },
       cfg.strict ? "true" : "false");
  take("oracle_rel_tol", [&](const Entry& e) {
    cfg.oracle.rel_tol = to_double(e, "oracle_rel_tol");
    if (!(cfg.oracle.rel_tol >= 1e-10 && cfg.oracle.rel_tol < 1.0)) {
      fail(e, "oracle_rel_tol", "must lie in [1e-10, 1)");
    }
  }, fmt(cfg.oracle.rel_tol));
  positive("oracle_abs_tol", cfg.oracle.abs_tol);

  try {
    cfg.params.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("scenario: ") + ex.what());
  }
  return cfg;
}

std::string serialize(const ScenarioConfig& c) {
  std::ostringstream out;
  const SystemParams& p = c.params;
  out << "mode=" << to_string(c.mode) << '\n'
      << "radius_m=" << fmt(p.radius_m) << '\n'
      << "alpha=" << fmt(p.pathloss_exp) << '\n'
      << "p_gb_dbm=" << fmt(p.p_gb_dbm) << '\n'
      << "p_gf_dbm=" << fmt(p.p_gf_dbm) << '\n'
      << "noise_dbm=" << fmt(p.noise_dbm) << '\n'
      << "fading_mean_gb=" << fmt(p.fading_mean_gb) << '\n'
      << "fading_mean_gf=" << fmt(p.fading_mean_gf) << '\n'
      << "sic_threshold=" << fmt(p.sic_threshold) << '\n'
      << "quad_n=" << c.quad.n_outer << '\n'
      << "quad_m=" << c.quad.n_inner << '\n'
      << "trials=" << c.trials << '\n'
      << "seed=" << c.seed << '\n'
      << "axis=" << (c.axis.empty() ? "none" : c.axis) << '\n'
      << "from=" << fmt(c.from) << '\n'
      << "to=" << fmt(c.to) << '\n'
      << "step=" << fmt(c.step) << '\n'
      << "out=" << c.out_dir << '\n'
      << "jobs=" << c.jobs << '\n'
      << "formula=" << c.formula << '\n'
      << "svg=" << (c.svg ? "true" : "false") << '\n'
      << "strict=" << (c.strict ? "true" : "false") << '\n'
      << "oracle_rel_tol=" << fmt(c.oracle.rel_tol) << '\n'
      << "oracle_abs_tol=" << fmt(c.oracle.abs_tol) << '\n';
  return out.str();
}

}  // namespace sgf
