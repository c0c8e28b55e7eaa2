#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sgf/analytic.hpp"
#include "sgf/model.hpp"
#include "sgf/oracle.hpp"
#include "sgf/specfun.hpp"

namespace sgf {

enum class RunMode { kAnalytic, kOracle, kMonteCarlo, kCompare };

std::string_view to_string(RunMode mode);

/// Everything one invocation of the runner needs.
struct ScenarioConfig {
  RunMode mode = RunMode::kAnalytic;
  SystemParams params;
  QuadratureSpec quad;
  IntegrationConfig oracle;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  /// Empty for a single-point run.
  std::string axis;
  double from = 0.0;
  double to = 0.0;
  double step = 1.0;
  std::string out_dir = "out";
  unsigned jobs = 1;
  /// "corrected" or "literal"; see FormulaVariant.
  std::string formula = "corrected";
  bool svg = true;
  /// Exit with status 3 when the compare report flags any point.
  bool strict = false;

  /// One "key=value" line per applied default, in key order. Not part of the
  /// scenario itself and ignored by operator==.
  std::vector<std::string> applied_defaults;

  /// Sweep values from, from + step, ... up to `to` (inclusive, with a
  /// 1e-9 step tolerance). A single NaN entry when no axis is set.
  std::vector<double> axis_values() const;

  FormulaVariant variant() const;

  bool operator==(const ScenarioConfig& other) const;
};

using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Parses a key=value document. Blank lines and '#' comments are ignored;
/// unknown or repeated keys, malformed numbers, out-of-range values and a
/// missing `mode` raise ConfigError naming the key and line. Overrides
/// (e.g. from command-line flags) replace file values.
///
/// `rho_gb_db` / `rho_gf_db` may be given instead of `p_gb_dbm` / `p_gf_dbm`;
/// they set the power to noise_dbm + rho. Giving both forms is an error.
ScenarioConfig parse_config(std::string_view text, const Overrides& overrides = {});

/// Writes every key explicitly; parse_config(serialize(c)) == c.
std::string serialize(const ScenarioConfig& config);

/// Known keys, in serialization order.
const std::vector<std::string>& config_keys();

}  // namespace sgf
