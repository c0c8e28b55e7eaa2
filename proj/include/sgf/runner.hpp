#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sgf/config.hpp"

namespace sgf {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitTolerance = 3,
  kExitIo = 4,
};

/// One sweep point. Columns a mode does not compute stay empty.
struct PointResult {
  double axis_value = 0.0;
  SystemParams params;
  std::optional<double> gb_analytic;
  std::optional<double> gb_oracle;
  std::optional<double> gb_mc;
  std::optional<double> gb_mc_stderr;
  std::optional<double> gf_analytic;
  std::optional<double> gf_approx;
  std::optional<double> gf_oracle;
  std::optional<double> gf_mc;
  std::optional<double> gf_mc_stderr;
  std::optional<double> admit_prob;
  std::optional<double> sic_prob;
  double gb_oracle_err = 0.0;
  double gf_oracle_err = 0.0;
  bool oracle_converged = true;
};

/// Evaluates every sweep point, up to config.jobs at a time. The result is
/// ordered by axis value and does not depend on the job count.
std::vector<PointResult> evaluate_points(const ScenarioConfig& config);

/// CSV with the fixed column contract, LF line endings, shortest round-trip
/// number formatting. axis_value is empty for a single-point run.
std::string results_csv(const std::vector<PointResult>& rows, bool has_axis);

/// Points where |analytic - oracle| / oracle > 1e-2 or |mc - oracle| > 3 stderr.
std::vector<std::string> compare_flags(const std::vector<PointResult>& rows);

/// Static line plot of every populated rate column against the axis, log y.
std::string figure_svg(const std::vector<PointResult>& rows, const std::string& axis);

/// Runs the scenario and writes results.csv, run.json and (optionally)
/// figure.svg into config.out_dir. Progress and warnings go to `log`.
/// Returns an ExitCode.
int run(const ScenarioConfig& config, std::ostream& log);

}  // namespace sgf
