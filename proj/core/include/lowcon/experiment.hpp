#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lowcon/grid.hpp"
#include "lowcon/solver.hpp"

namespace lowcon {

enum class ExperimentKind { solve, dilation_sweep, network_table, diagnostics };

/// Parsed experiment description. Field names match the config-file keys;
/// see presets for the full key set.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::solve;

  int nx = 30, ny = 30;
  double a = 1.0, b = 4.0;  // phase coefficients (quadratic costs)
  double k_area = 0.06;
  double lambda = 0.02;
  Vec2 x0{0.3, 0.3}, x1{0.7, 0.7};
  SolverConfig solver;
  std::string out = "out";

  // dilation_sweep
  int raster_n = 512;
  int seeds = 100;
  std::vector<double> radii{0.02, 0.05, 0.1};

  // network_table
  double net_alpha = 1.0, net_p = 2.0, net_k = 1.0;
  double net_sigma_max = 3.0;
  int net_samples = 61;

  // diagnostics
  double level = 0.5;
  double k_perimeter = 0.06;
};

/// Parses the key=value config text; throws ConfigError naming the offending
/// key on schema violations.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

std::vector<std::string> preset_names();
/// Throws ConfigError for unknown names.
std::string preset_text(const std::string& name);

/// Executes the experiment, writing artifacts into out_dir. Returns 0 on
/// success, 3 when a solve finished without converging (artifacts are still
/// written).
int run_experiment(const ExperimentConfig& cfg,
                   const std::filesystem::path& out_dir);

struct CompareResult {
  std::string metric;
  double value_a = 0.0;
  double value_b = 0.0;
  double delta = 0.0;  // value_b - value_a
};

/// Compares two report.json files on one metric: mean_theta, probe_mass
/// (source-to-midpoint probe ratio), objective, or gap. Throws
/// IncompatibleReports when grids or phase coefficients differ.
CompareResult compare_reports(const std::filesystem::path& report_a,
                              const std::filesystem::path& report_b,
                              const std::string& metric);

}  // namespace lowcon
