#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tripod/config.hpp"
#include "tripod/csv.hpp"
#include "tripod/dynamics.hpp"
#include "tripod/observables.hpp"

namespace tripod {

inline const std::vector<std::string> kPopulationHeader{"t",     "pop_A", "pop_B", "pop_C",   "pop_D",       "pop_E",
                                                        "pop_F", "pop_G", "pop_H", "leakage", "dark_overlap"};
inline const std::vector<std::string> kPulseHeader{"t", "omega", "g1", "g2"};
inline const std::vector<std::string> kSweepHeader{"kappa_over_g0", "P", "stderr_P", "F_cond", "F_uncond"};
inline const std::vector<std::string> kMetricsHeader{"P",        "stderr_P", "F_uncond", "F_cond",
                                                     "sector_weight", "leakage", "Q"};
inline const std::vector<std::string> kDarkStateHeader{"t",     "theta",  "beta",  "gamma",
                                                       "vartheta", "dark_A", "dark_C", "dark_E"};

/// One output-time row of the populations file: eight named populations,
/// leakage, dark-state overlap (empty when the dark state is undefined).
using PopulationRow = std::vector<Cell>;

struct ScenarioResult {
  ScenarioConfig config;
  Solver solver = Solver::schrodinger;
  std::vector<double> times;
  std::vector<PopulationRow> populations;
  /// Standard errors of the populations rows (MCWF only).
  std::vector<PopulationRow> population_stderr;
  Metrics metrics;
  /// Standard error of P; 0 for deterministic solvers.
  double stderr_p = 0.0;
  std::size_t subspace_dim = 0;
  double max_norm_drift = 0.0;
  double max_trace_drift = 0.0;
  std::vector<std::string> warnings;
  std::size_t total_jumps = 0;
  double wall_seconds = 0.0;
};

/// Runs one scenario in memory. `solver` overrides config.solver.
ScenarioResult simulate(const ScenarioConfig& config, Solver solver);

/// Writes pulses.csv, populations.csv (+ populations_stderr.csv for MCWF),
/// metrics.csv and run_metadata.txt under `dir`.
void write_scenario(const ScenarioResult& result, const std::filesystem::path& dir);

ScenarioResult run_scenario(const ScenarioConfig& config, Solver solver);

struct SweepRow {
  double ratio = 0.0;
  double p = 0.0;
  double stderr_p = 0.0;
  std::optional<double> f_cond;
  double f_uncond = 0.0;
};

struct SweepResult {
  ScenarioConfig config;
  Solver solver = Solver::mcwf;
  std::vector<SweepRow> rows;
  double wall_seconds = 0.0;
};

/// One row per ratio, in input order. Solver must be lindblad or mcwf.
SweepResult simulate_sweep(const ScenarioConfig& config, const SweepSpec& sweep, Solver solver);
void write_sweep(const SweepResult& result, const std::filesystem::path& dir);
SweepResult run_sweep(const ScenarioConfig& config, const SweepSpec& sweep, Solver solver);

/// darkstate.csv: mixing angles and global dark-state coordinates on the
/// output grid. Undefined angles are written as empty fields.
void run_darkstate(const ScenarioConfig& config, const std::filesystem::path& dir);

/// The comment block embedded at the top of every data file.
std::string config_block(const ScenarioConfig& config, std::string_view kind, Solver solver);

}  // namespace tripod
