#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tripod/integrator.hpp"
#include "tripod/model.hpp"

namespace tripod {

enum class Solver { schrodinger, lindblad, mcwf };
std::string_view to_string(Solver s);
Solver parse_solver(std::string_view s);

/// Everything needed to reproduce one run. Keys in a config file use the
/// field names below; see `config_keys()`.
struct ScenarioConfig {
  PhysicalParams physics;
  /// When set, kappa = kappa_ratio * g10 and the `kappa` key is ignored.
  std::optional<double> kappa_ratio;
  int n_max = 2;
  TimeGrid grid;
  IntegratorConfig integrator;
  /// Unset means "whatever the subcommand implies".
  std::optional<Solver> solver;
  std::size_t n_trajectories = 2000;
  std::uint64_t master_seed = 1;
  /// Ratios kappa/g10 for sweeps; empty means default_sweep_ratios().
  std::vector<double> sweep_ratios;
  /// Not part of the reproducible block.
  unsigned workers = 0;
  std::string output = "out";

  void validate() const;
  PhysicalParams effective_params() const;
  /// key=value lines, fixed order, shortest round-trip numbers. Excludes
  /// `workers` and `output`, which do not affect results.
  std::string serialize() const;
};

/// 15 log-spaced ratios on [0.01, 1].
std::vector<double> default_sweep_ratios();

struct SweepSpec {
  std::vector<double> ratios;
  std::size_t n_trajectories = 2000;
  void validate() const;
};

SweepSpec sweep_spec(const ScenarioConfig& config);

const std::vector<std::string_view>& config_keys();

/// Applies one key=value pair. Unknown keys and malformed values throw
/// ValidationError.
void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value);

/// Parses a flat key=value file on top of `base`. Blank lines and lines
/// starting with '#' are ignored.
ScenarioConfig parse_config(std::string_view text, ScenarioConfig base = {});
ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base = {});

std::string format_shortest(double v);

}  // namespace tripod
