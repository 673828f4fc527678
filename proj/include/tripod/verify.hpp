#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tripod/config.hpp"

namespace tripod {

enum class CheckStatus { pass, fail, skip, info };
std::string_view to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  /// True when no check failed; skipped and informational entries do not count.
  bool passed() const;
  const CheckResult& find(std::string_view name) const;
};

/// Invariant suite: Hermiticity, dark-state nullity, matrix-element table,
/// charge conservation, norm and trace drift, step halving, MCWF against
/// Lindblad, charge bookkeeping across jumps, cutoff convergence.
VerifyReport run_verify(const ScenarioConfig& config);

std::string to_json(const VerifyReport& report, const ScenarioConfig& config);
void write_verify(const VerifyReport& report, const ScenarioConfig& config, const std::filesystem::path& dir);

}  // namespace tripod
