#pragma once

// Seeded property suites behind `spinsq verify`.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spinsq::cli {

struct PropertyOutcome {
  std::string name;
  long checked = 0;
  long failed = 0;
  /// Extreme observed value and what it measures ("max |delta|", "min xi2_tilde", ...).
  double worst = 0.0;
  std::string worst_label;
  bool informational = false;
  /// State files (one per line) of the first failing instance.
  std::vector<std::string> replay;
};

struct SuiteOutcome {
  std::string suite;
  std::uint64_t seed = 1;
  std::vector<PropertyOutcome> properties;
  bool passed() const;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  /// Overrides every suite's sample count when set.
  std::optional<int> samples;
  /// Overrides every pass threshold when set.
  std::optional<double> tolerance;
};

const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite.
SuiteOutcome run_suite(std::string_view suite, const VerifyOptions& options);

std::string to_text(const SuiteOutcome& outcome);
std::string to_json(const SuiteOutcome& outcome);

}  // namespace spinsq::cli
