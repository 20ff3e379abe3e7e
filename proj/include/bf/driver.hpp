#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace bf {

/// One verification run: which models to build, which checks to perform,
/// and what to export.
struct RunConfig {
  int threads = 2;
  std::string check = "all";  // invariants | bisim | branching | conesfoci | all
  std::optional<std::string> mutation;
  std::string hide_profile = "standard";  // standard | none | comma-separated names
  std::size_t state_limit = 5'000'000;
  std::optional<std::string> export_aut_path;
  std::uint64_t seed = 0;
};

/// Builds the requested models, runs the selected checks, and prints one
/// report line per check (verdict, state counts, elapsed time). Returns 0
/// iff every selected check passes, 1 on a failed check, 2 on a usage
/// error.
int run(const RunConfig& config, std::ostream& out);

}  // namespace bf
