#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace ergodic::cli {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunOptions {
  std::filesystem::path out_dir;  // empty: the config's `output`
  unsigned threads = 1;
  bool strict_float = false;
};

struct Artifact {
  std::string file;
  std::string content;
};

struct ExperimentResult {
  std::string name;
  std::vector<Artifact> artifacts;
};

/// Runs one experiment block in memory. Throws InvariantViolation on any
/// broken invariant (including renormalization events under strict_float).
ExperimentResult run_experiment(const ScenarioConfig& config, const ExperimentConfig& experiment, bool strict_float);

/// Runs every block, in parallel when threads > 1, and returns results in
/// block order.
std::vector<ExperimentResult> run_all(const ScenarioConfig& config, const RunOptions& options);

/// manifest.json; everything except "generated_at" is a function of the
/// config and options.
std::string manifest(const ScenarioConfig& config, const std::vector<ExperimentResult>& results,
                     const RunOptions& options, const std::string& generated_at);

/// Thrown when artifacts cannot be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Name of the marker left in the output directory when a run fails.
inline constexpr const char* kFailedMarker = "FAILED";

/// Parses, runs and writes. Returns the process exit status: 0 ok, 2 parse
/// or argument error, 3 invariant violation, 4 I/O failure. Diagnostics go to
/// `err`.
int run_scenario(const std::filesystem::path& config_path, const RunOptions& options, std::ostream& err);

/// partition_records for window N of one CSCO, from the initial state.
std::string dump_partition(const ScenarioConfig& config, const std::string& csco_id, long window);

}  // namespace ergodic::cli
