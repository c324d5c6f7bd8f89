#pragma once

// Scenario configuration: a small line-oriented grammar.
//
//   file      := { statement }
//   statement := key '=' value
//              | kind name '{' { key '=' value } '}'
//   value     := number | complex | string | bool | '[' [ value { ',' value } [','] ] ']'
//
// Blocks are `csco`, `scheduler` and `experiment`; they do not nest. One
// statement per line, except that lists may span lines. Complex literals are
// written without spaces: 0.6+0.8i, -2i, 1e-3-4e-2i. '#' starts a comment.
// Unknown keys, duplicate keys and out-of-place values are errors, reported
// as file:line:column.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ergodic/measurement.hpp"
#include "ergodic/qgrid.hpp"

namespace ergodic::cli {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line) : std::runtime_error(message), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

enum class ExperimentType { trajectory, born_sampling, offset_average, sub_tau, sequential_measurement, qgrid };

std::string_view to_string(ExperimentType type);

struct QgridSetup {
  PlanckLattice lattice;
  long center_cell = 0;
  long window = 0;
  SchedulerSpec scheduler;
  std::optional<std::filesystem::path> wavefunction_file;  // resolved against the config directory
  double gaussian_center = 0.0;
  double gaussian_width = 1.0;
  double grid_lo = 0.0;
  double grid_hi = 0.0;
  long points_per_cell = 64;
};

struct ExperimentConfig {
  std::string name;
  ExperimentType type = ExperimentType::trajectory;
  int line = 0;
  std::uint64_t seed = 0;

  std::string csco;
  long windows = 1;
  long window = 0;
  std::uint64_t samples = 100000;
  std::vector<double> alphas;
  std::size_t member = 0;
  std::vector<double> deltas;
  std::uint64_t pairs = 100000;

  std::vector<MeasurementStep> steps;
  std::vector<MeasurementStep> compare;
  std::uint64_t runs = 10000;
  bool log = false;

  QgridSetup qgrid;
};

struct ScenarioConfig {
  std::string source;  // file name used in diagnostics and the manifest
  std::uint64_t hash = 0;
  std::size_t dimension = 0;
  std::uint64_t seed = 0;
  long window_cap = 10000;
  std::string output = "out";
  std::shared_ptr<const Scenario> scenario;
  std::vector<ExperimentConfig> experiments;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes) noexcept;

/// base_dir resolves relative file references (qgrid wavefunctions).
ScenarioConfig parse_config(std::string_view text, const std::string& source,
                            const std::filesystem::path& base_dir = {});

/// Reads and parses; an unreadable file is a std::runtime_error.
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace ergodic::cli
