#pragma once

// Plain-text record formats: comma-separated, one header row, doubles in
// shortest round-trip form (std::to_chars), '\n' line endings.

#include <string>
#include <vector>

#include "ergodic/measurement.hpp"
#include "ergodic/microstate.hpp"
#include "ergodic/partition.hpp"
#include "ergodic/qgrid.hpp"

namespace ergodic {

std::string format_double(double value);

/// "1:0:-1" for the multi-index (1, 0, -1).
std::string format_label(const Label& label);

/// window_index,label,lo,hi sorted by lo.
std::string partition_records(const WindowPartition& partition);

/// window,label,multi_index,lo,hi,eigenvalue_0,... in time order.
std::string trajectory_records(const JumpTrajectory& trajectory, const Csco& csco);

/// window,label,measure,probability: per-window durations next to the Born
/// probabilities they were built from.
std::string window_measure_records(const JumpTrajectory& trajectory);

struct StatsRecord {
  std::string experiment;
  std::string label;
  double estimate = 0.0;
  double standard_error = 0.0;
  double exact = 0.0;
  double deviation = 0.0;
};

/// experiment,label,estimate,stderr,exact,deviation
std::string stats_records(const std::vector<StatsRecord>& records);

/// run_id,step,u,csco_id,outcome_label,multi_index,eigenvalues
/// (eigenvalue tuples joined by ';').
std::string measurement_log_records(const SequenceDistribution& distribution);

/// sequence,count,frequency with sequence written "id=label;id=label".
std::string joint_distribution_records(const SequenceDistribution& distribution);

/// cell_index,q_lo,q_hi,probability
std::string cell_probability_records(const std::vector<CellProbability>& cells);

}  // namespace ergodic
