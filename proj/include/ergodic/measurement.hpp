#pragma once

// Measurement protocol. The outcome of measuring CSCO j at time u is the
// label its microstate occupies at u; the state is then reset to that basis
// vector and the partitions of every CSCO are rebuilt from the new state.
//
// A collapse at u inside window N leaves the remainder (u, N+1]. That
// remainder is partitioned like a whole window scaled to its length, so each
// label still gets p_k of the remaining time. At a window boundary the next
// full window is built directly.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ergodic/hilbert.hpp"
#include "ergodic/partition.hpp"

namespace ergodic {

/// Everything needed to run the protocol; shared read-only between runs.
struct Scenario {
  QuantumState state;
  Hamiltonian hamiltonian;
  std::vector<Csco> cscos;
  std::map<std::string, SchedulerSpec> schedulers;  // ids not listed use contiguous

  const Csco& csco(std::string_view id) const;
  std::size_t csco_index(std::string_view id) const;
  SchedulerSpec scheduler_for(std::string_view id) const;
};

struct MeasurementRecord {
  double time = 0.0;
  std::string csco_id;
  std::size_t outcome_label = 0;
  Label outcome_multi_index;
  std::vector<double> outcome_eigenvalues;
  QuantumState pre_state;
  QuantumState post_state;
};

/// Snapshot of the observed system at one instant: current state, the
/// current partition of every CSCO, and the measurement history. Operations
/// return new snapshots.
class SystemUnderObservation {
 public:
  /// Time 0, window-0 partitions built from the scenario's initial state.
  explicit SystemUnderObservation(std::shared_ptr<const Scenario> scenario);

  const Scenario& scenario() const noexcept { return *scenario_; }
  const QuantumState& state() const noexcept { return state_; }
  double time() const noexcept { return time_; }
  const WindowPartition& partition(std::string_view csco_id) const;
  const std::vector<WindowPartition>& partitions() const noexcept { return partitions_; }
  const std::vector<MeasurementRecord>& history() const noexcept { return history_; }

 private:
  std::shared_ptr<const Scenario> scenario_;
  QuantumState state_;
  double time_ = 0.0;
  std::vector<WindowPartition> partitions_;  // same order as scenario().cscos
  std::vector<MeasurementRecord> history_;

  friend SystemUnderObservation advance(const SystemUnderObservation&, double);
  friend std::pair<MeasurementRecord, SystemUnderObservation> measure(const SystemUnderObservation&,
                                                                      std::string_view, double);
};

/// Evolves to u_target, rebuilding all partitions at every window boundary
/// crossed. A CSCO whose probabilities H conserves keeps its layout.
SystemUnderObservation advance(const SystemUnderObservation& system, double u_target);

std::pair<MeasurementRecord, SystemUnderObservation> measure(const SystemUnderObservation& system,
                                                             std::string_view csco_id, double u);

/// M_hat(u)|psi> = <O_k|psi> |O_k> for the label k active at u. Not
/// normalized.
ComplexVector measurement_operator_apply(const ComplexVector& psi, const WindowPartition& partition,
                                         const Csco& csco, double u);
ComplexVector measurement_operator_apply(const QuantumState& state, const WindowPartition& partition,
                                         const Csco& csco, double u);

/// One measurement in a sequence; the time is drawn uniformly from
/// (from, to], or is exactly `to` when from == to.
struct MeasurementStep {
  std::string csco_id;
  double from = 0.0;
  double to = 1.0;
};

struct SequenceDistribution {
  std::vector<std::string> csco_ids;                         // per step
  std::map<std::vector<std::size_t>, std::uint64_t> counts;  // outcome labels per step
  std::uint64_t runs = 0;
  std::vector<std::vector<MeasurementRecord>> log;           // filled when requested
};

/// Runs the protocol n_runs times from the scenario's initial state. Run r
/// draws its measurement times from Rng(mix_seed(seed, r)).
SequenceDistribution sequential_experiment(std::shared_ptr<const Scenario> scenario,
                                           const std::vector<MeasurementStep>& sequence, std::uint64_t n_runs,
                                           std::uint64_t seed, bool keep_log = false);

/// Outcomes keyed by observable: (csco id, label) pairs sorted by id, so
/// sequences measuring the same CSCOs in different orders are comparable.
using ObservableOutcome = std::vector<std::pair<std::string, std::size_t>>;
std::map<ObservableOutcome, double> joint_by_observable(const SequenceDistribution& distribution);

struct DistanceEstimate {
  double distance = 0.0;
  double standard_error = 0.0;  // delta method, sign pattern held fixed
};

DistanceEstimate total_variation(const SequenceDistribution& a, const SequenceDistribution& b);
double total_variation(const std::map<ObservableOutcome, double>& a, const std::map<ObservableOutcome, double>& b);

}  // namespace ergodic
