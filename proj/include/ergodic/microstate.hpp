#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ergodic/hilbert.hpp"
#include "ergodic/partition.hpp"

namespace ergodic {

/// |M(u)>: the basis vector of the label active at time u.
struct MicrostateSnapshot {
  std::string csco_id;
  double time = 0.0;
  std::size_t label = 0;
  Label multi_index;
  std::vector<double> eigenvalues;
  ComplexVector basis_vector;
};

struct JumpEvent {
  long window = 0;
  SubInterval interval;
  std::size_t label = 0;
  std::vector<double> eigenvalues;
};

/// Piecewise-constant history of one CSCO over windows (0, W].
struct JumpTrajectory {
  std::string csco_id;
  long windows_covered = 0;
  std::vector<JumpEvent> events;             // time-ordered, sharing endpoints
  std::vector<WindowPartition> partitions;   // one per window
  int renormalization_events = 0;

  double end() const noexcept { return static_cast<double>(windows_covered); }

  /// Event whose interval contains u, u in (0, W].
  const JumpEvent& event_at(double u) const;
};

inline constexpr long kDefaultWindowCap = 10000;

MicrostateSnapshot microstate_at(const WindowPartition& partition, const Csco& csco, double u);

/// O(u) = sum_k S_k(u) a_k for one member observable.
double value_function(const WindowPartition& partition, const Csco& csco, std::size_t member, double u);

/// O_hat(u)|O_label> = S_label(u) a_label |O_label>; the zero vector when the
/// label is inactive at u.
ComplexVector apply_value_operator(const WindowPartition& partition, const Csco& csco, std::size_t label,
                                   double u, std::size_t member = 0);

/// Partition of window N for `csco`, built from Psi(N) = U(N) state0. When H
/// conserves every Born probability of the CSCO, window 0's layout is reused
/// (shifted) for every N.
WindowPartition window_partition(const QuantumState& state0, const Hamiltonian& hamiltonian, const Csco& csco,
                                 const SchedulerSpec& scheduler, long window_index);

JumpTrajectory trajectory(const QuantumState& state0, const Hamiltonian& hamiltonian, const Csco& csco,
                          const SchedulerSpec& scheduler, long windows, long window_cap = kDefaultWindowCap);

}  // namespace ergodic
