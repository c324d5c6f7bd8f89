#include "ergodic/microstate.hpp"

#include <algorithm>
#include <stdexcept>

#include "ergodic/errors.hpp"

namespace ergodic {

namespace {

void require_matching(const WindowPartition& partition, const Csco& csco) {
  if (partition.label_count() != csco.dimension()) {
    throw std::invalid_argument("partition has " + std::to_string(partition.label_count()) + " labels but CSCO '" +
                                csco.id() + "' has dimension " + std::to_string(csco.dimension()));
  }
}

}  // namespace

const JumpEvent& JumpTrajectory::event_at(double u) const {
  if (!(u > 0.0 && u <= end())) {
    throw std::out_of_range("trajectory: time " + std::to_string(u) + " outside (0, " + std::to_string(end()) + "]");
  }
  const auto it = std::lower_bound(events.begin(), events.end(), u,
                                   [](const JumpEvent& e, double t) { return e.interval.hi < t; });
  if (it == events.end() || !(it->interval.lo < u)) {
    throw InvariantViolation("tiling", "no event contains u = " + std::to_string(u));
  }
  return *it;
}

MicrostateSnapshot microstate_at(const WindowPartition& partition, const Csco& csco, double u) {
  require_matching(partition, csco);
  const std::size_t k = partition.active_label(u);
  return MicrostateSnapshot{csco.id(), u, k, csco.label(k), csco.eigenvalues(k), csco.column(k)};
}

double value_function(const WindowPartition& partition, const Csco& csco, std::size_t member, double u) {
  require_matching(partition, csco);
  if (member >= csco.member_count()) throw std::out_of_range("value_function: member index out of range");
  return csco.eigenvalue(partition.active_label(u), member);
}

ComplexVector apply_value_operator(const WindowPartition& partition, const Csco& csco, std::size_t label, double u,
                                   std::size_t member) {
  require_matching(partition, csco);
  if (label >= csco.dimension()) throw std::out_of_range("apply_value_operator: invalid label");
  if (member >= csco.member_count()) throw std::out_of_range("apply_value_operator: member index out of range");
  const int s = step_function(partition, label, u);
  if (s == 0) return ComplexVector::Zero(static_cast<Eigen::Index>(csco.dimension()));
  return csco.eigenvalue(label, member) * csco.column(label);
}

WindowPartition window_partition(const QuantumState& state0, const Hamiltonian& hamiltonian, const Csco& csco,
                                 const SchedulerSpec& scheduler, long window_index) {
  if (window_index < 0) throw std::invalid_argument("window_partition: window index must be >= 0");
  if (is_conserved(hamiltonian, csco)) {
    const auto base = build_partition(born_probabilities(state0, csco), 0, scheduler);
    return window_index == 0 ? base : periodic_extend(base, window_index);
  }
  const auto state = evolve(state0, hamiltonian, static_cast<double>(window_index));
  return build_partition(born_probabilities(state, csco), window_index, scheduler);
}

JumpTrajectory trajectory(const QuantumState& state0, const Hamiltonian& hamiltonian, const Csco& csco,
                          const SchedulerSpec& scheduler, long windows, long window_cap) {
  if (windows < 1) throw std::invalid_argument("trajectory: windows must be >= 1");
  if (windows > window_cap) {
    throw std::invalid_argument("trajectory: " + std::to_string(windows) + " windows exceeds cap " +
                                std::to_string(window_cap));
  }
  if (state0.dimension() != csco.dimension() || hamiltonian.dimension() != csco.dimension()) {
    throw std::invalid_argument("trajectory: dimension mismatch");
  }

  JumpTrajectory out;
  out.csco_id = csco.id();
  out.windows_covered = windows;
  out.partitions.reserve(static_cast<std::size_t>(windows));

  const bool conserved = is_conserved(hamiltonian, csco);
  for (long n = 0; n < windows; ++n) {
    if (conserved) {
      out.partitions.push_back(n == 0 ? build_partition(born_probabilities(state0, csco), 0, scheduler)
                                      : periodic_extend(out.partitions.front(), n));
    } else {
      // Evolve from the initial state each time so no error accumulates.
      const auto state = evolve(state0, hamiltonian, static_cast<double>(n));
      out.renormalization_events += state.renormalization_events();
      out.partitions.push_back(build_partition(born_probabilities(state, csco), n, scheduler));
    }
    for (const auto& piece : out.partitions.back().pieces()) {
      out.events.push_back(JumpEvent{n, piece.interval, piece.label, csco.eigenvalues(piece.label)});
    }
  }

  double cursor = 0.0;
  for (const auto& e : out.events) {
    if (e.interval.lo != cursor) throw InvariantViolation("tiling", "gap or overlap at u = " + std::to_string(cursor));
    cursor = e.interval.hi;
  }
  if (cursor != out.end()) throw InvariantViolation("tiling", "events stop before the last window ends");
  return out;
}

}  // namespace ergodic
