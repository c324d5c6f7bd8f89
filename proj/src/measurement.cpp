#include "ergodic/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ergodic/errors.hpp"
#include "ergodic/rng.hpp"

namespace ergodic {

const Csco& Scenario::csco(std::string_view id) const { return cscos[csco_index(id)]; }

std::size_t Scenario::csco_index(std::string_view id) const {
  for (std::size_t i = 0; i < cscos.size(); ++i) {
    if (cscos[i].id() == id) return i;
  }
  throw std::invalid_argument("unknown CSCO id '" + std::string(id) + "'");
}

SchedulerSpec Scenario::scheduler_for(std::string_view id) const {
  const auto it = schedulers.find(std::string(id));
  return it == schedulers.end() ? SchedulerSpec{} : it->second;
}

SystemUnderObservation::SystemUnderObservation(std::shared_ptr<const Scenario> scenario)
    : scenario_(std::move(scenario)), state_(scenario_->state) {
  if (scenario_->cscos.empty()) throw std::invalid_argument("system: at least one CSCO is required");
  for (const auto& c : scenario_->cscos) {
    partitions_.push_back(build_partition(born_probabilities(state_, c), 0, scenario_->scheduler_for(c.id())));
  }
}

const WindowPartition& SystemUnderObservation::partition(std::string_view csco_id) const {
  return partitions_[scenario_->csco_index(csco_id)];
}

SystemUnderObservation advance(const SystemUnderObservation& system, double u_target) {
  if (!(u_target >= system.time_)) {
    throw std::invalid_argument("advance: target time " + std::to_string(u_target) + " precedes current time " +
                                std::to_string(system.time_));
  }
  SystemUnderObservation next = system;
  const auto& sc = *next.scenario_;
  while (u_target > next.partitions_.front().end()) {
    const double boundary = next.partitions_.front().end();
    next.state_ = evolve(next.state_, sc.hamiltonian, boundary - next.time_);
    next.time_ = boundary;
    const auto window = static_cast<long>(boundary);
    for (std::size_t i = 0; i < sc.cscos.size(); ++i) {
      const auto& c = sc.cscos[i];
      auto& current = next.partitions_[i];
      if (is_conserved(sc.hamiltonian, c) && current.is_full_window()) {
        current = periodic_extend(current, window);
      } else {
        current = build_partition(born_probabilities(next.state_, c), window, sc.scheduler_for(c.id()));
      }
    }
  }
  next.state_ = evolve(next.state_, sc.hamiltonian, u_target - next.time_);
  next.time_ = u_target;
  return next;
}

std::pair<MeasurementRecord, SystemUnderObservation> measure(const SystemUnderObservation& system,
                                                             std::string_view csco_id, double u) {
  const auto& sc = system.scenario();
  const std::size_t which = sc.csco_index(csco_id);
  SystemUnderObservation next = advance(system, u);
  const Csco& measured = sc.cscos[which];
  const std::size_t k = next.partitions_[which].active_label(u);

  MeasurementRecord record{u,
                           measured.id(),
                           k,
                           measured.label(k),
                           measured.eigenvalues(k),
                           next.state_,
                           QuantumState::basis_column(measured, k)};
  next.state_ = record.post_state;

  const long window = next.partitions_[which].window_index();
  for (std::size_t i = 0; i < sc.cscos.size(); ++i) {
    const auto& c = sc.cscos[i];
    next.partitions_[i] =
        build_remainder_partition(born_probabilities(next.state_, c), window, u, sc.scheduler_for(c.id()));
  }
  next.history_.push_back(record);
  return {std::move(record), std::move(next)};
}

ComplexVector measurement_operator_apply(const ComplexVector& psi, const WindowPartition& partition,
                                         const Csco& csco, double u) {
  if (static_cast<std::size_t>(psi.size()) != csco.dimension() || partition.label_count() != csco.dimension()) {
    throw std::invalid_argument("measurement_operator_apply: dimension mismatch");
  }
  const ComplexVector column = csco.column(partition.active_label(u));
  return column.dot(psi) * column;
}

ComplexVector measurement_operator_apply(const QuantumState& state, const WindowPartition& partition,
                                         const Csco& csco, double u) {
  return measurement_operator_apply(state.amplitudes(), partition, csco, u);
}

namespace {

void validate_sequence(const Scenario& scenario, const std::vector<MeasurementStep>& sequence) {
  if (sequence.empty()) throw std::invalid_argument("sequential_experiment: empty sequence");
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const auto& step = sequence[i];
    scenario.csco_index(step.csco_id);
    if (!(step.from >= 0.0) || !(step.from <= step.to)) {
      throw std::invalid_argument("sequential_experiment: step " + std::to_string(i) + " has an invalid time range");
    }
    if (i == 0) continue;
    const auto& prev = sequence[i - 1];
    const bool fixed = step.from == step.to;
    if (prev.to > step.from || (fixed && prev.to == step.from)) {
      throw std::invalid_argument("sequential_experiment: measurement times must be strictly increasing (step " +
                                  std::to_string(i) + ")");
    }
  }
}

}  // namespace

SequenceDistribution sequential_experiment(std::shared_ptr<const Scenario> scenario,
                                           const std::vector<MeasurementStep>& sequence, std::uint64_t n_runs,
                                           std::uint64_t seed, bool keep_log) {
  validate_sequence(*scenario, sequence);
  if (n_runs < 1) throw std::invalid_argument("sequential_experiment: n_runs must be >= 1");

  SequenceDistribution out;
  for (const auto& step : sequence) out.csco_ids.push_back(step.csco_id);
  const SystemUnderObservation initial(scenario);
  for (std::uint64_t run = 0; run < n_runs; ++run) {
    Rng rng(mix_seed(seed, run));
    SystemUnderObservation system = initial;
    std::vector<std::size_t> outcomes;
    for (const auto& step : sequence) {
      const double u = step.from == step.to ? step.to : rng.uniform_left_open(step.from, step.to);
      auto [record, next] = measure(system, step.csco_id, u);
      outcomes.push_back(record.outcome_label);
      system = std::move(next);
    }
    ++out.counts[outcomes];
    if (keep_log) out.log.push_back(system.history());
  }
  out.runs = n_runs;
  return out;
}

std::map<ObservableOutcome, double> joint_by_observable(const SequenceDistribution& distribution) {
  std::map<ObservableOutcome, double> out;
  for (const auto& [labels, count] : distribution.counts) {
    ObservableOutcome key;
    for (std::size_t i = 0; i < labels.size(); ++i) key.emplace_back(distribution.csco_ids[i], labels[i]);
    std::stable_sort(key.begin(), key.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    out[key] += static_cast<double>(count) / static_cast<double>(distribution.runs);
  }
  return out;
}

double total_variation(const std::map<ObservableOutcome, double>& a, const std::map<ObservableOutcome, double>& b) {
  double sum = 0.0;
  for (const auto& [key, p] : a) {
    const auto it = b.find(key);
    sum += std::abs(p - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [key, q] : b) {
    if (!a.contains(key)) sum += q;
  }
  return 0.5 * sum;
}

DistanceEstimate total_variation(const SequenceDistribution& a, const SequenceDistribution& b) {
  const auto pa = joint_by_observable(a);
  const auto pb = joint_by_observable(b);
  std::map<ObservableOutcome, std::pair<double, double>> cells;
  for (const auto& [key, p] : pa) cells[key].first = p;
  for (const auto& [key, q] : pb) cells[key].second = q;

  // TV = 1/2 sum_i s_i (p_i - q_i) with s_i = sign(p_i - q_i); treat the
  // signs as fixed and propagate the multinomial variances.
  double mean_a = 0.0, second_a = 0.0, mean_b = 0.0, second_b = 0.0;
  for (const auto& [key, pq] : cells) {
    const auto [p, q] = pq;
    const double s = p > q ? 1.0 : (p < q ? -1.0 : 0.0);
    mean_a += s * p;
    second_a += s * s * p;
    mean_b += s * q;
    second_b += s * s * q;
  }
  const double var = (second_a - mean_a * mean_a) / static_cast<double>(a.runs) +
                     (second_b - mean_b * mean_b) / static_cast<double>(b.runs);
  return DistanceEstimate{total_variation(pa, pb), 0.5 * std::sqrt(std::max(0.0, var))};
}

}  // namespace ergodic
