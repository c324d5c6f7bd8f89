#include "ergodic/ergodic_stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ergodic/rng.hpp"

namespace ergodic {

EmpiricalDistribution make_distribution(std::vector<std::uint64_t> counts) {
  EmpiricalDistribution out;
  out.counts = std::move(counts);
  for (auto c : out.counts) out.total += c;
  out.estimates.resize(out.counts.size(), 0.0);
  out.standard_errors.resize(out.counts.size(), 0.0);
  if (out.total == 0) return out;
  const auto n = static_cast<double>(out.total);
  for (std::size_t k = 0; k < out.counts.size(); ++k) {
    const double p = static_cast<double>(out.counts[k]) / n;
    out.estimates[k] = p;
    out.standard_errors[k] = std::sqrt(p * (1.0 - p) / n);
  }
  return out;
}

double window_average_step(const WindowPartition& partition, std::size_t label) {
  return partition.measure(label) / partition.span();
}

double window_average_value(const WindowPartition& partition, const Csco& csco, std::size_t member) {
  if (partition.label_count() != csco.dimension()) {
    throw std::invalid_argument("window_average_value: partition does not belong to CSCO '" + csco.id() + "'");
  }
  if (member >= csco.member_count()) throw std::out_of_range("window_average_value: member index out of range");
  double sum = 0.0;
  for (std::size_t k = 0; k < partition.label_count(); ++k) sum += partition.measure(k) * csco.eigenvalue(k, member);
  return sum / partition.span();
}

EmpiricalDistribution sample_born(const JumpTrajectory& trajectory, std::uint64_t n_samples, std::uint64_t seed,
                                  long window) {
  if (trajectory.events.empty() || trajectory.partitions.empty()) {
    throw std::invalid_argument("sample_born: empty trajectory");
  }
  if (n_samples < 1) throw std::invalid_argument("sample_born: n_samples must be >= 1");
  if (window < 0 || window >= trajectory.windows_covered) throw std::out_of_range("sample_born: window out of range");

  const auto& partition = trajectory.partitions[static_cast<std::size_t>(window)];
  std::vector<std::uint64_t> counts(partition.label_count(), 0);
  Rng rng(seed);
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    ++counts[partition.active_label(rng.uniform_left_open(partition.start(), partition.end()))];
  }
  return make_distribution(std::move(counts));
}

double offset_window_average(const JumpTrajectory& trajectory, double alpha, const Csco& csco, std::size_t member) {
  if (member >= csco.member_count()) throw std::out_of_range("offset_window_average: member index out of range");
  if (!(alpha >= 0.0) || !(alpha + 1.0 <= trajectory.end())) {
    throw std::out_of_range("offset_window_average: (alpha, alpha + 1] outside the trajectory");
  }
  const double lo = alpha;
  const double hi = alpha + 1.0;
  double sum = 0.0;
  for (const auto& e : trajectory.events) {
    if (e.interval.hi <= lo) continue;
    if (e.interval.lo >= hi) break;
    const double overlap = std::min(e.interval.hi, hi) - std::max(e.interval.lo, lo);
    if (overlap > 0.0) sum += overlap * e.eigenvalues.at(member);
  }
  return sum / (hi - lo);
}

namespace {

// Base times range over whole windows, (0, W - ceil(delta)], so every base
// window is followed by the window its shifted partner may fall into.
double last_base_time(const JumpTrajectory& trajectory, double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("sub_tau_correlation: delta must be non-negative");
  const double last = trajectory.end() - std::ceil(delta);
  if (!(last >= 1.0)) throw std::out_of_range("sub_tau_correlation: delta runs past the trajectory end");
  return last;
}

}  // namespace

FractionEstimate sub_tau_correlation(const JumpTrajectory& trajectory, double delta, std::uint64_t n_pairs,
                                     std::uint64_t seed) {
  if (trajectory.events.empty()) throw std::invalid_argument("sub_tau_correlation: empty trajectory");
  if (n_pairs < 1) throw std::invalid_argument("sub_tau_correlation: n_pairs must be >= 1");
  const double last_base = last_base_time(trajectory, delta);
  Rng rng(seed);
  std::uint64_t same = 0;
  for (std::uint64_t i = 0; i < n_pairs; ++i) {
    const double u = rng.uniform_left_open(0.0, last_base);
    if (delta == 0.0 || trajectory.event_at(u).label == trajectory.event_at(u + delta).label) ++same;
  }
  const auto n = static_cast<double>(n_pairs);
  const double f = static_cast<double>(same) / n;
  return FractionEstimate{f, std::sqrt(f * (1.0 - f) / n), n_pairs};
}

double same_outcome_fraction(const JumpTrajectory& trajectory, double delta) {
  if (trajectory.events.empty()) throw std::invalid_argument("same_outcome_fraction: empty trajectory");
  const double last_base = last_base_time(trajectory, delta);
  if (delta == 0.0) return 1.0;

  // Between consecutive breakpoints both label(u) and label(u + delta) are
  // constant, so a midpoint evaluation is exact.
  std::vector<double> cuts{0.0, last_base};
  for (const auto& e : trajectory.events) {
    for (double b : {e.interval.hi, e.interval.hi - delta}) {
      if (b > 0.0 && b < last_base) cuts.push_back(b);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double same = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    if (trajectory.event_at(mid).label == trajectory.event_at(mid + delta).label) same += cuts[i + 1] - cuts[i];
  }
  return same / last_base;
}

}  // namespace ergodic
