#include "ergodic/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ergodic/errors.hpp"
#include "ergodic/rng.hpp"

namespace ergodic {

namespace {

using Piece = WindowPartition::Piece;

struct Mass {
  std::size_t label;
  double amount;
};

std::vector<double> checked_probabilities(std::span<const double> probabilities) {
  if (probabilities.empty()) throw std::invalid_argument("build_partition: empty probability vector");
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("build_partition: probabilities must be finite and non-negative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw std::invalid_argument("build_partition: probabilities sum to " + std::to_string(total) + ", not 1");
  }
  std::vector<double> out(probabilities.begin(), probabilities.end());
  if (total != 1.0) {
    for (double& p : out) p /= total;
  }
  return out;
}

// Lays masses end to end from 0; the final boundary is sealed to exactly 1.
std::vector<Piece> stack(const std::vector<Mass>& masses) {
  std::vector<Piece> out;
  double cursor = 0.0;
  for (const auto& m : masses) {
    const double hi = cursor + m.amount;
    out.push_back({{cursor, hi}, m.label});
    cursor = hi;
  }
  if (!out.empty()) out.back().interval.hi = 1.0;
  return out;
}

std::vector<Piece> layout_contiguous(const std::vector<double>& p) {
  std::vector<Mass> masses;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] > 0.0) masses.push_back({k, p[k]});
  }
  return stack(masses);
}

std::vector<Piece> layout_two_outcome(const std::vector<double>& p, double offset) {
  const double p0 = p[0];
  if (p0 <= 0.0) return layout_contiguous(p);
  const double others_total = std::max(0.0, 1.0 - p0);
  const double anchor = std::clamp(offset, 0.0, others_total);

  // The other labels are laid out contiguously in their own coordinate
  // x in [0, others_total]; x <= anchor maps to x, x > anchor to x + p0.
  std::vector<Piece> out;
  double x = 0.0;
  bool placed_first = false;
  auto emit = [&out](std::size_t label, double lo, double hi) {
    if (hi > lo) out.push_back({{lo, hi}, label});
  };
  auto place_first = [&] {
    emit(0, anchor, anchor + p0);
    placed_first = true;
  };
  for (std::size_t k = 1; k < p.size(); ++k) {
    if (p[k] <= 0.0) continue;
    const double lo = x;
    const double hi = x + p[k];
    if (!placed_first && hi >= anchor) {
      emit(k, lo, anchor);
      place_first();
      emit(k, anchor + p0, hi + p0);
    } else if (placed_first) {
      emit(k, lo + p0, hi + p0);
    } else {
      emit(k, lo, hi);
    }
    x = hi;
  }
  if (!placed_first) place_first();
  out.back().interval.hi = 1.0;
  return out;
}

std::vector<Piece> layout_seeded_random(const std::vector<double>& p, const SchedulerSpec& spec, long window_index) {
  Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(window_index)));
  const auto max_pieces = static_cast<std::uint64_t>(spec.max_subintervals);
  std::vector<Mass> masses;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] <= 0.0) continue;
    const auto n = 1 + rng.below(max_pieces);
    std::vector<double> cuts{0.0};
    for (std::uint64_t i = 1; i < n; ++i) cuts.push_back(rng.uniform());
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double amount = p[k] * (cuts[i + 1] - cuts[i]);
      if (amount > 0.0) masses.push_back({k, amount});
    }
  }
  for (std::size_t i = masses.size(); i > 1; --i) {
    std::swap(masses[i - 1], masses[rng.below(i)]);
  }
  return stack(masses);
}

std::vector<Piece> merge_neighbours(std::vector<Piece> pieces) {
  std::vector<Piece> out;
  for (const auto& piece : pieces) {
    if (!out.empty() && out.back().label == piece.label) {
      out.back().interval.hi = piece.interval.hi;
    } else {
      out.push_back(piece);
    }
  }
  return out;
}

std::vector<Piece> local_layout(const std::vector<double>& p, long window_index, const SchedulerSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case SchedulerKind::contiguous:
      return layout_contiguous(p);
    case SchedulerKind::paper_two_outcome:
      return merge_neighbours(layout_two_outcome(p, spec.offset));
    case SchedulerKind::seeded_random:
      return merge_neighbours(layout_seeded_random(p, spec, window_index));
  }
  throw std::logic_error("unreachable scheduler kind");
}

}  // namespace

WindowPartition layout_partition(std::vector<double> probabilities, long window_index, double start, double end,
                                 bool closed_at_start, std::vector<Piece> local) {
  WindowPartition out;
  out.window_index_ = window_index;
  out.start_ = start;
  out.end_ = end;
  out.closed_at_start_ = closed_at_start;
  out.probabilities_ = std::move(probabilities);
  out.local_ = std::move(local);

  const bool full = start == static_cast<double>(window_index) && end == static_cast<double>(window_index) + 1.0;
  const double span = end - start;
  double cursor = start;
  for (std::size_t i = 0; i < out.local_.size(); ++i) {
    const auto& piece = out.local_[i];
    const double hi = i + 1 == out.local_.size() ? end : (full ? start + piece.interval.hi : start + piece.interval.hi * span);
    // Pieces narrower than one ulp at this magnitude vanish after the shift.
    if (hi > cursor) {
      out.pieces_.push_back({{cursor, hi}, piece.label});
      cursor = hi;
    }
  }
  out.measures_.assign(out.probabilities_.size(), 0.0);
  for (const auto& piece : out.pieces_) out.measures_[piece.label] += piece.interval.length();
  return out;
}

std::string_view to_string(SchedulerKind kind) noexcept {
  switch (kind) {
    case SchedulerKind::contiguous:
      return "contiguous";
    case SchedulerKind::paper_two_outcome:
      return "paper-two-outcome";
    case SchedulerKind::seeded_random:
      return "seeded-random";
  }
  return "?";
}

SchedulerKind parse_scheduler_kind(std::string_view text) {
  if (text == "contiguous") return SchedulerKind::contiguous;
  if (text == "paper-two-outcome") return SchedulerKind::paper_two_outcome;
  if (text == "seeded-random") return SchedulerKind::seeded_random;
  throw std::invalid_argument("unknown scheduler kind '" + std::string(text) + "'");
}

void SchedulerSpec::validate() const {
  if (max_subintervals < 1) throw std::invalid_argument("scheduler: max_subintervals must be >= 1");
  if (!(offset >= 0.0 && offset <= 1.0)) throw std::invalid_argument("scheduler: offset must lie in [0, 1]");
}

bool WindowPartition::is_full_window() const noexcept {
  return start_ == static_cast<double>(window_index_) && end_ == static_cast<double>(window_index_) + 1.0;
}

std::vector<SubInterval> WindowPartition::intervals(std::size_t label) const {
  if (label >= label_count()) throw std::out_of_range("partition: unknown label " + std::to_string(label));
  std::vector<SubInterval> out;
  for (const auto& piece : pieces_) {
    if (piece.label == label) out.push_back(piece.interval);
  }
  return out;
}

bool WindowPartition::covers(double u) const noexcept {
  return (start_ < u && u <= end_) || (closed_at_start_ && u == start_);
}

std::size_t WindowPartition::active_label(double u) const {
  if (!covers(u) || pieces_.empty()) {
    throw std::out_of_range("partition: time " + std::to_string(u) + " outside window (" + std::to_string(start_) +
                            ", " + std::to_string(end_) + "]");
  }
  if (u == start_) return pieces_.front().label;
  const auto it = std::lower_bound(pieces_.begin(), pieces_.end(), u,
                                   [](const Piece& piece, double t) { return piece.interval.hi < t; });
  if (it == pieces_.end() || !(it->interval.lo < u)) {
    throw InvariantViolation("coverage", "no sub-interval contains u = " + std::to_string(u));
  }
  return it->label;
}

double WindowPartition::measure(std::size_t label) const {
  if (label >= label_count()) throw std::out_of_range("partition: unknown label " + std::to_string(label));
  return measures_[label];
}

WindowPartition WindowPartition::unchecked(long window_index, double start, double end,
                                           std::vector<double> probabilities, std::vector<Piece> pieces) {
  WindowPartition out;
  out.window_index_ = window_index;
  out.start_ = start;
  out.end_ = end;
  out.probabilities_ = std::move(probabilities);
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& a, const Piece& b) { return a.interval.lo < b.interval.lo; });
  out.pieces_ = pieces;
  out.local_ = std::move(pieces);
  out.measures_.assign(out.probabilities_.size(), 0.0);
  for (const auto& piece : out.pieces_) {
    if (piece.label < out.measures_.size()) out.measures_[piece.label] += piece.interval.length();
  }
  return out;
}

WindowPartition build_partition(std::span<const double> probabilities, long window_index,
                                const SchedulerSpec& scheduler) {
  if (window_index < 0) throw std::invalid_argument("build_partition: window index must be >= 0");
  auto p = checked_probabilities(probabilities);
  auto local = local_layout(p, window_index, scheduler);
  const auto n = static_cast<double>(window_index);
  auto out = layout_partition(std::move(p), window_index, n, n + 1.0, false, std::move(local));
  require_valid(out);
  return out;
}

WindowPartition build_remainder_partition(std::span<const double> probabilities, long window_index, double start,
                                          const SchedulerSpec& scheduler) {
  const auto n = static_cast<double>(window_index);
  if (!(start >= n && start <= n + 1.0)) {
    throw std::out_of_range("build_remainder_partition: start outside window");
  }
  auto p = checked_probabilities(probabilities);
  WindowPartition out;
  if (start == n + 1.0) {
    auto local = local_layout(p, window_index + 1, scheduler);
    out = layout_partition(std::move(p), window_index + 1, n + 1.0, n + 2.0, true, std::move(local));
  } else {
    auto local = local_layout(p, window_index, scheduler);
    out = layout_partition(std::move(p), window_index, start, n + 1.0, true, std::move(local));
  }
  require_valid(out);
  return out;
}

int step_function(const WindowPartition& partition, std::size_t label, double u) {
  if (label >= partition.label_count()) throw std::out_of_range("step_function: unknown label");
  return partition.active_label(u) == label ? 1 : 0;
}

std::size_t active_label(const WindowPartition& partition, double u) { return partition.active_label(u); }

double interval_measure(const WindowPartition& partition, std::size_t label) { return partition.measure(label); }

WindowPartition periodic_extend(const WindowPartition& base, long window_index) {
  if (!base.is_full_window()) throw std::invalid_argument("periodic_extend: base must cover a full window");
  if (window_index < 0) throw std::invalid_argument("periodic_extend: window index must be >= 0");
  const auto n = static_cast<double>(window_index);
  auto out = layout_partition(base.probabilities(), window_index, n, n + 1.0, false, base.local_layout());
  require_valid(out);
  return out;
}

PartitionAudit audit_partition(const WindowPartition& partition) {
  PartitionAudit audit;
  const auto& pieces = partition.pieces();
  double cursor = partition.start();
  for (const auto& piece : pieces) {
    if (!(piece.interval.lo < piece.interval.hi)) audit.ordered = false;
    if (piece.interval.lo < cursor) audit.disjoint = false;
    audit.coverage_gap += std::abs(piece.interval.lo - cursor);
    cursor = std::max(cursor, piece.interval.hi);
  }
  audit.coverage_gap += std::abs(partition.end() - cursor);

  std::vector<double> measures(partition.label_count(), 0.0);
  for (const auto& piece : pieces) {
    if (piece.label >= measures.size()) {
      audit.max_measure_error = std::max(audit.max_measure_error, piece.interval.length());
      continue;
    }
    measures[piece.label] += piece.interval.length();
  }
  for (std::size_t k = 0; k < measures.size(); ++k) {
    const double err = std::abs(measures[k] - partition.probabilities()[k] * partition.span());
    if (err > audit.max_measure_error) {
      audit.max_measure_error = err;
      audit.worst_label = k;
    }
  }
  return audit;
}

void require_valid(const WindowPartition& partition) {
  const auto audit = audit_partition(partition);
  if (!audit.ordered) throw InvariantViolation("interval-order", "stored sub-interval with lo >= hi");
  if (!audit.disjoint) throw InvariantViolation("disjointness", "overlapping sub-intervals");
  if (audit.coverage_gap > kMeasureTolerance) {
    throw InvariantViolation("coverage", "uncovered length " + std::to_string(audit.coverage_gap));
  }
  if (audit.max_measure_error > kMeasureTolerance) {
    throw InvariantViolation("measure", "label " + std::to_string(audit.worst_label) + " off by " +
                                            std::to_string(audit.max_measure_error));
  }
}

}  // namespace ergodic
