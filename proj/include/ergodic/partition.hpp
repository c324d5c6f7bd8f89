#pragma once

// Probability-weighted partitions of one Compton window (N, N+1].
//
// Every label k owns a finite set of disjoint half-open sub-intervals whose
// total length is p_k; the sub-intervals of all labels tile the window
// exactly. The placement of the sub-intervals is left free by the
// construction, so it is chosen by a pluggable SchedulerSpec.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ergodic {

inline constexpr double kMeasureTolerance = 1e-9;

/// Half-open interval (lo, hi] in dimensionless time. lo < hi always.
struct SubInterval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  bool contains(double u) const noexcept { return lo < u && u <= hi; }

  friend bool operator==(const SubInterval&, const SubInterval&) = default;
};

enum class SchedulerKind { contiguous, paper_two_outcome, seeded_random };

std::string_view to_string(SchedulerKind kind) noexcept;
/// Accepts "contiguous", "paper-two-outcome", "seeded-random".
SchedulerKind parse_scheduler_kind(std::string_view text);

/// How the free interval endpoints are placed inside a window.
///
///  - contiguous: one interval per label, ascending label order.
///  - paper_two_outcome: label 0 is a single interval starting `offset`
///    into the window; the other labels fill the space before and after it
///    in ascending order. For d = 2 this is the (I_21, I_11, I_22) layout
///    with t_11 = N + offset. The offset is clamped to 1 - p_0.
///  - seeded_random: each label's mass is cut into 1..max_subintervals
///    pieces at random points, then all pieces are shuffled.
struct SchedulerSpec {
  SchedulerKind kind = SchedulerKind::contiguous;
  int max_subintervals = 1;
  std::uint64_t seed = 0;
  double offset = 0.3;

  void validate() const;

  friend bool operator==(const SchedulerSpec&, const SchedulerSpec&) = default;
};

class WindowPartition {
 public:
  struct Piece {
    SubInterval interval;
    std::size_t label = 0;

    friend bool operator==(const Piece&, const Piece&) = default;
  };

  long window_index() const noexcept { return window_index_; }
  double start() const noexcept { return start_; }
  double end() const noexcept { return end_; }
  double span() const noexcept { return end_ - start_; }

  /// True for a partition of the whole window (N, N+1].
  bool is_full_window() const noexcept;

  /// Post-collapse partitions also answer queries at their start instant;
  /// the label there is the one of the first piece.
  bool closed_at_start() const noexcept { return closed_at_start_; }

  std::size_t label_count() const noexcept { return probabilities_.size(); }
  const std::vector<double>& probabilities() const noexcept { return probabilities_; }

  /// All pieces, sorted by lo, sharing endpoints with their neighbours.
  const std::vector<Piece>& pieces() const noexcept { return pieces_; }

  /// Sub-intervals of one label, sorted by lo (empty when p_k = 0).
  std::vector<SubInterval> intervals(std::size_t label) const;

  bool covers(double u) const noexcept;

  /// Unique label whose sub-interval contains u. Throws std::out_of_range
  /// when u is outside the window.
  std::size_t active_label(double u) const;

  /// Total length of the label's sub-intervals.
  double measure(std::size_t label) const;

  /// Window-local layout: pieces mapped to (0, 1]. Reused verbatim by
  /// periodic_extend so shifted partitions are bit-identical.
  const std::vector<Piece>& local_layout() const noexcept { return local_; }

  /// Builds a partition without any invariant check. Fault-injection hook
  /// for audit tests; do not use for physics.
  static WindowPartition unchecked(long window_index, double start, double end, std::vector<double> probabilities,
                                   std::vector<Piece> pieces);

  friend bool operator==(const WindowPartition&, const WindowPartition&) = default;

 private:
  friend WindowPartition layout_partition(std::vector<double> probabilities, long window_index, double start,
                                          double end, bool closed_at_start, std::vector<Piece> local);

  long window_index_ = 0;
  double start_ = 0.0;
  double end_ = 1.0;
  bool closed_at_start_ = false;
  std::vector<double> probabilities_;
  std::vector<Piece> pieces_;
  std::vector<Piece> local_;
  std::vector<double> measures_;
};

/// Partition of (N, N+1] from Born probabilities frozen at u = N.
/// Rejects negative entries and sums off by more than 1e-6; smaller
/// deviations are normalized away before layout.
WindowPartition build_partition(std::span<const double> probabilities, long window_index,
                                const SchedulerSpec& scheduler);

/// Partition of the remainder (start, N+1] of window N after a collapse at
/// `start`. The scheduler lays out the unit window and the result is mapped
/// affinely, so label k receives p_k * (N + 1 - start). The partition is
/// closed at its start instant. When start == N + 1 the next full window
/// (N+1, N+2] is built instead.
WindowPartition build_remainder_partition(std::span<const double> probabilities, long window_index, double start,
                                          const SchedulerSpec& scheduler);

/// S_k(u): 1 iff u lies in one of label's sub-intervals.
int step_function(const WindowPartition& partition, std::size_t label, double u);

std::size_t active_label(const WindowPartition& partition, double u);

double interval_measure(const WindowPartition& partition, std::size_t label);

/// Same layout shifted to window N: t_kj(N) = N + t_kj(0).
WindowPartition periodic_extend(const WindowPartition& base, long window_index);

struct PartitionAudit {
  bool disjoint = true;
  double coverage_gap = 0.0;       // total length not covered, plus overhang
  double max_measure_error = 0.0;  // max_k |measure_k - p_k * span|
  std::size_t worst_label = 0;
  bool ordered = true;             // every stored piece has lo < hi

  bool ok(double tolerance = kMeasureTolerance) const noexcept {
    return disjoint && ordered && coverage_gap <= tolerance && max_measure_error <= tolerance;
  }
};

/// Recomputes disjointness, coverage and per-label measure from the stored
/// pieces alone.
PartitionAudit audit_partition(const WindowPartition& partition);

/// Throws InvariantViolation naming the first failed invariant.
void require_valid(const WindowPartition& partition);

}  // namespace ergodic
