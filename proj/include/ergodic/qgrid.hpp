#pragma once

// Discrete position spectrum on a Planck-spaced lattice q_k = origin + k l_P.
//
// A wavefunction sampled on a fine uniform grid is renormalized over the
// Compton window [qbar_k - lambda/2, qbar_k + lambda/2], qbar_k = q_k + l_P/2,
// and each Planck cell inside that window gets the probability
// Pr(q_k) = int_{q_k}^{q_k+1} |Psi~|^2. Those probabilities then drive an
// ordinary time partition.
//
// Requirements on the geometry, checked at construction:
//   - lambda / l_P is an odd positive integer m, so the window is exactly
//     the m cells k - (m-1)/2 .. k + (m-1)/2;
//   - l_P / h is an even integer >= 16 and the lattice origin lies on a grid
//     node, so every cell boundary is a node and the trapezoid/Richardson
//     pair can run on h and 2h.

#include <complex>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "ergodic/partition.hpp"

namespace ergodic {

struct PlanckLattice {
  double planck_step = 1.0;         // l_P
  double compton_wavelength = 1.0;  // lambda
  double origin = 0.0;              // q_0

  /// m = lambda / l_P; throws unless it is an odd positive integer.
  long cells_per_window() const;
  double cell_lo(long k) const { return origin + static_cast<double>(k) * planck_step; }
  double cell_hi(long k) const { return cell_lo(k + 1); }
};

class GridWavefunction {
 public:
  static GridWavefunction make(std::vector<std::complex<double>> samples, double grid_origin, double spacing,
                               PlanckLattice lattice);

  /// Samples f at grid_origin + i * spacing, i = 0..count-1.
  static GridWavefunction sample(const std::function<std::complex<double>(double)>& f, double grid_origin,
                                 double spacing, std::size_t count, PlanckLattice lattice);

  /// Three whitespace- or comma-separated columns per line: position, real,
  /// imaginary. Blank lines and '#' comments are skipped. Uniform spacing is
  /// verified to a relative 1e-9.
  static GridWavefunction load(const std::filesystem::path& path, PlanckLattice lattice);

  const std::vector<std::complex<double>>& samples() const noexcept { return samples_; }
  double grid_origin() const noexcept { return grid_origin_; }
  double spacing() const noexcept { return spacing_; }
  double grid_end() const noexcept { return grid_origin_ + spacing_ * static_cast<double>(samples_.size() - 1); }
  const PlanckLattice& lattice() const noexcept { return lattice_; }

  /// Center cell of the window this function was renormalized over.
  std::optional<long> renormalized_center() const noexcept { return center_; }
  /// Factor applied by window_renormalize (1 before).
  double scale() const noexcept { return scale_; }

  /// Composite trapezoid on h and 2h plus one Richardson step, of |Psi|^2
  /// over [lo, hi]; both ends must be grid nodes.
  double density_integral(double lo, double hi) const;

 private:
  std::vector<std::complex<double>> samples_;
  double grid_origin_ = 0.0;
  double spacing_ = 1.0;
  PlanckLattice lattice_;
  std::optional<long> center_;
  double scale_ = 1.0;

  std::size_t node_index(double q) const;

  friend GridWavefunction window_renormalize(const GridWavefunction&, long);
};

/// Psi scaled by [int over the window around cell k of |Psi|^2]^(-1/2).
GridWavefunction window_renormalize(const GridWavefunction& wf, long k);

/// Pr(q_k) for a renormalized wavefunction; k must lie in its window.
double planck_cell_probability(const GridWavefunction& wf, long k);

struct CellProbability {
  long cell = 0;
  double q_lo = 0.0;
  double q_hi = 0.0;
  double probability = 0.0;
};

/// Renormalizes around k_center and returns Pr for every cell of the window.
std::vector<CellProbability> window_cell_probabilities(const GridWavefunction& wf, long k_center);

struct PositionPartition {
  WindowPartition partition;  // label i <-> cells[i]
  std::vector<long> cells;
};

PositionPartition position_partition(const GridWavefunction& wf, long k_center, long window_index,
                                     const SchedulerSpec& scheduler);

}  // namespace ergodic
