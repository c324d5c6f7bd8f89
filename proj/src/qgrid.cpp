#include "ergodic/qgrid.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ergodic {

namespace {

constexpr double kAlignmentTolerance = 1e-6;
constexpr long kMinNodesPerCell = 16;

// Nearest integer to x, or nullopt when x is not within tolerance of one.
std::optional<long> as_integer(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) > kAlignmentTolerance) return std::nullopt;
  return static_cast<long>(r);
}

}  // namespace

long PlanckLattice::cells_per_window() const {
  if (!(planck_step > 0.0) || !(compton_wavelength > 0.0)) {
    throw std::invalid_argument("lattice: planck_step and compton_wavelength must be positive");
  }
  if (compton_wavelength < planck_step) {
    throw std::invalid_argument("lattice: compton_wavelength must be >= planck_step");
  }
  const auto m = as_integer(compton_wavelength / planck_step);
  if (!m || *m < 1 || *m % 2 == 0) {
    throw std::invalid_argument("lattice: compton_wavelength / planck_step must be an odd positive integer");
  }
  return *m;
}

GridWavefunction GridWavefunction::make(std::vector<std::complex<double>> samples, double grid_origin,
                                        double spacing, PlanckLattice lattice) {
  if (samples.size() < 2) throw std::invalid_argument("grid: at least two samples are required");
  if (!(spacing > 0.0) || !std::isfinite(grid_origin)) throw std::invalid_argument("grid: spacing must be positive");
  lattice.cells_per_window();
  if (spacing > lattice.planck_step / static_cast<double>(kMinNodesPerCell) * (1.0 + kAlignmentTolerance)) {
    throw std::invalid_argument("grid: spacing must be at most planck_step / 16");
  }
  const auto per_cell = as_integer(lattice.planck_step / spacing);
  if (!per_cell || *per_cell % 2 != 0) {
    throw std::invalid_argument("grid: planck_step / spacing must be an even integer");
  }
  if (!as_integer((lattice.origin - grid_origin) / spacing)) {
    throw std::invalid_argument("grid: lattice origin must fall on a grid node");
  }
  GridWavefunction out;
  out.samples_ = std::move(samples);
  out.grid_origin_ = grid_origin;
  out.spacing_ = spacing;
  out.lattice_ = lattice;
  return out;
}

GridWavefunction GridWavefunction::sample(const std::function<std::complex<double>(double)>& f, double grid_origin,
                                          double spacing, std::size_t count, PlanckLattice lattice) {
  std::vector<std::complex<double>> samples(count);
  for (std::size_t i = 0; i < count; ++i) samples[i] = f(grid_origin + spacing * static_cast<double>(i));
  return make(std::move(samples), grid_origin, spacing, lattice);
}

GridWavefunction GridWavefunction::load(const std::filesystem::path& path, PlanckLattice lattice) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("grid: cannot open " + path.string());
  std::vector<double> positions;
  std::vector<std::complex<double>> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream fields(line);
    double q = 0.0, re = 0.0, im = 0.0;
    if (!(fields >> q)) continue;
    std::string extra;
    if (!(fields >> re >> im) || (fields >> extra)) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                  ": expected three columns (position, real, imag)");
    }
    positions.push_back(q);
    samples.emplace_back(re, im);
  }
  if (positions.size() < 2) throw std::invalid_argument(path.string() + ": fewer than two samples");
  const double spacing = (positions.back() - positions.front()) / static_cast<double>(positions.size() - 1);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const double expected = positions.front() + spacing * static_cast<double>(i);
    if (std::abs(positions[i] - expected) > 1e-9 * spacing) {
      throw std::invalid_argument(path.string() + ": sample " + std::to_string(i) + " breaks uniform spacing");
    }
  }
  return make(std::move(samples), positions.front(), spacing, lattice);
}

std::size_t GridWavefunction::node_index(double q) const {
  const auto i = as_integer((q - grid_origin_) / spacing_);
  if (!i) throw std::invalid_argument("grid: position " + std::to_string(q) + " is not a grid node");
  if (*i < 0 || static_cast<std::size_t>(*i) >= samples_.size()) {
    throw std::out_of_range("grid: position " + std::to_string(q) + " outside the sampled extent");
  }
  return static_cast<std::size_t>(*i);
}

double GridWavefunction::density_integral(double lo, double hi) const {
  const std::size_t first = node_index(lo);
  const std::size_t last = node_index(hi);
  if (last < first) throw std::invalid_argument("grid: integration bounds reversed");
  if (last == first) return 0.0;
  if ((last - first) % 2 != 0) throw std::invalid_argument("grid: Richardson step needs an even node count");

  double fine = 0.0;
  double coarse = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    const double w = (i == first || i == last) ? 0.5 : 1.0;
    const double density = std::norm(samples_[i]);
    fine += w * density;
    if ((i - first) % 2 == 0) coarse += w * density;
  }
  fine *= spacing_;
  coarse *= 2.0 * spacing_;
  return (4.0 * fine - coarse) / 3.0;
}

GridWavefunction window_renormalize(const GridWavefunction& wf, long k) {
  const long half = (wf.lattice().cells_per_window() - 1) / 2;
  const double lo = wf.lattice().cell_lo(k - half);
  const double hi = wf.lattice().cell_hi(k + half);
  const double mass = wf.density_integral(lo, hi);
  if (!(mass >= 1e-300)) throw std::invalid_argument("window_renormalize: window mass below 1e-300");
  const double factor = 1.0 / std::sqrt(mass);

  GridWavefunction out = wf;
  if (factor != 1.0) {
    for (auto& s : out.samples_) s *= factor;
  }
  out.center_ = k;
  out.scale_ = wf.scale_ * factor;
  return out;
}

double planck_cell_probability(const GridWavefunction& wf, long k) {
  const auto center = wf.renormalized_center();
  if (!center) throw std::invalid_argument("planck_cell_probability: wavefunction has not been window-renormalized");
  const long half = (wf.lattice().cells_per_window() - 1) / 2;
  if (k < *center - half || k > *center + half) {
    throw std::out_of_range("planck_cell_probability: cell " + std::to_string(k) + " outside the Compton window");
  }
  return wf.density_integral(wf.lattice().cell_lo(k), wf.lattice().cell_hi(k));
}

std::vector<CellProbability> window_cell_probabilities(const GridWavefunction& wf, long k_center) {
  const auto renormalized = window_renormalize(wf, k_center);
  const long half = (wf.lattice().cells_per_window() - 1) / 2;
  std::vector<CellProbability> out;
  for (long k = k_center - half; k <= k_center + half; ++k) {
    out.push_back({k, wf.lattice().cell_lo(k), wf.lattice().cell_hi(k), planck_cell_probability(renormalized, k)});
  }
  return out;
}

PositionPartition position_partition(const GridWavefunction& wf, long k_center, long window_index,
                                     const SchedulerSpec& scheduler) {
  const auto cells = window_cell_probabilities(wf, k_center);
  std::vector<double> p;
  PositionPartition out{WindowPartition{}, {}};
  for (const auto& c : cells) {
    p.push_back(c.probability);
    out.cells.push_back(c.cell);
  }
  out.partition = build_partition(p, window_index, scheduler);
  return out;
}

}  // namespace ergodic
