#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "catch_amalgamated.hpp"
#include "ergodic/qgrid.hpp"

using namespace ergodic;
using Catch::Approx;

namespace {

// l_P = 1, lambda = 5: the window around cell k is cells k-2 .. k+2.
const PlanckLattice kLattice{1.0, 5.0, 0.0};

// Normalized Gaussian with |psi|^2 = N(mu, sigma^2).
std::complex<double> gaussian_amplitude(double q, double mu, double sigma) {
  const double norm = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
  return norm * std::exp(-(q - mu) * (q - mu) / (4.0 * sigma * sigma));
}

double normal_mass(double a, double b, double mu, double sigma) {
  const double s = sigma * std::numbers::sqrt2;
  return 0.5 * (std::erf((b - mu) / s) - std::erf((a - mu) / s));
}

GridWavefunction gaussian_grid(double mu, double sigma, int per_cell, PlanckLattice lattice = kLattice) {
  const double h = lattice.planck_step / per_cell;
  const double lo = -10.0;
  const auto count = static_cast<std::size_t>(std::lround(25.0 / h)) + 1;
  return GridWavefunction::sample([&](double q) { return gaussian_amplitude(q, mu, sigma); }, lo, h, count, lattice);
}

}  // namespace

TEST_CASE("lattice geometry") {
  CHECK(kLattice.cells_per_window() == 5);
  CHECK(kLattice.cell_lo(3) == 3.0);
  CHECK(kLattice.cell_hi(3) == 4.0);
  CHECK(PlanckLattice{0.5, 0.5, 0.0}.cells_per_window() == 1);
  CHECK_THROWS_AS((PlanckLattice{1.0, 4.0, 0.0}.cells_per_window()), std::invalid_argument);
  CHECK_THROWS_AS((PlanckLattice{1.0, 4.5, 0.0}.cells_per_window()), std::invalid_argument);
  CHECK_THROWS_AS((PlanckLattice{1.0, 0.5, 0.0}.cells_per_window()), std::invalid_argument);
  CHECK_THROWS_AS((PlanckLattice{0.0, 1.0, 0.0}.cells_per_window()), std::invalid_argument);
}

TEST_CASE("uniform density renormalizes by (c lambda)^(-1/2)") {
  const double c = 0.37;
  const auto wf = GridWavefunction::sample([&](double) { return std::complex<double>(std::sqrt(c), 0.0); }, -4.0,
                                           1.0 / 32, 32 * 12 + 1, kLattice);
  const auto r = window_renormalize(wf, 1);
  CHECK(r.scale() == Approx(1.0 / std::sqrt(c * 5.0)).epsilon(1e-12));
  CHECK(r.renormalized_center() == 1);
  CHECK_FALSE(wf.renormalized_center().has_value());
  for (long k = -1; k <= 3; ++k) CHECK(planck_cell_probability(r, k) == Approx(0.2).margin(1e-12));
}

TEST_CASE("Gaussian cell probabilities match erf") {
  const double mu = 2.5;  // center of cell 2
  const double sigma = 0.8;
  const auto wf = gaussian_grid(mu, sigma, 64);
  const double window_mass = normal_mass(0.0, 5.0, mu, sigma);
  const auto cells = window_cell_probabilities(wf, 2);
  REQUIRE(cells.size() == 5);
  double total = 0.0;
  for (const auto& c : cells) {
    const double expected = normal_mass(c.q_lo, c.q_hi, mu, sigma) / window_mass;
    CHECK(std::abs(c.probability - expected) <= 1e-8);
    total += c.probability;
  }
  CHECK(cells.front().cell == 0);
  CHECK(cells.back().q_hi == 5.0);
  CHECK(total == Approx(1.0).margin(1e-12));
  CHECK(window_renormalize(wf, 2).scale() == Approx(1.0 / std::sqrt(window_mass)).margin(1e-8));

  SECTION("symmetric about the center cell") {
    for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(cells[j].probability - cells[4 - j].probability) <= 1e-10);
  }
  SECTION("a normalized function wholly inside the window keeps unit norm") {
    const auto narrow = gaussian_grid(mu, 0.2, 64);
    CHECK(window_renormalize(narrow, 2).scale() == Approx(1.0).margin(1e-8));
  }
  SECTION("refinement is stable") {
    const auto finer = window_cell_probabilities(gaussian_grid(mu, sigma, 128), 2);
    for (std::size_t j = 0; j < 5; ++j) CHECK(std::abs(finer[j].probability - cells[j].probability) <= 1e-8);
  }
  SECTION("off-center window") {
    const auto shifted = window_cell_probabilities(wf, 4);
    const double mass = normal_mass(2.0, 7.0, mu, sigma);
    for (const auto& c : shifted) {
      CHECK(std::abs(c.probability - normal_mass(c.q_lo, c.q_hi, mu, sigma) / mass) <= 1e-8);
    }
  }
}

TEST_CASE("position partition") {
  const auto wf = gaussian_grid(2.5, 0.8, 64);
  const auto cells = window_cell_probabilities(wf, 2);
  SchedulerSpec s;
  s.kind = SchedulerKind::seeded_random;
  s.max_subintervals = 2;
  const auto pp = position_partition(wf, 2, 6, s);
  CHECK(pp.cells == std::vector<long>{0, 1, 2, 3, 4});
  CHECK(pp.partition.window_index() == 6);
  CHECK(audit_partition(pp.partition).ok());
  for (std::size_t i = 0; i < 5; ++i) CHECK(pp.partition.measure(i) == Approx(cells[i].probability).margin(1e-9));
}

TEST_CASE("grid rejections") {
  const auto one = [](double) { return std::complex<double>(1.0, 0.0); };
  CHECK_THROWS_AS(GridWavefunction::sample(one, 0.0, 1.0 / 8, 100, kLattice), std::invalid_argument);
  CHECK_THROWS_AS(GridWavefunction::sample(one, 0.0, 1.0 / 33, 100, kLattice), std::invalid_argument);
  CHECK_THROWS_AS(GridWavefunction::sample(one, 0.01, 1.0 / 32, 100, kLattice), std::invalid_argument);
  CHECK_THROWS_AS(GridWavefunction::make({1.0}, 0.0, 1.0 / 32, kLattice), std::invalid_argument);
  CHECK_THROWS_AS(GridWavefunction::sample(one, 0.0, 1.0 / 32, 100, PlanckLattice{1.0, 4.0, 0.0}),
                  std::invalid_argument);

  const auto wf = gaussian_grid(2.5, 0.8, 32);
  CHECK_THROWS_AS(planck_cell_probability(wf, 2), std::invalid_argument);
  CHECK_THROWS_AS(planck_cell_probability(window_renormalize(wf, 2), 5), std::out_of_range);
  CHECK_THROWS_AS(window_renormalize(wf, 20), std::out_of_range);
  CHECK_THROWS_AS(wf.density_integral(0.0, 1.0 / 32), std::invalid_argument);
  CHECK_THROWS_AS(wf.density_integral(0.001, 1.0), std::invalid_argument);
  const auto zero = GridWavefunction::sample([](double) { return std::complex<double>(); }, -4.0, 1.0 / 32,
                                             32 * 12 + 1, kLattice);
  CHECK_THROWS_AS(window_renormalize(zero, 1), std::invalid_argument);
}

TEST_CASE("load from a sample file") {
  const auto dir = std::filesystem::temp_directory_path() / "ergodic_test_qgrid";
  std::filesystem::create_directories(dir);
  const auto good = dir / "gauss.csv";
  {
    std::ofstream out(good);
    out.precision(17);
    out << "# q, re, im\n\n";
    const double h = 1.0 / 64;
    for (int i = 0; i <= 25 * 64; ++i) {
      const double q = -10.0 + i * h;
      const auto a = gaussian_amplitude(q, 2.5, 0.8);
      if (i % 2 == 0) {
        out << q << ',' << a.real() << ',' << a.imag() << '\n';
      } else {
        out << q << ' ' << a.real() << '\t' << a.imag() << '\n';
      }
    }
  }
  const auto loaded = GridWavefunction::load(good, kLattice);
  CHECK(loaded.samples().size() == 25 * 64 + 1);
  CHECK(loaded.grid_origin() == -10.0);
  CHECK(loaded.grid_end() == Approx(15.0).margin(1e-12));
  const auto direct = window_cell_probabilities(gaussian_grid(2.5, 0.8, 64), 2);
  const auto from_file = window_cell_probabilities(loaded, 2);
  for (std::size_t j = 0; j < 5; ++j) CHECK(from_file[j].probability == Approx(direct[j].probability).margin(1e-12));

  const auto ragged = dir / "ragged.csv";
  {
    std::ofstream out(ragged);
    out << "0 1 0\n0.03125 1 0\n0.07 1 0\n";
  }
  CHECK_THROWS_AS(GridWavefunction::load(ragged, kLattice), std::invalid_argument);
  const auto columns = dir / "columns.csv";
  {
    std::ofstream out(columns);
    out << "0 1\n";
  }
  CHECK_THROWS_AS(GridWavefunction::load(columns, kLattice), std::invalid_argument);
  CHECK_THROWS_AS(GridWavefunction::load(dir / "missing.csv", kLattice), std::runtime_error);
  std::filesystem::remove_all(dir);
}
