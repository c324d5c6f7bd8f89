#include <cmath>
#include <numbers>

#include "catch_amalgamated.hpp"
#include "ergodic/hilbert.hpp"
#include "support.hpp"

using namespace ergodic;
using namespace ergodic::testing;
using Catch::Approx;

TEST_CASE("make_state normalizes and records the factor") {
  const auto a = ket({1.0, 0.0});
  CHECK(a.amplitudes()[0] == Complex(1.0, 0.0));
  CHECK(a.normalization_factor() == 1.0);

  const auto b = ket({0.6, Complex(0.0, 0.8)});
  CHECK(b.norm() == Approx(1.0).margin(1e-15));
  CHECK(std::abs(b.amplitudes()[1] - Complex(0.0, 0.8)) < 1e-15);

  const auto c = ket({2.0, 0.0, 0.0});
  CHECK(c.amplitudes()[0] == Complex(1.0, 0.0));
  CHECK(c.normalization_factor() == 0.5);

  CHECK_THROWS_AS(make_state(ComplexVector::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(make_state(ComplexVector(0)), std::invalid_argument);
}

TEST_CASE("evolve") {
  SECTION("zero Hamiltonian is the identity") {
    Rng rng(1);
    const auto psi = random_state(rng, 4);
    const auto out = evolve(psi, Hamiltonian::zero(4), 7.0);
    CHECK((out.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-15);
  }
  SECTION("sigma_z phase over pi") {
    // exp(-i E du) with E = 1, du = pi.
    const auto out = evolve(ket({1.0, 0.0}), Hamiltonian(pauli_z()), std::numbers::pi);
    CHECK(std::abs(out.amplitudes()[0] - Complex(-1.0, 0.0)) < 1e-12);
    CHECK(std::abs(out.amplitudes()[1]) < 1e-15);
  }
  SECTION("unitarity for random generators") {
    Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t d = 2 + rng.below(15);
      const auto psi = random_state(rng, d);
      const Hamiltonian h(random_hermitian(rng, d, 3.0));
      const double du = 50.0 * rng.uniform();
      CHECK(std::abs(evolve(psi, h, du).norm() - 1.0) <= 1e-9);
    }
  }
  SECTION("composition of spans") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t d = 2 + rng.below(10);
      const auto psi = random_state(rng, d);
      const Hamiltonian h(random_hermitian(rng, d));
      const double a = 5.0 * rng.uniform();
      const double b = 5.0 * rng.uniform();
      const auto two_step = evolve(evolve(psi, h, a), h, b);
      const auto one_step = evolve(psi, h, a + b);
      CHECK((two_step.amplitudes() - one_step.amplitudes()).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
  SECTION("rejections") {
    CHECK_THROWS_AS(evolve(ket({1.0, 0.0}), Hamiltonian::zero(3), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(evolve(ket({1.0, 0.0}), Hamiltonian::zero(2), -1.0), std::invalid_argument);
  }
}

TEST_CASE("born_probabilities") {
  CHECK(born_probabilities(ket({1.0, 0.0}), sigma_z_csco()) == std::vector<double>{1.0, 0.0});

  const auto half = born_probabilities(ket({1.0, 1.0}), sigma_z_csco());
  CHECK(half[0] == Approx(0.5).margin(1e-15));
  CHECK(half[1] == Approx(0.5).margin(1e-15));

  SECTION("Rabi oscillation against cos^2(u/2)") {
    const Hamiltonian h(0.5 * pauli_x());
    const auto psi0 = ket({1.0, 0.0});
    for (double u : {0.0, 0.3, 1.0, 2.5, std::numbers::pi, 7.9, 40.0}) {
      const auto p = born_probabilities(evolve(psi0, h, u), sigma_z_csco());
      const double c = std::cos(u / 2.0);
      CHECK(p[0] == Approx(c * c).margin(1e-12));
    }
  }
  SECTION("completeness over random pairs") {
    Rng rng(4);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t d = 2 + rng.below(15);
      const auto p = born_probabilities(random_state(rng, d), random_csco(rng, d));
      double sum = 0.0;
      for (double x : p) {
        CHECK(x >= 0.0);
        sum += x;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-10);
    }
  }
  CHECK_THROWS_AS(born_probabilities(ket({1.0, 0.0, 0.0}), sigma_z_csco()), std::invalid_argument);
}

TEST_CASE("expectation") {
  CHECK(expectation(ket({1.0, 1.0}), sigma_z_csco(), 0) == Approx(0.0).margin(1e-15));
  // p = (0.36, 0.64): 0.36 - 0.64.
  CHECK(expectation(ket({0.6, 0.8}), sigma_z_csco(), 0) == Approx(-0.28).margin(1e-15));
  const auto five_nine = Csco::with_default_labels("e", ComplexMatrix::Identity(2, 2), {5.0, 9.0});
  CHECK(expectation(ket({1.0, 0.0}), five_nine, 0) == 5.0);
  CHECK_THROWS_AS(expectation(ket({1.0, 0.0}), five_nine, 1), std::out_of_range);

  SECTION("matches the explicit sandwich <psi|O|psi>") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t d = 2 + rng.below(15);
      const auto psi = random_state(rng, d);
      const auto csco = random_csco(rng, d);
      const ComplexVector& v = psi.amplitudes();
      const Complex sandwich = v.dot(csco.observable(0) * v);
      CHECK(std::abs(expectation(psi, csco, 0) - sandwich.real()) <= 1e-10);
      CHECK(std::abs(sandwich.imag()) <= 1e-10);
    }
  }
}

TEST_CASE("commutator_norm") {
  const auto sz = sigma_z_csco();
  const auto sx = sigma_x_csco();
  CHECK(commutator_norm(sz, sz, 0, 0) == 0.0);
  // [Z, X] = [[0, 2], [-2, 0]] by direct multiplication.
  ComplexMatrix zx = pauli_z() * pauli_x() - pauli_x() * pauli_z();
  CHECK(zx.cwiseAbs().maxCoeff() == 2.0);
  CHECK(commutator_norm(sz, sx, 0, 0) == Approx(2.0).margin(1e-12));

  Rng rng(6);
  const auto basis = random_unitary(rng, 5);
  const Csco a = Csco::with_default_labels("a", basis, {1, 2, 3, 4, 5});
  const Csco b = Csco::with_default_labels("b", basis, {-1, 0, 0, 7, 2});
  CHECK(commutator_norm(a, b, 0, 0) <= 1e-10);
  CHECK_THROWS_AS(commutator_norm(sz, random_csco(rng, 3), 0, 0), std::invalid_argument);
}

TEST_CASE("conservation test against a Hamiltonian") {
  Rng rng(7);
  const auto basis = random_unitary(rng, 4);
  const Csco c = Csco::with_default_labels("c", basis, {1, 2, 3, 4});
  Eigen::VectorXcd energies(4);
  energies << 0.3, -1.2, 2.0, 0.3;
  const Hamiltonian diagonal(basis * energies.asDiagonal() * basis.adjoint());
  CHECK(is_conserved(diagonal, c));
  CHECK_FALSE(is_conserved(Hamiltonian(random_hermitian(rng, 4)), c));
}

TEST_CASE("CSCO validation") {
  ComplexMatrix not_unitary(2, 2);
  not_unitary << 1, 1, 0, 1;
  CHECK_THROWS_AS(Csco::with_default_labels("bad", not_unitary, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Csco("dup", ComplexMatrix::Identity(2, 2), {{0}, {0}}, {{1}, {2}}), std::invalid_argument);
  CHECK_THROWS_AS(Csco("short", ComplexMatrix::Identity(2, 2), {{0}}, {{1}, {2}}), std::invalid_argument);
  CHECK_THROWS_AS(Csco("ragged", ComplexMatrix::Identity(2, 2), {{0}, {1}}, {{1, 2}, {3}}), std::invalid_argument);

  // Degenerate energies with distinct (n, l, m) labels are fine.
  const Csco hydrogen("h", ComplexMatrix::Identity(3, 3), {{1, 0, 0}, {2, 1, -1}, {2, 1, 1}},
                      {{-1.0, 0.0, 0.0}, {-0.25, 2.0, -1.0}, {-0.25, 2.0, 1.0}});
  CHECK(hydrogen.member_count() == 3);
  CHECK(hydrogen.index_of({2, 1, 1}) == 2);
  CHECK_THROWS_AS(hydrogen.index_of({3, 0, 0}), std::out_of_range);

  ComplexMatrix skew(2, 2);
  skew << 0, 1, 0, 0;
  CHECK_THROWS_AS(Hamiltonian(skew), std::invalid_argument);
}

TEST_CASE("physical scales convert at the boundary") {
  const auto scales = PhysicalScales::make(8.09e-21, 1.054571817e-34);
  CHECK(scales.to_dimensionless_time(scales.to_seconds(3.5)) == Approx(3.5));
  CHECK(scales.to_dimensionless_energy(scales.hbar / scales.tau) == Approx(1.0));
  CHECK_THROWS_AS(PhysicalScales::make(0.0, 1.0), std::invalid_argument);
}
