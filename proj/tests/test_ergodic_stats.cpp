#include <cmath>
#include <numbers>

#include "catch_amalgamated.hpp"
#include "ergodic/ergodic_stats.hpp"
#include "support.hpp"

using namespace ergodic;
using namespace ergodic::testing;
using Catch::Approx;

namespace {

// Label at u by a linear scan of the dumped events; independent of
// JumpTrajectory::event_at.
const JumpEvent& scan(const JumpTrajectory& t, double u) {
  for (const auto& e : t.events) {
    if (e.interval.lo < u && u <= e.interval.hi) return e;
  }
  throw std::logic_error("scan: u not covered");
}

// Midpoint-rule integral of the value function over (lo, hi].
double midpoint_integral(const JumpTrajectory& t, double lo, double hi, int steps) {
  const double h = (hi - lo) / steps;
  double sum = 0.0;
  for (int i = 0; i < steps; ++i) sum += scan(t, lo + (i + 0.5) * h).eigenvalues[0];
  return sum * h;
}

// Equatorial qubit under H = (omega/2) sigma_x: <sigma_z>(u) = -sin(omega u).
QuantumState equator() { return ket({1.0, Complex(0.0, -1.0)}); }

}  // namespace

TEST_CASE("window averages are exact Born data") {
  const auto sz = sigma_z_csco();
  SchedulerSpec two;
  two.kind = SchedulerKind::paper_two_outcome;
  const auto worked = build_partition(std::vector<double>{0.4, 0.6}, 0, two);
  CHECK(window_average_step(worked, 0) == Approx(0.4).margin(1e-12));
  CHECK(window_average_step(worked, 0) + window_average_step(worked, 1) == Approx(1.0).margin(1e-15));
  const auto none = build_partition(std::vector<double>{0.0, 1.0}, 0, SchedulerSpec{});
  CHECK(window_average_step(none, 0) == 0.0);

  CHECK(window_average_value(build_partition(std::vector<double>{0.5, 0.5}, 0, SchedulerSpec{}), sz, 0) ==
        Approx(0.0).margin(1e-15));
  // 0.36 * (+1) + 0.64 * (-1)
  CHECK(window_average_value(build_partition(std::vector<double>{0.36, 0.64}, 3, SchedulerSpec{}), sz, 0) ==
        Approx(-0.28).margin(1e-12));
  CHECK_THROWS_AS(window_average_value(worked, sz, 1), std::out_of_range);

  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + rng.below(15);
    const auto c = random_csco(rng, d);
    const auto psi = random_state(rng, d);
    SchedulerSpec s;
    s.kind = static_cast<SchedulerKind>(rng.below(3));
    s.max_subintervals = 3;
    s.seed = rng.next();
    const auto part = build_partition(born_probabilities(psi, c), 0, s);
    CHECK(std::abs(window_average_value(part, c, 0) - expectation(psi, c, 0)) <= 1e-9);
  }

  // A remainder partition averages over its own span.
  const auto rest = build_remainder_partition(std::vector<double>{0.36, 0.64}, 0, 0.75, SchedulerSpec{});
  CHECK(window_average_step(rest, 0) == Approx(0.36).margin(1e-12));
}

TEST_CASE("sample_born") {
  const auto sz = sigma_z_csco();
  const auto certain = trajectory(ket({1.0, 0.0}), Hamiltonian::zero(2), sz, SchedulerSpec{}, 1);
  const auto d = sample_born(certain, 1000, 1);
  CHECK(d.counts == std::vector<std::uint64_t>{1000, 0});
  CHECK(d.estimates == std::vector<double>{1.0, 0.0});

  const auto t = trajectory(ket({0.6, 0.8}), Hamiltonian::zero(2), sz, SchedulerSpec{}, 2);
  const std::uint64_t n = 1000000;
  const auto big = sample_born(t, n, 7, 1);
  CHECK(big.total == n);
  for (std::size_t k = 0; k < 2; ++k) {
    const double truth = t.partitions[1].measure(k);
    const double se = std::sqrt(truth * (1.0 - truth) / static_cast<double>(n));
    CHECK(std::abs(big.estimates[k] - truth) <= 4.0 * se);
  }
  CHECK(big.estimates[0] + big.estimates[1] == Approx(1.0).margin(1e-12));

  // S_k in {0, 1}, so |<O_k|M>|^2 = <O_k|M> at every sampled instant.
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform_left_open(0.0, 1.0);
    for (std::size_t k = 0; k < 2; ++k) {
      const int s = step_function(t.partitions[0], k, u);
      CHECK(s * s == s);
    }
  }

  CHECK_THROWS_AS(sample_born(t, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_born(t, 10, 1, 2), std::out_of_range);
  CHECK_THROWS_AS(sample_born(JumpTrajectory{}, 10, 1), std::invalid_argument);
}

TEST_CASE("offset window averages") {
  const auto sz = sigma_z_csco();

  SECTION("conserved observable is offset-independent") {
    Rng rng(9);
    const auto c = random_csco(rng, 4);
    SchedulerSpec s;
    s.kind = SchedulerKind::seeded_random;
    s.max_subintervals = 3;
    const auto t = trajectory(random_state(rng, 4), Hamiltonian::zero(4), c, s, 6);
    const double window = window_average_value(t.partitions[0], c, 0);
    for (double alpha : {0.0, 0.13, 0.5, 2.77, 5.0}) {
      CHECK(offset_window_average(t, alpha, c, 0) == Approx(window).margin(1e-12));
    }
  }

  SECTION("integer offsets are window averages") {
    const auto t = trajectory(ket({1.0, 0.0}), Hamiltonian(0.5 * pauli_x()), sz, SchedulerSpec{}, 5);
    for (long n = 0; n < 5; ++n) {
      CHECK(offset_window_average(t, double(n), sz, 0) ==
            Approx(window_average_value(t.partitions[std::size_t(n)], sz, 0)).margin(1e-12));
    }
  }

  SECTION("Rabi offset average deviates by less than one window of drift") {
    const double omega = 1.0;
    const auto t = trajectory(equator(), Hamiltonian(0.5 * omega * pauli_x()), sz, SchedulerSpec{}, 3);
    const double offset = offset_window_average(t, 0.5, sz, 0);
    CHECK(offset == Approx(midpoint_integral(t, 0.5, 1.5, 200000)).margin(1e-5));
    // Contiguous layout: (0.5, 1] is all label 1, then 2 p_0(1) - 1/2 on (1, 1.5].
    CHECK(offset == Approx(-std::sin(omega)).margin(1e-12));
    const double deviation = std::abs(offset + std::sin(0.5 * omega));
    CHECK(deviation > 0.01);
    CHECK(deviation <= omega);  // max |d<sigma_z>/du| times one window
  }

  const auto t = trajectory(ket({1.0, 0.0}), Hamiltonian::zero(2), sz, SchedulerSpec{}, 2);
  CHECK_THROWS_AS(offset_window_average(t, 1.5, sz, 0), std::out_of_range);
  CHECK_THROWS_AS(offset_window_average(t, -0.1, sz, 0), std::out_of_range);
}

TEST_CASE("sub-window correlation") {
  const auto sz = sigma_z_csco();
  const auto half = trajectory(ket({1.0, 1.0}), Hamiltonian::zero(2), sz, SchedulerSpec{}, 10);

  CHECK(sub_tau_correlation(half, 0.0, 1000, 1).fraction == 1.0);
  CHECK(sub_tau_correlation(half, 1e-9, 100000, 2).fraction >= 0.9999);

  // Contiguous (0.5, 0.5): a pair disagrees iff a boundary (every 0.5)
  // falls in (u, u + delta], probability delta / 0.5.
  const auto est = sub_tau_correlation(half, 0.1, 100000, 3);
  CHECK(std::abs(est.fraction - 0.8) <= 3.0 * est.standard_error);
  CHECK(same_outcome_fraction(half, 0.1) == Approx(0.8).margin(1e-12));

  // Brute-force scan of the same pairs.
  const double delta = 0.1;
  const int steps = 200000;
  const double span = 9.0;  // whole base windows
  int same = 0;
  for (int i = 0; i < steps; ++i) {
    const double u = (i + 0.5) * span / steps;
    if (scan(half, u).label == scan(half, u + delta).label) ++same;
  }
  CHECK(double(same) / steps == Approx(0.8).margin(1e-4));

  Rng rng(10);
  const auto c = random_csco(rng, 3);
  SchedulerSpec s;
  s.kind = SchedulerKind::seeded_random;
  s.max_subintervals = 4;
  const auto conserved = trajectory(random_state(rng, 3), Hamiltonian::zero(3), c, s, 8);
  CHECK(sub_tau_correlation(conserved, 1.0, 100000, 4).fraction == 1.0);
  CHECK(same_outcome_fraction(conserved, 1.0) == Approx(1.0).margin(1e-12));

  CHECK_THROWS_AS(sub_tau_correlation(half, 9.5, 10, 1), std::out_of_range);
  CHECK_THROWS_AS(sub_tau_correlation(half, -0.1, 10, 1), std::invalid_argument);
}
