#include <cmath>
#include <memory>

#include "catch_amalgamated.hpp"
#include "ergodic/measurement.hpp"
#include "support.hpp"

using namespace ergodic;
using namespace ergodic::testing;
using Catch::Approx;

namespace {

std::shared_ptr<const Scenario> make_scenario(QuantumState psi, Hamiltonian h, std::vector<Csco> cscos) {
  return std::make_shared<const Scenario>(Scenario{std::move(psi), std::move(h), std::move(cscos), {}});
}

double max_diff(const ComplexVector& a, const ComplexVector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("measurement returns the active label and collapses") {
  // p = (0.36, 0.64), contiguous: label 0 on (0, 0.36], label 1 on (0.36, 1].
  const auto sc = make_scenario(ket({0.6, 0.8}), Hamiltonian::zero(2), {sigma_z_csco()});
  const SystemUnderObservation system(sc);
  const auto [record, after] = measure(system, "sz", 0.5);
  CHECK(record.outcome_label == 1);
  CHECK(record.outcome_multi_index == Label{1});
  CHECK(record.outcome_eigenvalues == std::vector<double>{-1.0});
  CHECK(record.time == 0.5);
  CHECK(max_diff(record.pre_state.amplitudes(), system.state().amplitudes()) == 0.0);
  CHECK(max_diff(after.state().amplitudes(), ket({0.0, 1.0}).amplitudes()) == 0.0);
  CHECK(after.history().size() == 1);
  CHECK(after.time() == 0.5);

  // The remainder (0.5, 1] belongs entirely to the collapsed label.
  const auto& rest = after.partition("sz");
  CHECK(rest.start() == 0.5);
  CHECK(rest.measure(0) == 0.0);
  CHECK(rest.measure(1) == Approx(0.5).margin(1e-15));

  const auto early = measure(system, "sz", 0.2).first;
  CHECK(early.outcome_label == 0);
}

TEST_CASE("repeated measurement is idempotent") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2 + rng.below(8);
    const auto c = random_csco(rng, d, "c");
    const auto sc = make_scenario(random_state(rng, d), Hamiltonian::zero(d), {c});
    const double u1 = rng.uniform_left_open(0.0, 3.0);
    const auto [first, after] = measure(SystemUnderObservation(sc), "c", u1);
    double u2 = u1;
    for (int k = 0; k < 3; ++k) {
      u2 = rng.uniform_left_open(u2, u2 + 2.0);
      CHECK(measure(after, "c", u2).first.outcome_label == first.outcome_label);
    }
    // Same instant, same answer.
    CHECK(measure(after, "c", u1).first.outcome_label == first.outcome_label);
  }
}

TEST_CASE("measurement operator") {
  const auto sz = sigma_z_csco();
  const auto part = build_partition(std::vector<double>{0.36, 0.64}, 0, SchedulerSpec{});
  const auto psi = ket({0.6, 0.8});
  const ComplexVector out = measurement_operator_apply(psi, part, sz, 0.5);
  CHECK(max_diff(out, ComplexVector(ket({0.0, 1.0}).amplitudes() * 0.8)) <= 1e-15);
  CHECK(max_diff(measurement_operator_apply(psi, part, sz, 0.1),
                 ComplexVector(ket({1.0, 0.0}).amplitudes() * 0.6)) <= 1e-15);

  Rng rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + rng.below(10);
    const auto c = random_csco(rng, d);
    const auto state = random_state(rng, d);
    const auto p = build_partition(born_probabilities(state, c), 0, SchedulerSpec{});
    const double u = rng.uniform_left_open(0.0, 1.0);
    const ComplexVector once = measurement_operator_apply(state, p, c, u);
    const ComplexVector twice = measurement_operator_apply(once, p, c, u);
    CHECK(max_diff(once, twice) <= 1e-12);
    // |M psi|^2 = p_k for the active k.
    CHECK(once.squaredNorm() == Approx(p.probabilities()[p.active_label(u)]).margin(1e-12));
  }
  CHECK_THROWS_AS(measurement_operator_apply(ket({1.0, 0.0, 0.0}), part, sz, 0.5), std::invalid_argument);
}

TEST_CASE("advance") {
  SECTION("conserved CSCO keeps window 0's layout") {
    Rng rng(33);
    const auto basis = random_unitary(rng, 3);
    const auto c = Csco::with_default_labels("c", basis, {1, 2, 3});
    Eigen::VectorXcd e(3);
    e << 0.4, -1.1, 2.0;
    auto scenario = Scenario{random_state(rng, 3), Hamiltonian(basis * e.asDiagonal() * basis.adjoint()), {c}, {}};
    SchedulerSpec s;
    s.kind = SchedulerKind::seeded_random;
    s.max_subintervals = 3;
    s.seed = 5;
    scenario.schedulers["c"] = s;
    const auto sc = std::make_shared<const Scenario>(std::move(scenario));
    const SystemUnderObservation system(sc);
    for (long n : {1L, 2L, 17L}) {
      const auto later = advance(system, static_cast<double>(n) + 0.5);
      CHECK(later.partition("c") == periodic_extend(system.partition("c"), n));
    }
  }

  SECTION("Rabi state and partition") {
    const auto sc = make_scenario(ket({1.0, 0.0}), Hamiltonian(0.5 * pauli_x()), {sigma_z_csco()});
    const SystemUnderObservation system(sc);
    const double u = 3.7;
    const auto later = advance(system, u);
    CHECK(later.time() == u);
    // exp(-i u sigma_x / 2)|0> = (cos(u/2), -i sin(u/2)).
    ComplexVector expected(2);
    expected << std::cos(u / 2.0), Complex(0.0, -std::sin(u / 2.0));
    CHECK(max_diff(later.state().amplitudes(), expected) <= 1e-12);
    const auto& part = later.partition("sz");
    CHECK(part.window_index() == 3);
    CHECK(part.measure(0) == Approx(std::pow(std::cos(1.5), 2)).margin(1e-12));
    // Window end exactly: no rebuild yet.
    CHECK(advance(system, 1.0).partition("sz").window_index() == 0);
    CHECK_THROWS_AS(advance(later, 1.0), std::invalid_argument);
  }
}

TEST_CASE("collapse at a window end starts the next window") {
  const auto sc = make_scenario(ket({1.0, 1.0}), Hamiltonian::zero(2), {sigma_z_csco(), sigma_x_csco()});
  const auto [record, after] = measure(SystemUnderObservation(sc), "sz", 1.0);
  CHECK(record.outcome_label == 1);  // contiguous (0.5, 0.5): 1.0 is in (0.5, 1]
  const auto& next = after.partition("sx");
  CHECK(next.window_index() == 1);
  CHECK(next.is_full_window());
  CHECK(next.measure(0) == Approx(0.5).margin(1e-12));
  const auto later = advance(after, 1.5);
  CHECK(later.partition("sx").window_index() == 1);
}

TEST_CASE("single-step sequence reproduces window measures") {
  Rng rng(34);
  const auto c = random_csco(rng, 4, "c");
  auto scenario = Scenario{random_state(rng, 4), Hamiltonian(random_hermitian(rng, 4)), {c}, {}};
  SchedulerSpec s;
  s.kind = SchedulerKind::seeded_random;
  s.max_subintervals = 3;
  scenario.schedulers["c"] = s;
  const auto sc = std::make_shared<const Scenario>(std::move(scenario));
  const std::uint64_t runs = 200000;
  const auto dist = sequential_experiment(sc, {{"c", 2.0, 3.0}}, runs, 77);
  const auto truth = advance(SystemUnderObservation(sc), 2.5).partition("c");
  REQUIRE(truth.window_index() == 2);
  for (std::size_t k = 0; k < 4; ++k) {
    const double p = truth.measure(k);
    const auto it = dist.counts.find({k});
    const double f = it == dist.counts.end() ? 0.0 : static_cast<double>(it->second) / runs;
    CHECK(std::abs(f - p) <= 4.0 * std::sqrt(p * (1.0 - p) / runs) + 1e-15);
  }
  CHECK(dist.runs == runs);
  CHECK(dist.log.empty());
}

TEST_CASE("measurement order changes the joint distribution") {
  // H = 0 from |0>. sz then sx: sz is certain, sx splits evenly, two cells
  // of 1/2. sx then sz: four cells of 1/4. Total variation 1/2.
  const auto sc = make_scenario(ket({1.0, 0.0}), Hamiltonian::zero(2), {sigma_z_csco(), sigma_x_csco()});
  const std::uint64_t runs = 40000;
  const auto a = sequential_experiment(sc, {{"sz", 0.0, 1.0}, {"sx", 1.0, 2.0}}, runs, 1);
  const auto b = sequential_experiment(sc, {{"sx", 0.0, 1.0}, {"sz", 1.0, 2.0}}, runs, 2);

  const auto ja = joint_by_observable(a);
  const auto jb = joint_by_observable(b);
  CHECK(ja.size() == 2);
  CHECK(jb.size() == 4);
  for (const auto& [key, p] : ja) {
    CHECK(key.front().first == "sx");
    CHECK(std::abs(p - 0.5) <= 4.0 * std::sqrt(0.25 / runs));
  }
  for (const auto& [key, p] : jb) CHECK(std::abs(p - 0.25) <= 4.0 * std::sqrt(0.1875 / runs));

  const auto tv = total_variation(a, b);
  CHECK(tv.standard_error > 0.0);
  CHECK(std::abs(tv.distance - 0.5) <= 3.0 * tv.standard_error);

  // Exact oracle on the idealized distributions.
  using O = ObservableOutcome;
  const std::map<O, double> ideal_a{{O{{"sx", 0}, {"sz", 0}}, 0.5}, {O{{"sx", 1}, {"sz", 0}}, 0.5}};
  std::map<O, double> ideal_b;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) ideal_b[O{{"sx", i}, {"sz", j}}] = 0.25;
  }
  CHECK(total_variation(ideal_a, ideal_b) == Approx(0.5).margin(1e-15));
  CHECK(total_variation(ideal_a, ideal_a) == 0.0);
}

TEST_CASE("experiments are reproducible and logged") {
  const auto sc = make_scenario(ket({1.0, 1.0}), Hamiltonian(0.5 * pauli_x()), {sigma_z_csco(), sigma_x_csco()});
  const std::vector<MeasurementStep> steps{{"sz", 0.0, 1.0}, {"sx", 1.5, 1.5}, {"sz", 2.0, 4.0}};
  const auto a = sequential_experiment(sc, steps, 500, 9, true);
  const auto b = sequential_experiment(sc, steps, 500, 9, true);
  CHECK(a.counts == b.counts);
  REQUIRE(a.log.size() == 500);
  for (const auto& run : a.log) {
    REQUIRE(run.size() == 3);
    CHECK(run[0].time > 0.0);
    CHECK(run[0].time <= 1.0);
    CHECK(run[1].time == 1.5);
    CHECK(run[2].time > 2.0);
  }
  CHECK(sequential_experiment(sc, steps, 500, 10).counts != a.counts);
}

TEST_CASE("measurement rejections") {
  const auto sc = make_scenario(ket({1.0, 0.0}), Hamiltonian::zero(2), {sigma_z_csco()});
  const SystemUnderObservation system(sc);
  CHECK_THROWS_AS(measure(system, "nope", 0.5), std::invalid_argument);
  CHECK_THROWS_AS(measure(measure(system, "sz", 0.5).second, "sz", 0.4), std::invalid_argument);
  CHECK_THROWS_AS(sequential_experiment(sc, {}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sequential_experiment(sc, {{"sz", 0.0, 1.0}}, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sequential_experiment(sc, {{"sz", 0.0, 1.0}, {"sz", 0.5, 2.0}}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sequential_experiment(sc, {{"sz", 1.0, 1.0}, {"sz", 1.0, 1.0}}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(sequential_experiment(sc, {{"sz", 2.0, 1.0}}, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(SystemUnderObservation(make_scenario(ket({1.0, 0.0}), Hamiltonian::zero(2), {})),
                  std::invalid_argument);
}
