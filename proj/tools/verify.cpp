#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

#include "ergodic/ergodic_stats.hpp"
#include "ergodic/measurement.hpp"
#include "ergodic/microstate.hpp"
#include "ergodic/qgrid.hpp"
#include "ergodic/random_inputs.hpp"
#include "ergodic/records.hpp"

namespace ergodic::cli {

namespace {

class Battery {
 public:
  InvariantCheck& add(const std::string& module, const std::string& name, double tolerance) {
    checks_.push_back({module, name, tolerance, 0.0, 0, ""});
    return checks_.back();
  }
  std::vector<InvariantCheck> take() { return {checks_.begin(), checks_.end()}; }

 private:
  std::deque<InvariantCheck> checks_;  // stable references
};

void record(InvariantCheck& c, double deviation, const std::string& inputs) {
  ++c.cases;
  if (std::isnan(deviation)) deviation = std::numeric_limits<double>::infinity();
  if (deviation > c.worst || (c.worst_case.empty() && c.cases == 1)) {
    c.worst = std::max(c.worst, deviation);
    c.worst_case = inputs;
  }
}

std::string describe(std::uint64_t seed, int trial, std::size_t d, const std::string& extra = "") {
  std::ostringstream out;
  out << "seed=" << seed << " trial=" << trial << " d=" << d;
  if (!extra.empty()) out << ' ' << extra;
  return out.str();
}

SchedulerSpec random_scheduler(Rng& rng) {
  SchedulerSpec s;
  s.kind = static_cast<SchedulerKind>(rng.below(3));
  s.max_subintervals = 1 + static_cast<int>(rng.below(5));
  s.seed = rng.next();
  s.offset = rng.uniform();
  return s;
}

void partition_checks(InvariantCheck& disjoint, InvariantCheck& coverage, InvariantCheck& measure,
                      const WindowPartition& p, const std::vector<double>& probs, const std::string& inputs) {
  const auto audit = audit_partition(p);
  record(disjoint, audit.disjoint ? 0.0 : 1.0, inputs);
  record(coverage, audit.coverage_gap, inputs);
  double worst = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) worst = std::max(worst, std::abs(p.measure(k) - probs[k]));
  record(measure, worst, inputs);
}

}  // namespace

std::vector<InvariantCheck> verify_suite(const VerifyOptions& options) {
  Battery b;
  Rng rng(options.seed);
  const int n = options.trials;

  // hilbert
  auto& norm = b.add("hilbert-core", "unit-norm-after-evolution", 1e-9);
  auto& born = b.add("hilbert-core", "born-completeness", 1e-10);
  for (int t = 0; t < n; ++t) {
    const std::size_t d = 2 + rng.below(15);
    const auto psi = random_state(rng, d);
    const Hamiltonian h(random_hermitian(rng, d, 3.0));
    const double du = 50.0 * rng.uniform();
    const auto evolved = evolve(psi, h, du);
    record(norm, std::abs(evolved.norm() - 1.0), describe(options.seed, t, d));
    double sum = 0.0;
    for (double p : born_probabilities(evolved, random_csco(rng, d))) sum += p;
    record(born, std::abs(sum - 1.0), describe(options.seed, t, d));
  }

  // time-partition
  auto& disjoint = b.add("time-partition", "disjointness", 0.0);
  auto& coverage = b.add("time-partition", "coverage", 1e-9);
  auto& label_measure = b.add("time-partition", "label-measure", 1e-9);
  auto& single = b.add("time-partition", "one-active-label", 0.0);
  auto& idempotent = b.add("time-partition", "step-idempotency", 0.0);
  for (int t = 0; t < n; ++t) {
    const std::size_t d = 2 + rng.below(15);
    const auto probs = random_probabilities(rng, d);
    const auto s = random_scheduler(rng);
    const long window = static_cast<long>(rng.below(100));
    const auto p = build_partition(probs, window, s);
    const auto inputs = describe(options.seed, t, d, "scheduler=" + std::string(to_string(s.kind)) + " window=" + std::to_string(window));
    partition_checks(disjoint, coverage, label_measure, p, probs, inputs);
    for (int i = 0; i < 100; ++i) {
      const double u = rng.uniform_left_open(p.start(), p.end());
      int active = 0;
      int mismatches = 0;
      for (std::size_t j = 0; j < d; ++j) {
        const int sj = step_function(p, j, u);
        active += sj;
        for (std::size_t k = 0; k < d; ++k) {
          const int delta = j == k ? 1 : 0;
          if (sj * step_function(p, k, u) != delta * sj) ++mismatches;
        }
      }
      record(single, std::abs(active - 1), inputs);
      record(idempotent, mismatches, inputs);
    }
  }
  if (options.inject_fault == "coverage") {
    using Piece = WindowPartition::Piece;
    const auto broken = WindowPartition::unchecked(0, 0.0, 1.0, {0.5, 0.5}, {Piece{{0.0, 0.4}, 0}, Piece{{0.5, 1.0}, 1}});
    partition_checks(disjoint, coverage, label_measure, broken, {0.5, 0.5},
                     "injected fault: pieces (0,0.4]->0 (0.5,1]->1, p=(0.5,0.5)");
  }

  // microstate
  auto& tiling = b.add("microstate", "trajectory-tiling", 0.0);
  auto& overlap = b.add("microstate", "overlap-sum", 1e-12);
  for (int t = 0; t < n / 4; ++t) {
    const std::size_t d = 2 + rng.below(6);
    const auto c = random_csco(rng, d);
    const auto s = random_scheduler(rng);
    const auto traj = trajectory(random_state(rng, d), Hamiltonian(random_hermitian(rng, d)), c, s, 20);
    double gap = std::abs(traj.events.front().interval.lo);
    for (std::size_t i = 1; i < traj.events.size(); ++i) {
      gap = std::max(gap, std::abs(traj.events[i].interval.lo - traj.events[i - 1].interval.hi));
    }
    gap = std::max(gap, std::abs(traj.events.back().interval.hi - 20.0));
    const auto inputs = describe(options.seed, t, d, "windows=20 scheduler=" + std::string(to_string(s.kind)));
    record(tiling, gap, inputs);
    for (int i = 0; i < 50; ++i) {
      const double u = rng.uniform_left_open(0.0, 20.0);
      const auto& part = traj.partitions[static_cast<std::size_t>(std::ceil(u)) - 1];
      const auto m = microstate_at(part, c, u);
      Complex sum = 0.0;
      for (std::size_t k = 0; k < d; ++k) sum += c.column(k).dot(m.basis_vector);
      record(overlap, std::abs(sum - 1.0), inputs);
    }
  }

  // ergodic-stats
  auto& step_avg = b.add("ergodic-stats", "window-average-is-born", 1e-9);
  auto& value_avg = b.add("ergodic-stats", "window-average-is-expectation", 1e-9);
  auto& periodic = b.add("ergodic-stats", "conserved-periodicity", 0.0);
  for (int t = 0; t < n; ++t) {
    const std::size_t d = 2 + rng.below(15);
    const auto c = random_csco(rng, d);
    const auto psi = random_state(rng, d);
    const auto probs = born_probabilities(psi, c);
    const auto part = build_partition(probs, 0, random_scheduler(rng));
    double worst = 0.0;
    for (std::size_t k = 0; k < d; ++k) worst = std::max(worst, std::abs(window_average_step(part, k) - probs[k]));
    record(step_avg, worst, describe(options.seed, t, d));
    record(value_avg, std::abs(window_average_value(part, c, 0) - expectation(psi, c, 0)), describe(options.seed, t, d));
  }
  for (int t = 0; t < 10; ++t) {
    const std::size_t d = 2 + rng.below(6);
    const auto basis = random_unitary(rng, d);
    Eigen::VectorXcd e(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < e.size(); ++i) e[i] = gaussian(rng);
    const auto c = Csco::with_default_labels("c", basis, std::vector<double>(d, 0.0));
    const auto traj = trajectory(random_state(rng, d), Hamiltonian(basis * e.asDiagonal() * basis.adjoint()), c,
                                 random_scheduler(rng), 200);
    const auto& base = traj.partitions.front().pieces();
    double worst = 0.0;
    for (std::size_t w = 1; w < traj.partitions.size(); ++w) {
      const auto& pieces = traj.partitions[w].pieces();
      if (pieces.size() != base.size()) {
        worst = std::numeric_limits<double>::infinity();
        break;
      }
      for (std::size_t i = 0; i < pieces.size(); ++i) {
        worst = std::max(worst, std::abs(pieces[i].interval.hi - (static_cast<double>(w) + base[i].interval.hi)));
        if (pieces[i].label != base[i].label) worst = std::numeric_limits<double>::infinity();
      }
    }
    record(periodic, worst, describe(options.seed, t, d, "windows=200"));
  }

  // measurement
  auto& collapse = b.add("measurement", "collapse-idempotency", 0.0);
  auto& projector = b.add("measurement", "projector-idempotency", 1e-12);
  for (int t = 0; t < n / 4; ++t) {
    const std::size_t d = 2 + rng.below(8);
    const auto c = random_csco(rng, d, "c");
    const auto sc = std::make_shared<const Scenario>(Scenario{random_state(rng, d), Hamiltonian::zero(d), {c}, {}});
    const double u1 = rng.uniform_left_open(0.0, 3.0);
    const auto [first, after] = measure(SystemUnderObservation(sc), "c", u1);
    const double u2 = rng.uniform_left_open(u1, u1 + 3.0);
    const auto second = measure(after, "c", u2).first;
    record(collapse, first.outcome_label == second.outcome_label ? 0.0 : 1.0,
           describe(options.seed, t, d, "u1=" + format_double(u1) + " u2=" + format_double(u2)));

    const auto psi = random_state(rng, d);
    const auto part = build_partition(born_probabilities(psi, c), 0, SchedulerSpec{});
    const double u = rng.uniform_left_open(0.0, 1.0);
    const ComplexVector once = measurement_operator_apply(psi, part, c, u);
    const ComplexVector twice = measurement_operator_apply(once, part, c, u);
    record(projector, (once - twice).cwiseAbs().maxCoeff(), describe(options.seed, t, d));
  }

  // qgrid
  auto& cells = b.add("qgrid", "window-normalization", 1e-8);
  auto& qpart = b.add("qgrid", "position-partition-valid", 1e-9);
  for (int t = 0; t < 10; ++t) {
    const long m = 1 + 2 * static_cast<long>(rng.below(4));
    const PlanckLattice lattice{1.0, static_cast<double>(m), 0.0};
    const double mu = static_cast<double>(m) / 2.0 + rng.uniform() - 0.5;
    const double sigma = 0.3 + rng.uniform();
    const double norm_factor = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
    const auto wf = GridWavefunction::sample(
        [&](double q) { return Complex(norm_factor * std::exp(-(q - mu) * (q - mu) / (4.0 * sigma * sigma)), 0.0); },
        -10.0, 1.0 / 64, static_cast<std::size_t>(64 * (20 + m)) + 1, lattice);
    const long center = (m - 1) / 2;
    double total = 0.0;
    for (const auto& cp : window_cell_probabilities(wf, center)) total += cp.probability;
    std::ostringstream inputs;
    inputs << "seed=" << options.seed << " trial=" << t << " m=" << m << " mu=" << format_double(mu)
           << " sigma=" << format_double(sigma);
    record(cells, std::abs(total - 1.0), inputs.str());
    const auto pp = position_partition(wf, center, 0, random_scheduler(rng));
    const auto audit = audit_partition(pp.partition);
    record(qpart, audit.disjoint ? std::max(audit.coverage_gap, audit.max_measure_error)
                                 : std::numeric_limits<double>::infinity(),
           inputs.str());
  }

  return b.take();
}

bool print_report(const std::vector<InvariantCheck>& checks, std::ostream& out) {
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.passed();
    out << (c.passed() ? "PASS " : "FAIL ") << std::left << std::setw(15) << c.module << ' ' << std::setw(30) << c.name
        << " cases=" << std::setw(6) << c.cases << " worst=" << format_double(c.worst)
        << " tol=" << format_double(c.tolerance) << '\n';
    if (!c.passed()) out << "     failing case: " << c.worst_case << '\n';
  }
  out << (all ? "all invariants hold\n" : "invariant failures found\n");
  return all;
}

}  // namespace ergodic::cli
