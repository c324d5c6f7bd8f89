#include "runner.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ergodic/ergodic_stats.hpp"
#include "ergodic/errors.hpp"
#include "ergodic/microstate.hpp"
#include "ergodic/records.hpp"
#include "ergodic/rng.hpp"

namespace ergodic::cli {

namespace {

std::string hex64(std::uint64_t x) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << x;
  return out.str();
}

// Concatenates record blocks that share a header row.
std::string concat_records(const std::vector<std::string>& blocks) {
  std::string out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    out += i == 0 ? b : b.substr(b.find('\n') + 1);
  }
  return out;
}

void check_strict(bool strict, int events, const std::string& where) {
  if (strict && events > 0) {
    throw InvariantViolation("strict-float", where + ": " + std::to_string(events) + " renormalization event(s)");
  }
}

JumpTrajectory run_trajectory(const ScenarioConfig& config, const ExperimentConfig& e, bool strict) {
  const auto& sc = *config.scenario;
  auto t = trajectory(sc.state, sc.hamiltonian, sc.csco(e.csco), sc.scheduler_for(e.csco), e.windows,
                      config.window_cap);
  check_strict(strict, t.renormalization_events, "experiment '" + e.name + "'");
  return t;
}

std::string alpha_label(const char* name, double x) { return std::string(name) + "=" + format_double(x); }

}  // namespace

ExperimentResult run_experiment(const ScenarioConfig& config, const ExperimentConfig& e, bool strict) {
  const auto& sc = *config.scenario;
  ExperimentResult out{e.name, {}};
  const std::string prefix = e.name + ".";

  switch (e.type) {
    case ExperimentType::trajectory: {
      const auto t = run_trajectory(config, e, strict);
      std::vector<std::string> parts;
      for (const auto& p : t.partitions) parts.push_back(partition_records(p));
      out.artifacts.push_back({prefix + "trajectory.csv", trajectory_records(t, sc.csco(e.csco))});
      out.artifacts.push_back({prefix + "measures.csv", window_measure_records(t)});
      out.artifacts.push_back({prefix + "partitions.csv", concat_records(parts)});
      break;
    }
    case ExperimentType::born_sampling: {
      const auto t = run_trajectory(config, e, strict);
      const auto d = sample_born(t, e.samples, e.seed, e.window);
      const auto& part = t.partitions[static_cast<std::size_t>(e.window)];
      std::vector<StatsRecord> rows;
      for (std::size_t k = 0; k < d.counts.size(); ++k) {
        const double exact = part.measure(k);
        rows.push_back({e.name, std::to_string(k), d.estimates[k], d.standard_errors[k], exact, d.estimates[k] - exact});
      }
      out.artifacts.push_back({prefix + "stats.csv", stats_records(rows)});
      break;
    }
    case ExperimentType::offset_average: {
      const auto t = run_trajectory(config, e, strict);
      const auto& csco = sc.csco(e.csco);
      std::vector<StatsRecord> rows;
      for (double alpha : e.alphas) {
        const double avg = offset_window_average(t, alpha, csco, e.member);
        const auto psi = evolve(sc.state, sc.hamiltonian, alpha);
        check_strict(strict, psi.renormalization_events(), "experiment '" + e.name + "'");
        const double exact = expectation(psi, csco, e.member);
        rows.push_back({e.name, alpha_label("alpha", alpha), avg, 0.0, exact, avg - exact});
      }
      out.artifacts.push_back({prefix + "stats.csv", stats_records(rows)});
      break;
    }
    case ExperimentType::sub_tau: {
      const auto t = run_trajectory(config, e, strict);
      std::vector<StatsRecord> rows;
      for (std::size_t i = 0; i < e.deltas.size(); ++i) {
        const double delta = e.deltas[i];
        const auto est = sub_tau_correlation(t, delta, e.pairs, mix_seed(e.seed, i));
        const double exact = same_outcome_fraction(t, delta);
        rows.push_back({e.name, alpha_label("delta", delta), est.fraction, est.standard_error, exact,
                        est.fraction - exact});
      }
      out.artifacts.push_back({prefix + "stats.csv", stats_records(rows)});
      break;
    }
    case ExperimentType::sequential_measurement: {
      const bool keep = e.log || strict;
      const auto scenario = config.scenario;
      const auto check = [&](const SequenceDistribution& d) {
        for (const auto& run : d.log) {
          for (const auto& r : run) check_strict(strict, r.pre_state.renormalization_events(), "experiment '" + e.name + "'");
        }
      };
      const auto a = sequential_experiment(scenario, e.steps, e.runs, e.seed, keep);
      check(a);
      out.artifacts.push_back({prefix + "joint.csv", joint_distribution_records(a)});
      if (e.log) out.artifacts.push_back({prefix + "log.csv", measurement_log_records(a)});
      if (!e.compare.empty()) {
        const auto b = sequential_experiment(scenario, e.compare, e.runs, mix_seed(e.seed, 1), keep);
        check(b);
        out.artifacts.push_back({prefix + "compare.joint.csv", joint_distribution_records(b)});
        if (e.log) out.artifacts.push_back({prefix + "compare.log.csv", measurement_log_records(b)});
        const auto tv = total_variation(a, b);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out.artifacts.push_back(
            {prefix + "stats.csv", stats_records(std::vector<StatsRecord>{StatsRecord{e.name, "total_variation", tv.distance, tv.standard_error, nan, nan}})});
      }
      break;
    }
    case ExperimentType::qgrid: {
      const auto& q = e.qgrid;
      const auto wf = [&] {
        if (q.wavefunction_file) return GridWavefunction::load(*q.wavefunction_file, q.lattice);
        const double h = q.lattice.planck_step / static_cast<double>(q.points_per_cell);
        // Grid nodes are lattice-aligned: snap lo down and hi up to whole cells.
        const double lo = q.lattice.cell_lo(static_cast<long>(std::floor((q.grid_lo - q.lattice.origin) / q.lattice.planck_step)));
        const double hi = q.lattice.cell_lo(static_cast<long>(std::ceil((q.grid_hi - q.lattice.origin) / q.lattice.planck_step)));
        const auto count = static_cast<std::size_t>(std::llround((hi - lo) / h)) + 1;
        const double mu = q.gaussian_center;
        const double sigma = q.gaussian_width;
        const double norm = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
        return GridWavefunction::sample(
            [&](double x) { return Complex(norm * std::exp(-(x - mu) * (x - mu) / (4.0 * sigma * sigma)), 0.0); }, lo, h,
            count, q.lattice);
      }();
      const auto pp = position_partition(wf, q.center_cell, q.window, q.scheduler);
      out.artifacts.push_back({prefix + "pr.csv", cell_probability_records(window_cell_probabilities(wf, q.center_cell))});
      out.artifacts.push_back({prefix + "partition.csv", partition_records(pp.partition)});
      break;
    }
  }
  return out;
}

std::vector<ExperimentResult> run_all(const ScenarioConfig& config, const RunOptions& options) {
  std::vector<ExperimentResult> results;
  const auto& blocks = config.experiments;
  const std::size_t width = std::max(1u, options.threads);
  for (std::size_t first = 0; first < blocks.size(); first += width) {
    const std::size_t last = std::min(blocks.size(), first + width);
    if (width == 1) {
      results.push_back(run_experiment(config, blocks[first], options.strict_float));
      continue;
    }
    std::vector<std::future<ExperimentResult>> batch;
    for (std::size_t i = first; i < last; ++i) {
      batch.push_back(std::async(std::launch::async, [&, i] { return run_experiment(config, blocks[i], options.strict_float); }));
    }
    for (auto& f : batch) results.push_back(f.get());
  }
  return results;
}

std::string manifest(const ScenarioConfig& config, const std::vector<ExperimentResult>& results,
                     const RunOptions& options, const std::string& generated_at) {
  nlohmann::ordered_json m;
  m["tool"] = "ergodic-run";
  m["version"] = kToolVersion;
  m["config"] = {{"file", config.source}, {"fnv1a64", hex64(config.hash)}};
  m["seed"] = config.seed;
  m["strict_float"] = options.strict_float;
  m["rng"] = "mt19937_64, 53-bit doubles, splitmix64 sub-seeds";
  auto& list = m["experiments"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& e = config.experiments[i];
    nlohmann::ordered_json entry{{"name", e.name}, {"type", std::string(to_string(e.type))}, {"seed", e.seed}};
    auto& files = entry["artifacts"] = nlohmann::ordered_json::array();
    for (const auto& a : results[i].artifacts) files.push_back({{"file", a.file}, {"fnv1a64", hex64(fnv1a(a.content))}});
    list.push_back(std::move(entry));
  }
  m["generated_at"] = generated_at;
  return m.dump(2) + "\n";
}

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

void mark_failed(const std::filesystem::path& dir, const std::string& reason) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream out(dir / kFailedMarker, std::ios::trunc);
  out << reason << '\n';
}

}  // namespace

int run_scenario(const std::filesystem::path& config_path, const RunOptions& options, std::ostream& err) {
  ScenarioConfig config;
  try {
    config = load_config(config_path);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 4;
  }
  std::filesystem::path out_dir = options.out_dir;
  if (out_dir.empty()) out_dir = config_path.parent_path() / config.output;

  std::vector<ExperimentResult> results;
  try {
    results = run_all(config, options);
  } catch (const InvariantViolation& e) {
    err << "error: invariant '" << e.invariant() << "' violated: " << e.what() << '\n';
    mark_failed(out_dir, "invariant " + e.invariant() + ": " + e.what());
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << config.source << ": " << e.what() << '\n';
    mark_failed(out_dir, e.what());
    return 2;
  }

  try {
    std::filesystem::create_directories(out_dir);
    // The marker goes first and is removed last, so an interrupted write
    // never looks like a finished run.
    write_file(out_dir / kFailedMarker, "incomplete\n");
    for (const auto& r : results) {
      for (const auto& a : r.artifacts) write_file(out_dir / a.file, a.content);
    }
    write_file(out_dir / "manifest.json", manifest(config, results, options, utc_now()));
    std::filesystem::remove(out_dir / kFailedMarker);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    mark_failed(out_dir, e.what());
    return 4;
  }
  return 0;
}

std::string dump_partition(const ScenarioConfig& config, const std::string& csco_id, long window) {
  const auto& sc = *config.scenario;
  if (window < 0) throw std::out_of_range("dump-partition: window must be non-negative");
  return partition_records(window_partition(sc.state, sc.hamiltonian, sc.csco(csco_id), sc.scheduler_for(csco_id), window));
}

}  // namespace ergodic::cli
