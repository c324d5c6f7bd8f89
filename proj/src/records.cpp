#include "ergodic/records.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace ergodic {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (value == 0.0) return "0";  // folds -0
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

std::string format_label(const Label& label) {
  std::string out;
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (i) out += ':';
    out += std::to_string(label[i]);
  }
  return out;
}

std::string partition_records(const WindowPartition& partition) {
  std::ostringstream out;
  out << "window_index,label,lo,hi\n";
  for (const auto& piece : partition.pieces()) {
    out << partition.window_index() << ',' << piece.label << ',' << format_double(piece.interval.lo) << ','
        << format_double(piece.interval.hi) << '\n';
  }
  return out.str();
}

std::string trajectory_records(const JumpTrajectory& trajectory, const Csco& csco) {
  std::ostringstream out;
  out << "window,label,multi_index,lo,hi";
  for (std::size_t m = 0; m < csco.member_count(); ++m) out << ",eigenvalue_" << m;
  out << '\n';
  for (const auto& e : trajectory.events) {
    out << e.window << ',' << e.label << ',' << format_label(csco.label(e.label)) << ','
        << format_double(e.interval.lo) << ',' << format_double(e.interval.hi);
    for (double v : e.eigenvalues) out << ',' << format_double(v);
    out << '\n';
  }
  return out.str();
}

std::string window_measure_records(const JumpTrajectory& trajectory) {
  std::ostringstream out;
  out << "window,label,measure,probability\n";
  for (const auto& p : trajectory.partitions) {
    for (std::size_t k = 0; k < p.label_count(); ++k) {
      out << p.window_index() << ',' << k << ',' << format_double(p.measure(k)) << ','
          << format_double(p.probabilities()[k]) << '\n';
    }
  }
  return out.str();
}

std::string stats_records(const std::vector<StatsRecord>& records) {
  std::ostringstream out;
  out << "experiment,label,estimate,stderr,exact,deviation\n";
  for (const auto& r : records) {
    out << r.experiment << ',' << r.label << ',' << format_double(r.estimate) << ','
        << format_double(r.standard_error) << ',' << format_double(r.exact) << ',' << format_double(r.deviation)
        << '\n';
  }
  return out.str();
}

std::string measurement_log_records(const SequenceDistribution& distribution) {
  std::ostringstream out;
  out << "run_id,step,u,csco_id,outcome_label,multi_index,eigenvalues\n";
  for (std::size_t run = 0; run < distribution.log.size(); ++run) {
    const auto& records = distribution.log[run];
    for (std::size_t step = 0; step < records.size(); ++step) {
      const auto& r = records[step];
      out << run << ',' << step << ',' << format_double(r.time) << ',' << r.csco_id << ',' << r.outcome_label << ','
          << format_label(r.outcome_multi_index) << ',';
      for (std::size_t i = 0; i < r.outcome_eigenvalues.size(); ++i) {
        if (i) out << ';';
        out << format_double(r.outcome_eigenvalues[i]);
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string joint_distribution_records(const SequenceDistribution& distribution) {
  std::ostringstream out;
  out << "sequence,count,frequency\n";
  for (const auto& [labels, count] : distribution.counts) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (i) out << ';';
      out << distribution.csco_ids[i] << '=' << labels[i];
    }
    out << ',' << count << ','
        << format_double(static_cast<double>(count) / static_cast<double>(distribution.runs)) << '\n';
  }
  return out.str();
}

std::string cell_probability_records(const std::vector<CellProbability>& cells) {
  std::ostringstream out;
  out << "cell_index,q_lo,q_hi,probability\n";
  for (const auto& c : cells) {
    out << c.cell << ',' << format_double(c.q_lo) << ',' << format_double(c.q_hi) << ','
        << format_double(c.probability) << '\n';
  }
  return out.str();
}

}  // namespace ergodic
