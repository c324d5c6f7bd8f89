#pragma once

// Invariant batteries for every module, runnable from the command line.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace ergodic::cli {

struct InvariantCheck {
  std::string module;
  std::string name;
  double tolerance = 0.0;
  double worst = 0.0;
  std::uint64_t cases = 0;
  std::string worst_case;  // inputs of the worst case, for reproduction
  bool passed() const { return worst <= tolerance; }
};

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  int trials = 200;
  std::string inject_fault;  // "" or "coverage"
};

std::vector<InvariantCheck> verify_suite(const VerifyOptions& options);

/// One line per invariant; returns true when all pass.
bool print_report(const std::vector<InvariantCheck>& checks, std::ostream& out);

}  // namespace ergodic::cli
