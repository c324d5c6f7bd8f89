#pragma once

#include <stdexcept>
#include <string>

namespace ergodic {

// Thrown when a constructed object fails one of its structural invariants
// (coverage, disjointness, normalization, ...). The invariant name is kept
// separately so drivers can report it without parsing the message.
class InvariantViolation : public std::runtime_error {
 public:
  InvariantViolation(std::string invariant, const std::string& detail)
      : std::runtime_error(invariant + ": " + detail), invariant_(std::move(invariant)) {}

  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

}  // namespace ergodic
