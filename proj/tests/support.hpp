#pragma once

// Small fixtures shared by the unit and acceptance tests.

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "ergodic/hilbert.hpp"
#include "ergodic/random_inputs.hpp"
#include "ergodic/rng.hpp"

namespace ergodic::testing {

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Csco sigma_z_csco() { return Csco::with_default_labels("sz", ComplexMatrix::Identity(2, 2), {1.0, -1.0}); }

/// Columns |+> and |->.
inline Csco sigma_x_csco() {
  ComplexMatrix b(2, 2);
  const double s = std::numbers::sqrt2 / 2.0;
  b << s, s, s, -s;
  return Csco::with_default_labels("sx", b, {1.0, -1.0});
}

inline QuantumState ket(std::initializer_list<Complex> amplitudes) {
  ComplexVector v(static_cast<Eigen::Index>(amplitudes.size()));
  Eigen::Index i = 0;
  for (auto a : amplitudes) v[i++] = a;
  return make_state(v);
}

}  // namespace ergodic::testing
