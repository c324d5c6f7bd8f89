#pragma once

// Random inputs for property batteries: Gaussian vectors, Haar-ish unitaries
// via QR, Hermitian generators, probability vectors with exact zeros.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ergodic/hilbert.hpp"
#include "ergodic/rng.hpp"

namespace ergodic {

inline double gaussian(Rng& rng) {
  // Box-Muller; 1 - uniform() keeps the log argument in (0, 1].
  const double r = std::sqrt(-2.0 * std::log(1.0 - rng.uniform()));
  return r * std::cos(2.0 * std::numbers::pi * rng.uniform());
}

inline ComplexVector random_vector(Rng& rng, std::size_t d) {
  ComplexVector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(gaussian(rng), gaussian(rng));
  return v;
}

inline QuantumState random_state(Rng& rng, std::size_t d) { return make_state(random_vector(rng, d)); }

inline ComplexMatrix random_unitary(Rng& rng, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(gaussian(rng), gaussian(rng));
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

inline ComplexMatrix random_hermitian(Rng& rng, std::size_t d, double scale = 1.0) {
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(gaussian(rng), gaussian(rng));
  }
  return 0.5 * scale * (g + g.adjoint());
}

inline Csco random_csco(Rng& rng, std::size_t d, const std::string& id = "random") {
  std::vector<double> eig(d);
  for (auto& e : eig) e = gaussian(rng);
  return Csco::with_default_labels(id, random_unitary(rng, d), eig);
}

/// Probability vector with occasional exact zeros and one dominant entry.
inline std::vector<double> random_probabilities(Rng& rng, std::size_t d) {
  std::vector<double> p(d);
  double total = 0.0;
  for (auto& x : p) {
    x = rng.below(5) == 0 ? 0.0 : -std::log(1.0 - rng.uniform());
    total += x;
  }
  if (total == 0.0) {
    p[rng.below(d)] = 1.0;
    return p;
  }
  for (auto& x : p) x /= total;
  return p;
}

}  // namespace ergodic
