#pragma once

// Finite-dimensional states, observables and unitary evolution.
//
// Time is dimensionless throughout: u = t / tau, where tau is the Compton
// time of the particle. Hamiltonians are supplied in units of hbar / tau, so
// the propagator over a span du is exp(-i H du).

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ergodic {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Multi-index naming one joint eigenvector of a CSCO, e.g. (n, l, m).
using Label = std::vector<int>;

inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kUnitarityTolerance = 1e-10;
inline constexpr double kHermiticityTolerance = 1e-10;

/// Conversion between SI time/energy and the dimensionless internal units.
struct PhysicalScales {
  double tau = 1.0;   // Compton time h / (m c^2), seconds
  double hbar = 1.0;  // action units

  static PhysicalScales make(double tau, double hbar);

  double to_dimensionless_time(double seconds) const { return seconds / tau; }
  double to_seconds(double u) const { return u * tau; }
  double to_dimensionless_energy(double energy) const { return energy * tau / hbar; }
};

class Csco;
class Hamiltonian;

/// Normalized amplitude vector in the computational basis.
class QuantumState {
 public:
  /// Normalizes a copy of `amplitudes`; rejects the zero vector.
  static QuantumState make(ComplexVector amplitudes);

  /// The basis column |O_k> of `csco`, taken verbatim (no rescaling).
  static QuantumState basis_column(const Csco& csco, std::size_t k);

  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  double norm() const { return amplitudes_.norm(); }

  /// Factor applied by make() to reach unit norm (1 when already normalized).
  double normalization_factor() const noexcept { return normalization_factor_; }

  /// Number of times evolution drift beyond 1e-9 was corrected along the
  /// history that produced this state.
  int renormalization_events() const noexcept { return renormalization_events_; }

 private:
  QuantumState(ComplexVector amplitudes, double factor, int events)
      : amplitudes_(std::move(amplitudes)), normalization_factor_(factor), renormalization_events_(events) {}

  ComplexVector amplitudes_;
  double normalization_factor_ = 1.0;
  int renormalization_events_ = 0;

  friend QuantumState evolve(const QuantumState&, const Hamiltonian&, double);
};

/// Free-function spelling of QuantumState::make.
QuantumState make_state(ComplexVector amplitudes);

/// A complete set of commuting observables, represented by its joint
/// eigenbasis. Column k of `basis` is |O_k>; `eigenvalues[k]` holds one real
/// value per member observable (E, L^2, L_z, ...). Labels, not eigenvalues,
/// identify outcomes, so degenerate spectra are fine.
class Csco {
 public:
  Csco(std::string id, ComplexMatrix basis, std::vector<Label> labels,
       std::vector<std::vector<double>> eigenvalues);

  /// Single-member CSCO with labels (0), (1), ...
  static Csco with_default_labels(std::string id, ComplexMatrix basis, std::vector<double> eigenvalues);

  const std::string& id() const noexcept { return id_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(basis_.cols()); }
  std::size_t member_count() const noexcept { return members_; }
  const ComplexMatrix& basis() const noexcept { return basis_; }
  ComplexVector column(std::size_t k) const;
  const std::vector<Label>& labels() const noexcept { return labels_; }
  const Label& label(std::size_t k) const { return labels_.at(k); }
  const std::vector<double>& eigenvalues(std::size_t k) const { return eigenvalues_.at(k); }
  double eigenvalue(std::size_t k, std::size_t member) const;

  /// Position of `label` in the basis; throws std::out_of_range if absent.
  std::size_t index_of(const Label& label) const;

  /// Matrix of one member observable: sum_k a_k |O_k><O_k|.
  ComplexMatrix observable(std::size_t member) const;

 private:
  std::string id_;
  ComplexMatrix basis_;
  std::vector<Label> labels_;
  std::vector<std::vector<double>> eigenvalues_;
  std::size_t members_ = 0;
};

/// Time-independent Hermitian generator, diagonalized once at construction.
class Hamiltonian {
 public:
  explicit Hamiltonian(ComplexMatrix matrix);

  static Hamiltonian zero(std::size_t dimension);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const Eigen::VectorXd& energies() const noexcept { return energies_; }
  const ComplexMatrix& eigenvectors() const noexcept { return eigenvectors_; }

  /// exp(-i H du).
  ComplexMatrix propagator(double du) const;

 private:
  ComplexMatrix matrix_;
  Eigen::VectorXd energies_;
  ComplexMatrix eigenvectors_;
};

/// U(du) |state>, du >= 0. Drift above 1e-9 is renormalized and counted.
QuantumState evolve(const QuantumState& state, const Hamiltonian& hamiltonian, double du);

/// p_k = |<O_k|Psi>|^2, in basis-column order.
std::vector<double> born_probabilities(const QuantumState& state, const Csco& csco);

/// sum_k p_k a_k for one member observable of the CSCO.
double expectation(const QuantumState& state, const Csco& csco, std::size_t member);

/// Max-entry norm of [A, B] for one member of each CSCO.
double commutator_norm(const Csco& a, const Csco& b, std::size_t member_a, std::size_t member_b);

/// Largest off-diagonal modulus of B^dagger H B. Zero iff H commutes with
/// every projector |O_k><O_k|, i.e. every Born probability of the CSCO is
/// conserved.
double commutator_norm(const Hamiltonian& hamiltonian, const Csco& csco);

/// True when commutator_norm(H, csco) <= 1e-10.
bool is_conserved(const Hamiltonian& hamiltonian, const Csco& csco);

}  // namespace ergodic
