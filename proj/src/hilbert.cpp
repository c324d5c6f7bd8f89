#include "ergodic/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ergodic {

namespace {

void require_dimension(std::size_t expected, std::size_t actual, const char* what) {
  if (expected != actual) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(expected) +
                                " vs " + std::to_string(actual) + ")");
  }
}

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

PhysicalScales PhysicalScales::make(double tau, double hbar) {
  if (!(tau > 0.0) || !(hbar > 0.0)) {
    throw std::invalid_argument("PhysicalScales: tau and hbar must be positive");
  }
  return PhysicalScales{tau, hbar};
}

QuantumState QuantumState::make(ComplexVector amplitudes) {
  if (amplitudes.size() < 1) {
    throw std::invalid_argument("make_state: dimension must be at least 1");
  }
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("make_state: amplitude vector has zero or non-finite norm");
  }
  if (norm == 1.0) return QuantumState(std::move(amplitudes), 1.0, 0);
  const double factor = 1.0 / norm;
  amplitudes *= factor;
  return QuantumState(std::move(amplitudes), factor, 0);
}

QuantumState QuantumState::basis_column(const Csco& csco, std::size_t k) {
  return QuantumState(csco.column(k), 1.0, 0);
}

QuantumState make_state(ComplexVector amplitudes) { return QuantumState::make(std::move(amplitudes)); }

Csco::Csco(std::string id, ComplexMatrix basis, std::vector<Label> labels, std::vector<std::vector<double>> eigenvalues)
    : id_(std::move(id)), basis_(std::move(basis)), labels_(std::move(labels)), eigenvalues_(std::move(eigenvalues)) {
  const auto d = static_cast<std::size_t>(basis_.cols());
  if (d == 0 || basis_.rows() != basis_.cols()) {
    throw std::invalid_argument("CSCO '" + id_ + "': basis must be a non-empty square matrix");
  }
  if (labels_.size() != d || eigenvalues_.size() != d) {
    throw std::invalid_argument("CSCO '" + id_ + "': labels, eigenvalues and basis columns must have equal length");
  }
  const double defect = max_abs(basis_.adjoint() * basis_ - ComplexMatrix::Identity(basis_.rows(), basis_.cols()));
  if (defect > kUnitarityTolerance) {
    throw std::invalid_argument("CSCO '" + id_ + "': basis is not unitary (max |B^dag B - I| = " +
                                std::to_string(defect) + ")");
  }
  std::set<Label> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw std::invalid_argument("CSCO '" + id_ + "': empty label");
    if (!seen.insert(l).second) throw std::invalid_argument("CSCO '" + id_ + "': duplicate label");
  }
  members_ = eigenvalues_.front().size();
  if (members_ == 0) throw std::invalid_argument("CSCO '" + id_ + "': eigenvalue tuples must be non-empty");
  for (const auto& tuple : eigenvalues_) {
    if (tuple.size() != members_) {
      throw std::invalid_argument("CSCO '" + id_ + "': eigenvalue tuples must all have the same length");
    }
  }
}

Csco Csco::with_default_labels(std::string id, ComplexMatrix basis, std::vector<double> eigenvalues) {
  std::vector<Label> labels;
  std::vector<std::vector<double>> tuples;
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
    labels.push_back({static_cast<int>(k)});
    tuples.push_back({eigenvalues[k]});
  }
  return Csco(std::move(id), std::move(basis), std::move(labels), std::move(tuples));
}

ComplexVector Csco::column(std::size_t k) const {
  if (k >= dimension()) throw std::out_of_range("CSCO '" + id_ + "': label index out of range");
  return basis_.col(static_cast<Eigen::Index>(k));
}

double Csco::eigenvalue(std::size_t k, std::size_t member) const {
  if (member >= members_) throw std::out_of_range("CSCO '" + id_ + "': member index out of range");
  return eigenvalues_.at(k)[member];
}

std::size_t Csco::index_of(const Label& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw std::out_of_range("CSCO '" + id_ + "': unknown label");
  return static_cast<std::size_t>(it - labels_.begin());
}

ComplexMatrix Csco::observable(std::size_t member) const {
  if (member >= members_) throw std::out_of_range("CSCO '" + id_ + "': member index out of range");
  Eigen::VectorXcd diag(basis_.cols());
  for (Eigen::Index k = 0; k < diag.size(); ++k) diag[k] = eigenvalues_[static_cast<std::size_t>(k)][member];
  return basis_ * diag.asDiagonal() * basis_.adjoint();
}

Hamiltonian::Hamiltonian(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw std::invalid_argument("Hamiltonian: matrix must be non-empty and square");
  }
  const double asym = max_abs(matrix_ - matrix_.adjoint());
  if (asym > kHermiticityTolerance) {
    throw std::invalid_argument("Hamiltonian: matrix is not Hermitian (max |H - H^dag| = " + std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix_);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Hamiltonian: eigendecomposition failed");
  energies_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

Hamiltonian Hamiltonian::zero(std::size_t dimension) {
  const auto d = static_cast<Eigen::Index>(dimension);
  return Hamiltonian(ComplexMatrix::Zero(d, d));
}

ComplexMatrix Hamiltonian::propagator(double du) const {
  Eigen::VectorXcd phases(energies_.size());
  for (Eigen::Index i = 0; i < energies_.size(); ++i) phases[i] = std::polar(1.0, -energies_[i] * du);
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

QuantumState evolve(const QuantumState& state, const Hamiltonian& hamiltonian, double du) {
  require_dimension(hamiltonian.dimension(), state.dimension(), "evolve");
  if (!(du >= 0.0) || !std::isfinite(du)) throw std::invalid_argument("evolve: du must be finite and non-negative");
  if (du == 0.0) return state;

  // Rotate into the energy basis, apply phases, rotate back.
  const auto& v = hamiltonian.eigenvectors();
  ComplexVector coeffs = v.adjoint() * state.amplitudes();
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs[i] *= std::polar(1.0, -hamiltonian.energies()[i] * du);
  ComplexVector out = v * coeffs;

  int events = state.renormalization_events();
  const double norm = out.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    out /= norm;
    ++events;
  }
  return QuantumState(std::move(out), 1.0, events);
}

std::vector<double> born_probabilities(const QuantumState& state, const Csco& csco) {
  require_dimension(csco.dimension(), state.dimension(), "born_probabilities");
  const ComplexVector overlaps = csco.basis().adjoint() * state.amplitudes();
  std::vector<double> p(csco.dimension());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::norm(overlaps[static_cast<Eigen::Index>(k)]);
  return p;
}

double expectation(const QuantumState& state, const Csco& csco, std::size_t member) {
  if (member >= csco.member_count()) throw std::out_of_range("expectation: member index out of range");
  const auto p = born_probabilities(state, csco);
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) sum += p[k] * csco.eigenvalue(k, member);
  return sum;
}

double commutator_norm(const Csco& a, const Csco& b, std::size_t member_a, std::size_t member_b) {
  require_dimension(a.dimension(), b.dimension(), "commutator_norm");
  const ComplexMatrix oa = a.observable(member_a);
  const ComplexMatrix ob = b.observable(member_b);
  return max_abs(oa * ob - ob * oa);
}

double commutator_norm(const Hamiltonian& hamiltonian, const Csco& csco) {
  require_dimension(csco.dimension(), hamiltonian.dimension(), "commutator_norm");
  ComplexMatrix rotated = csco.basis().adjoint() * hamiltonian.matrix() * csco.basis();
  rotated.diagonal().setZero();
  return max_abs(rotated);
}

bool is_conserved(const Hamiltonian& hamiltonian, const Csco& csco) {
  return commutator_norm(hamiltonian, csco) <= kUnitarityTolerance;
}

}  // namespace ergodic
