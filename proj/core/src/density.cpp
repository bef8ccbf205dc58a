#include "pqed/density.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace pqed {

DensityMatrix::DensityMatrix(SpacePtr space, DenseMatrix mat)
    : space_(std::move(space)), mat_(std::move(mat)) {
  if (!space_) throw std::invalid_argument("DensityMatrix: null space");
  if (mat_.rows() != space_->dim() || mat_.cols() != space_->dim()) {
    throw std::invalid_argument("DensityMatrix: dimension mismatch");
  }
}

DensityMatrix DensityMatrix::pure(const SpacePtr& space, const ComplexVector& psi) {
  if (!space) throw std::invalid_argument("DensityMatrix::pure: null space");
  if (psi.size() != space->dim()) {
    throw std::invalid_argument("DensityMatrix::pure: state vector dimension mismatch");
  }
  const double n2 = psi.squaredNorm();
  if (n2 <= 0.0) throw std::invalid_argument("DensityMatrix::pure: zero state vector");
  DenseMatrix m = (psi * psi.adjoint()) / n2;
  return DensityMatrix(space, std::move(m));
}

namespace {

DensityMatrix basis_projector(const SpacePtr& space, int photons, unsigned ground_bits,
                              const char* what) {
  int idx = space->position(photons, ground_bits);
  if (idx < 0) throw std::invalid_argument(std::string(what) + ": state outside retained basis");
  ComplexVector psi = ComplexVector::Zero(space->dim());
  psi[idx] = Complex(1.0, 0.0);
  return DensityMatrix::pure(space, psi);
}

}  // namespace

DensityMatrix DensityMatrix::ground(const SpacePtr& space) {
  if (!space) throw std::invalid_argument("DensityMatrix::ground: null space");
  const unsigned all_ground = (space->n_emitters() > 0)
                                  ? ((1u << space->n_emitters()) - 1u)
                                  : 0u;
  return basis_projector(space, 0, all_ground, "DensityMatrix::ground");
}

DensityMatrix DensityMatrix::single_photon(const SpacePtr& space) {
  if (!space) throw std::invalid_argument("DensityMatrix::single_photon: null space");
  if (space->n_max() < 1) {
    throw std::invalid_argument("DensityMatrix::single_photon: need n_max >= 1");
  }
  const unsigned all_ground = (space->n_emitters() > 0)
                                  ? ((1u << space->n_emitters()) - 1u)
                                  : 0u;
  return basis_projector(space, 1, all_ground, "DensityMatrix::single_photon");
}

DensityMatrix DensityMatrix::single_emitter_excited(const SpacePtr& space, int emitter) {
  if (!space) throw std::invalid_argument("DensityMatrix::single_emitter_excited: null space");
  if (emitter < 1 || emitter > space->n_emitters()) {
    throw std::invalid_argument("DensityMatrix::single_emitter_excited: emitter out of range");
  }
  const unsigned all_ground = (1u << space->n_emitters()) - 1u;
  const unsigned bits = all_ground & ~(1u << (space->n_emitters() - emitter));
  return basis_projector(space, 0, bits, "DensityMatrix::single_emitter_excited");
}

DensityDiagnostics DensityMatrix::diagnostics() const {
  DensityDiagnostics d;
  d.trace_deviation = std::abs(mat_.trace() - Complex(1.0, 0.0));
  d.hermiticity_defect = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  DenseMatrix herm = 0.5 * (mat_ + mat_.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(herm, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = es.eigenvalues().minCoeff();
  return d;
}

void DensityMatrix::resymmetrize() {
  DenseMatrix herm = 0.5 * (mat_ + mat_.adjoint());
  mat_ = std::move(herm);
}

DensityMatrix initial_state(const SpacePtr& space, const InitialStateSpec& spec) {
  if (!space) throw std::invalid_argument("initial_state: null space");
  switch (spec.kind) {
    case InitialStateKind::ground:
      return DensityMatrix::ground(space);
    case InitialStateKind::photon:
      return DensityMatrix::single_photon(space);
    case InitialStateKind::emitter:
      return DensityMatrix::single_emitter_excited(space, spec.emitter);
    case InitialStateKind::custom:
      break;
  }
  const int n = space->n_emitters();
  const std::size_t want = static_cast<std::size_t>(n) + 2;
  if (spec.amplitudes_re.size() != want || spec.amplitudes_im.size() != want) {
    throw std::invalid_argument("initial_state: custom state needs n_emitters + 2 amplitudes");
  }
  const unsigned all_ground = (1u << n) - 1u;
  ComplexVector psi = ComplexVector::Zero(space->dim());
  double norm2 = 0.0;
  for (std::size_t k = 0; k < want; ++k) {
    const Complex amp(spec.amplitudes_re[k], spec.amplitudes_im[k]);
    norm2 += std::norm(amp);
    if (amp == Complex(0.0, 0.0)) continue;
    int photons = 0;
    unsigned bits = all_ground;
    if (k == 1) {
      photons = 1;
    } else if (k >= 2) {
      bits = all_ground & ~(1u << (n - static_cast<int>(k - 1)));
    }
    const int pos = space->position(photons, bits);
    if (pos < 0) {
      throw std::invalid_argument(
          "initial_state: custom amplitude targets a basis state outside the space");
    }
    psi[pos] = amp;
  }
  if (norm2 <= 0.0) {
    throw std::invalid_argument("initial_state: custom state has zero norm");
  }
  return DensityMatrix::pure(space, psi);
}

Complex DensityMatrix::expectation(const Operator& op) const {
  if (!(op.space().spec() == space_->spec())) {
    throw std::invalid_argument("expectation: operator on different space");
  }
  // tr(op * rho)
  return (op.matrix() * mat_).trace();
}

}  // namespace pqed
