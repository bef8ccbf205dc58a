#include "pqed/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pqed {

namespace {

void require_same_space(const Operator& a, const Operator& b) {
  if (!(a.space().spec() == b.space().spec())) {
    throw std::invalid_argument("operator algebra across different Hilbert spaces");
  }
}

}  // namespace

Operator::Operator(SpacePtr space, SparseMatrix mat) : space_(std::move(space)), mat_(std::move(mat)) {
  if (!space_) throw std::invalid_argument("Operator: null space");
  if (mat_.rows() != space_->dim() || mat_.cols() != space_->dim()) {
    throw std::invalid_argument("Operator: matrix dimension does not match space");
  }
}

Operator Operator::adjoint() const {
  SparseMatrix adj = mat_.adjoint();
  return Operator(space_, std::move(adj));
}

double Operator::norm_inf() const {
  double m = 0.0;
  for (int k = 0; k < mat_.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(mat_, k); it; ++it) {
      m = std::max(m, std::abs(it.value()));
    }
  }
  return m;
}

Operator& Operator::operator+=(const Operator& o) {
  require_same_space(*this, o);
  mat_ += o.mat_;
  return *this;
}

Operator& Operator::operator-=(const Operator& o) {
  require_same_space(*this, o);
  mat_ -= o.mat_;
  return *this;
}

Operator& Operator::operator*=(Complex c) {
  mat_ *= c;
  return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_space(a, b);
  SparseMatrix prod = a.mat_ * b.mat_;
  return Operator(a.space_, std::move(prod));
}

Operator annihilation(const SpacePtr& space) {
  if (!space) throw std::invalid_argument("annihilation: null space");
  if (space->n_max() < 1) throw std::invalid_argument("annihilation: need n_max >= 1");
  std::vector<Triplet> trips;
  const auto& states = space->states();
  for (int col = 0; col < space->dim(); ++col) {
    const BasisState& s = states[static_cast<std::size_t>(col)];
    if (s.photons == 0) continue;
    int row = space->position(s.photons - 1, s.ground_bits);
    if (row < 0) continue;  // target outside retained sector
    trips.emplace_back(row, col, Complex(std::sqrt(static_cast<double>(s.photons)), 0.0));
  }
  SparseMatrix m(space->dim(), space->dim());
  m.setFromTriplets(trips.begin(), trips.end());
  return Operator(space, std::move(m));
}

Operator creation(const SpacePtr& space) { return annihilation(space).adjoint(); }

Operator pauli(const SpacePtr& space, PauliKind kind, int emitter) {
  if (!space) throw std::invalid_argument("pauli: null space");
  if (emitter < 1 || emitter > space->n_emitters()) {
    throw std::invalid_argument("pauli: emitter index out of range");
  }
  std::vector<Triplet> trips;
  const auto& states = space->states();
  const unsigned bit = 1u << (space->n_emitters() - emitter);
  for (int col = 0; col < space->dim(); ++col) {
    const BasisState& s = states[static_cast<std::size_t>(col)];
    const bool ground = (s.ground_bits & bit) != 0;
    switch (kind) {
      case PauliKind::z:
        trips.emplace_back(col, col, Complex(ground ? -1.0 : 1.0, 0.0));
        break;
      case PauliKind::plus: {
        if (!ground) break;  // raising acts on ground only
        int row = space->position(s.photons, s.ground_bits & ~bit);
        if (row < 0) break;
        trips.emplace_back(row, col, Complex(1.0, 0.0));
        break;
      }
      case PauliKind::minus: {
        if (ground) break;
        int row = space->position(s.photons, s.ground_bits | bit);
        if (row < 0) break;
        trips.emplace_back(row, col, Complex(1.0, 0.0));
        break;
      }
    }
  }
  SparseMatrix m(space->dim(), space->dim());
  m.setFromTriplets(trips.begin(), trips.end());
  return Operator(space, std::move(m));
}

Operator identity_operator(const SpacePtr& space) {
  if (!space) throw std::invalid_argument("identity_operator: null space");
  SparseMatrix m(space->dim(), space->dim());
  m.setIdentity();
  return Operator(space, std::move(m));
}

ComplexVector vectorize(const DenseMatrix& rho) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("vectorize: matrix not square");
  return Eigen::Map<const ComplexVector>(rho.data(), rho.size());
}

DenseMatrix devectorize(const ComplexVector& v, int dim) {
  if (v.size() != static_cast<long>(dim) * dim) {
    throw std::invalid_argument("devectorize: size mismatch");
  }
  return Eigen::Map<const DenseMatrix>(v.data(), dim, dim);
}

}  // namespace pqed
