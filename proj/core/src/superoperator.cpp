#include "pqed/superoperator.hpp"

#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

namespace pqed {

namespace {

void require_same_space(const SuperOperator& a, const SuperOperator& b) {
  if (!(a.space().spec() == b.space().spec())) {
    throw std::invalid_argument("superoperator algebra across different Hilbert spaces");
  }
}

SparseMatrix sparse_identity(int d) {
  SparseMatrix m(d, d);
  m.setIdentity();
  return m;
}

}  // namespace

SuperOperator::SuperOperator(SpacePtr space, SparseMatrix mat)
    : space_(std::move(space)), mat_(std::move(mat)) {
  if (!space_) throw std::invalid_argument("SuperOperator: null space");
  const long d2 = static_cast<long>(space_->dim()) * space_->dim();
  if (mat_.rows() != d2 || mat_.cols() != d2) {
    throw std::invalid_argument("SuperOperator: matrix must be D^2 x D^2");
  }
}

DenseMatrix SuperOperator::apply(const DenseMatrix& rho) const {
  ComplexVector v = vectorize(rho);
  ComplexVector w = mat_ * v;
  return devectorize(w, space_->dim());
}

SuperOperator& SuperOperator::operator+=(const SuperOperator& o) {
  require_same_space(*this, o);
  mat_ += o.mat_;
  return *this;
}

SuperOperator& SuperOperator::operator-=(const SuperOperator& o) {
  require_same_space(*this, o);
  mat_ -= o.mat_;
  return *this;
}

SuperOperator& SuperOperator::operator*=(Complex c) {
  mat_ *= c;
  return *this;
}

// Column stacking: vec(A rho B) = (B^T kron A) vec(rho).
SuperOperator spre(const Operator& a) {
  SparseMatrix id = sparse_identity(a.dim());
  SparseMatrix m = Eigen::kroneckerProduct(id, a.matrix());
  return SuperOperator(a.space_ptr(), std::move(m));
}

SuperOperator spost(const Operator& a) {
  SparseMatrix at = a.matrix().transpose();
  SparseMatrix id = sparse_identity(a.dim());
  SparseMatrix m = Eigen::kroneckerProduct(at, id);
  return SuperOperator(a.space_ptr(), std::move(m));
}

SuperOperator ssandwich(const Operator& a, const Operator& b) {
  if (!(a.space().spec() == b.space().spec())) {
    throw std::invalid_argument("ssandwich: operators on different spaces");
  }
  SparseMatrix bt = b.matrix().transpose();
  SparseMatrix m = Eigen::kroneckerProduct(bt, a.matrix());
  return SuperOperator(a.space_ptr(), std::move(m));
}

SuperOperator dissipator(const Operator& lindblad_op, double gamma) {
  const Operator ldag = lindblad_op.adjoint();
  const Operator ldl = ldag * lindblad_op;
  SuperOperator s = ssandwich(lindblad_op, ldag);
  s -= Complex(0.5, 0.0) * spre(ldl);
  s -= Complex(0.5, 0.0) * spost(ldl);
  s *= Complex(gamma, 0.0);
  return s;
}

SuperOperator commutator_generator(const Operator& h) {
  SuperOperator s = spre(h);
  s -= spost(h);
  s *= Complex(0.0, -1.0);
  return s;
}

}  // namespace pqed
