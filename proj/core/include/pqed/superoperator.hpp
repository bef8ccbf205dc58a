#pragma once

#include "pqed/operators.hpp"
#include "pqed/types.hpp"

namespace pqed {

// Superoperator acting on column-stacked density matrices: dimension D^2.
class SuperOperator {
 public:
  SuperOperator(SpacePtr space, SparseMatrix mat);

  const HilbertSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const SparseMatrix& matrix() const { return mat_; }
  int dim() const { return space_->dim(); }  // underlying space dimension D
  long super_dim() const { return mat_.rows(); }  // D^2

  ComplexVector apply(const ComplexVector& v) const { return mat_ * v; }
  DenseMatrix apply(const DenseMatrix& rho) const;

  SuperOperator& operator+=(const SuperOperator& o);
  SuperOperator& operator-=(const SuperOperator& o);
  SuperOperator& operator*=(Complex c);

  friend SuperOperator operator+(SuperOperator a, const SuperOperator& b) { return a += b; }
  friend SuperOperator operator-(SuperOperator a, const SuperOperator& b) { return a -= b; }
  friend SuperOperator operator*(Complex c, SuperOperator a) { return a *= c; }

 private:
  SpacePtr space_;
  SparseMatrix mat_;
};

// Left multiplication: rho -> A rho.
SuperOperator spre(const Operator& a);
// Right multiplication: rho -> rho A.
SuperOperator spost(const Operator& a);
// Sandwich: rho -> A rho B.
SuperOperator ssandwich(const Operator& a, const Operator& b);

// Lindblad dissipator with rate gamma:
//   D[L] rho = gamma * (L rho L^dag - (1/2){L^dag L, rho}).
SuperOperator dissipator(const Operator& lindblad_op, double gamma);

// Commutator part of a Hamiltonian generator: rho -> -i (H rho - rho H).
SuperOperator commutator_generator(const Operator& h);

}  // namespace pqed
