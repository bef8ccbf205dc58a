#pragma once

#include <memory>

#include "pqed/hilbert.hpp"
#include "pqed/types.hpp"

namespace pqed {

// Sparse linear operator bound to a Hilbert space.  Algebra between operators
// requires identical space specs.
class Operator {
 public:
  Operator(SpacePtr space, SparseMatrix mat);

  const HilbertSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const SparseMatrix& matrix() const { return mat_; }
  int dim() const { return space_->dim(); }

  Operator adjoint() const;
  DenseMatrix dense() const { return DenseMatrix(mat_); }
  double norm_inf() const;  // max abs entry

  Operator& operator+=(const Operator& o);
  Operator& operator-=(const Operator& o);
  Operator& operator*=(Complex c);

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(Complex c, Operator a) { return a *= c; }
  friend Operator operator*(Operator a, Complex c) { return a *= c; }
  friend Operator operator*(const Operator& a, const Operator& b);

 private:
  SpacePtr space_;
  SparseMatrix mat_;
};

enum class PauliKind { z, plus, minus };

// Photon annihilation operator; requires n_max >= 1.
Operator annihilation(const SpacePtr& space);
Operator creation(const SpacePtr& space);

// Single-emitter Pauli operator embedded in the composite space; emitter is 1-based.
Operator pauli(const SpacePtr& space, PauliKind kind, int emitter);

Operator identity_operator(const SpacePtr& space);

// Column-stacking vectorization: vec(rho)[i + j*D] = rho(i, j).
ComplexVector vectorize(const DenseMatrix& rho);
DenseMatrix devectorize(const ComplexVector& v, int dim);

}  // namespace pqed
