#pragma once

#include <vector>

#include "pqed/params.hpp"
#include "pqed/superoperator.hpp"

namespace pqed {

// Master-equation generator in 1/fs units acting on vectorized density
// matrices: d vec(rho)/dt = L vec(rho).
class Liouvillian {
 public:
  Liouvillian(SpacePtr space, SuperOperator superop);

  const HilbertSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const SuperOperator& superop() const { return superop_; }
  const SparseMatrix& matrix() const { return superop_.matrix(); }
  int dim() const { return space_->dim(); }

  ComplexVector apply(const ComplexVector& v) const { return superop_.apply(v); }
  DenseMatrix apply(const DenseMatrix& rho) const { return superop_.apply(rho); }

  // Max |t^T L| entry, where t is the trace functional on vectorized matrices;
  // zero (to rounding) for any trace-preserving generator.
  double trace_defect() const;

 private:
  SpacePtr space_;
  SuperOperator superop_;
};

// Assemble the generator from a Hamiltonian (meV) plus the cavity decay
// channel (sandwich rate 2*kappa_out on a) and one sigma_z dephasing channel
// per emitter (sandwich rate per the convention).  The meV-valued generator is
// divided by hbar to yield 1/fs.
Liouvillian build_liouvillian(const Operator& h, const NanocavityParams& cav,
                              const std::vector<EmitterSpec>& emitters,
                              DephasingConvention convention = DephasingConvention::as_written);

}  // namespace pqed
