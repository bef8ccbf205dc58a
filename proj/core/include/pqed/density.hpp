#pragma once

#include "pqed/hilbert.hpp"
#include "pqed/operators.hpp"
#include "pqed/params.hpp"
#include "pqed/types.hpp"

namespace pqed {

struct DensityDiagnostics {
  double trace_deviation = 0.0;   // |tr(rho) - 1|
  double hermiticity_defect = 0.0;  // max |rho - rho^dag|
  double min_eigenvalue = 0.0;
};

// Dense density matrix on a Hilbert space.
class DensityMatrix {
 public:
  DensityMatrix(SpacePtr space, DenseMatrix mat);

  // |psi><psi| for a normalized or unnormalized state vector.
  static DensityMatrix pure(const SpacePtr& space, const ComplexVector& psi);
  // Vacuum photon field, all emitters in the ground state.
  static DensityMatrix ground(const SpacePtr& space);
  // One photon, emitters ground.
  static DensityMatrix single_photon(const SpacePtr& space);
  // Emitter j (1-based) excited, zero photons, others ground.
  static DensityMatrix single_emitter_excited(const SpacePtr& space, int emitter);

  const HilbertSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const DenseMatrix& matrix() const { return mat_; }
  DenseMatrix& matrix() { return mat_; }
  int dim() const { return space_->dim(); }

  Complex trace() const { return mat_.trace(); }
  DensityDiagnostics diagnostics() const;

  // Replace by the Hermitian part (rho + rho^dag)/2; counters drift from
  // floating-point evolution, does not renormalize the trace.
  void resymmetrize();

  Complex expectation(const Operator& op) const;

 private:
  SpacePtr space_;
  DenseMatrix mat_;
};

// Builds the initial density matrix described by an InitialStateSpec.  Custom
// amplitudes are given over the zero- and one-excitation basis in the order
// [all-ground, one-photon, emitter 1 excited, ..., emitter N excited]; any
// nonzero amplitude on a state that the space does not retain is an error.
DensityMatrix initial_state(const SpacePtr& space, const InitialStateSpec& spec);

}  // namespace pqed
