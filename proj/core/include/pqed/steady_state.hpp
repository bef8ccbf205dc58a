#pragma once

#include <stdexcept>

#include "pqed/density.hpp"
#include "pqed/liouvillian.hpp"

namespace pqed {

// Raised when neither the direct solve nor the evolution fallback reaches a
// steady state.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SteadyStateOptions {
  double residual_tol = 1e-10;     // accepted |L vec(rho)|_inf after the direct solve (1/fs)
  double fallback_tol = 1e-12;     // |d rho/dt|_inf convergence for the evolution fallback
  double fallback_t_max = 2e6;     // fs; give up beyond this horizon
  bool allow_fallback = true;
};

// Solve L vec(rho) = 0 with trace(rho) = 1 by trace-row replacement and a
// deterministic sparse LU.  A singular or inaccurate solve falls back to
// long-time evolution from `fallback_init` (the system ground state when
// null); relevant when the generator has a degenerate kernel, e.g. decoupled
// emitters with dephasing only.
DensityMatrix steady_state(const Liouvillian& liou, const DensityMatrix* fallback_init = nullptr,
                           const SteadyStateOptions& opts = {});

}  // namespace pqed
