#pragma once

#include <string>
#include <vector>

#include "pqed/density.hpp"
#include "pqed/liouvillian.hpp"

namespace pqed {

enum class Method { rk4_fixed, rk45_adaptive, expm_propagator };

struct EvolutionConfig {
  double t_max = 500.0;       // fs
  double dt_initial = 0.01;   // fs; exact step for rk4_fixed, first trial for rk45
  Method method = Method::rk45_adaptive;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int record_stride = 100;    // snapshots every record_stride * dt_initial

  bool operator==(const EvolutionConfig&) const = default;
};

struct TrajectoryWarning {
  double time = 0.0;
  std::string what;
};

struct Trajectory {
  std::vector<double> times;         // fs
  std::vector<DenseMatrix> states;   // density-matrix snapshots
  std::vector<TrajectoryWarning> warnings;
  // worst-case diagnostics over all snapshots
  double max_trace_deviation = 0.0;
  double max_hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;
};

// Integrate d rho/dt = L rho from rho0, recording snapshots on the uniform grid
// t_j = j * record_stride * dt_initial (plus t_max if it falls off the grid).
// Each accepted step re-symmetrizes the state; positivity violations beyond
// 1e-6 are appended as warnings.  Step-size underflow in the adaptive method
// throws.
Trajectory evolve(const Liouvillian& liou, const DensityMatrix& rho0, const EvolutionConfig& cfg);

// Dense matrix exponential exp(L t) of the vectorized generator.
// Guarded: requires dim(space)^2 <= 10^4.
DenseMatrix propagator_expm(const Liouvillian& liou, double t);

}  // namespace pqed
