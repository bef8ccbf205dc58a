#include "pqed/steady_state.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <sstream>
#include <vector>

#include "pqed/integrators.hpp"

namespace pqed {

namespace {

double residual_inf(const SparseMatrix& l, const ComplexVector& x) {
  return (l * x).cwiseAbs().maxCoeff();
}

DensityMatrix finish(const SpacePtr& space, ComplexVector x) {
  const int d = space->dim();
  DenseMatrix rho = devectorize(x, d);
  DenseMatrix herm = 0.5 * (rho + rho.adjoint());
  const Complex tr = herm.trace();
  if (std::abs(tr) < 1e-14) throw SolverError("steady_state: solution has vanishing trace");
  herm /= tr;
  return DensityMatrix(space, std::move(herm));
}

DensityMatrix evolve_to_fixed_point(const Liouvillian& liou, const DensityMatrix& init,
                                    const SteadyStateOptions& opts) {
  const int d = liou.dim();
  ComplexVector y = vectorize(init.matrix());
  const bool use_expm = static_cast<long>(d) * d <= 10000;
  double chunk = 10.0;  // fs
  double elapsed = 0.0;

  DenseMatrix prop;
  double prop_dt = -1.0;
  while (elapsed < opts.fallback_t_max) {
    if (use_expm) {
      if (prop_dt != chunk) {
        prop = propagator_expm(liou, chunk);
        prop_dt = chunk;
      }
      ComplexVector ynext = prop * y;
      y.swap(ynext);
    } else {
      DensityMatrix rho(liou.space_ptr(), devectorize(y, d));
      EvolutionConfig cfg;
      cfg.t_max = chunk;
      cfg.dt_initial = std::min(0.01, chunk / 10.0);
      cfg.method = Method::rk45_adaptive;
      cfg.record_stride = static_cast<int>(std::ceil(chunk / cfg.dt_initial));
      Trajectory traj = evolve(liou, rho, cfg);
      y = vectorize(traj.states.back());
    }
    elapsed += chunk;
    {  // keep the iterate physical
      Eigen::Map<DenseMatrix> rho(y.data(), d, d);
      DenseMatrix herm = 0.5 * (rho + rho.adjoint());
      herm /= herm.trace();
      rho = herm;
    }
    if (residual_inf(liou.matrix(), y) < opts.fallback_tol) return finish(liou.space_ptr(), y);
    chunk = std::min(chunk * 2.0, 1e5);
  }
  std::ostringstream msg;
  msg << "steady_state: evolution fallback did not converge within " << opts.fallback_t_max
      << " fs (residual " << residual_inf(liou.matrix(), y) << ")";
  throw SolverError(msg.str());
}

}  // namespace

DensityMatrix steady_state(const Liouvillian& liou, const DensityMatrix* fallback_init,
                           const SteadyStateOptions& opts) {
  const long d = liou.dim();
  if (d * d > 20000000L) {
    throw std::invalid_argument("steady_state: dim^2 exceeds the 2e7 size guard");
  }
  const SparseMatrix& l = liou.matrix();
  const long n = d * d;

  // trace-row replacement: row 0 of the generator becomes the trace functional
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(l.nonZeros()) + static_cast<std::size_t>(d));
  for (int k = 0; k < l.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(l, k); it; ++it) {
      if (it.row() != 0) trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  for (long i = 0; i < d; ++i) {
    trips.emplace_back(0, static_cast<int>(i + i * d), Complex(1.0, 0.0));
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();

  ComplexVector b = ComplexVector::Zero(n);
  b[0] = Complex(1.0, 0.0);

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> solver;
  solver.analyzePattern(m);
  solver.factorize(m);
  bool direct_ok = solver.info() == Eigen::Success;
  ComplexVector x;
  if (direct_ok) {
    x = solver.solve(b);
    direct_ok = solver.info() == Eigen::Success && x.allFinite();
    if (direct_ok && residual_inf(l, x) >= opts.residual_tol) {
      const ComplexVector r = b - m * x;  // one refinement pass
      const ComplexVector dx = solver.solve(r);
      if (solver.info() == Eigen::Success && dx.allFinite()) x += dx;
    }
    if (direct_ok) direct_ok = residual_inf(l, x) < opts.residual_tol;
  }
  if (direct_ok) return finish(liou.space_ptr(), std::move(x));

  if (!opts.allow_fallback) {
    throw SolverError("steady_state: direct solve failed and fallback is disabled");
  }
  if (fallback_init != nullptr) {
    if (!(fallback_init->space().spec() == liou.space().spec())) {
      throw std::invalid_argument("steady_state: fallback initial state space mismatch");
    }
    return evolve_to_fixed_point(liou, *fallback_init, opts);
  }
  return evolve_to_fixed_point(liou, DensityMatrix::ground(liou.space_ptr()), opts);
}

}  // namespace pqed
