#include "pqed/integrators.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

namespace pqed {

namespace {

void validate_config(const EvolutionConfig& cfg) {
  if (!(cfg.t_max > 0.0)) throw std::invalid_argument("evolve: t_max must be > 0");
  if (!(cfg.dt_initial > 0.0)) throw std::invalid_argument("evolve: dt_initial must be > 0");
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0)) {
    throw std::invalid_argument("evolve: tolerances must be > 0");
  }
  if (cfg.record_stride < 1) throw std::invalid_argument("evolve: record_stride must be >= 1");
}

std::vector<double> recording_times(const EvolutionConfig& cfg) {
  const double rec_dt = cfg.record_stride * cfg.dt_initial;
  const double eps = 1e-9 * std::max(1.0, cfg.t_max);
  std::vector<double> times;
  for (long j = 0;; ++j) {
    const double t = j * rec_dt;
    if (t > cfg.t_max + eps) break;
    times.push_back(t);
  }
  if (times.empty() || times.back() < cfg.t_max - eps) times.push_back(cfg.t_max);
  return times;
}

// symmetrize the working state in place; returns the pre-symmetrization
// Hermiticity defect
double resymmetrize_vec(ComplexVector& y, int d) {
  Eigen::Map<DenseMatrix> rho(y.data(), d, d);
  const double defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  DenseMatrix herm = 0.5 * (rho + rho.adjoint());
  rho = herm;
  return defect;
}

// classic fixed-step RK4 over [t0, t1] in steps of dt (last step shortened)
double rk4_span(const Liouvillian& liou, ComplexVector& y, double t0, double t1, double dt,
                int d) {
  double max_defect = 0.0;
  double t = t0;
  const double eps = 1e-12 * std::max(1.0, t1);
  while (t < t1 - eps) {
    const double h = std::min(dt, t1 - t);
    const ComplexVector k1 = liou.apply(y);
    const ComplexVector k2 = liou.apply(ComplexVector(y + (0.5 * h) * k1));
    const ComplexVector k3 = liou.apply(ComplexVector(y + (0.5 * h) * k2));
    const ComplexVector k4 = liou.apply(ComplexVector(y + h * k3));
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    max_defect = std::max(max_defect, resymmetrize_vec(y, d));
    t += h;
  }
  return max_defect;
}

// Dormand-Prince 5(4) coefficients
constexpr double A21 = 1.0 / 5.0;
constexpr double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0;
constexpr double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0;
constexpr double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0, A53 = 64448.0 / 6561.0,
                 A54 = -212.0 / 729.0;
constexpr double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0,
                 A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0;
constexpr double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0,
                 B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0;
constexpr double E1 = 35.0 / 384.0 - 5179.0 / 57600.0, E3 = 500.0 / 1113.0 - 7571.0 / 16695.0,
                 E4 = 125.0 / 192.0 - 393.0 / 640.0, E5 = -2187.0 / 6784.0 + 92097.0 / 339200.0,
                 E6 = 11.0 / 84.0 - 187.0 / 2100.0, E7 = -1.0 / 40.0;

// adaptive Dormand-Prince over [t0, t1]; h is carried across calls
double rk45_span(const Liouvillian& liou, ComplexVector& y, double t0, double t1, double& h,
                 double rel_tol, double abs_tol, int d) {
  double max_defect = 0.0;
  double t = t0;
  const double eps = 1e-12 * std::max(1.0, t1);
  while (t < t1 - eps) {
    h = std::min(h, t1 - t);
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      std::ostringstream msg;
      msg << "evolve: adaptive step size underflow at t = " << t << " fs (h = " << h << ")";
      throw std::runtime_error(msg.str());
    }
    const ComplexVector k1 = liou.apply(y);
    const ComplexVector k2 = liou.apply(ComplexVector(y + h * (A21 * k1)));
    const ComplexVector k3 = liou.apply(ComplexVector(y + h * (A31 * k1 + A32 * k2)));
    const ComplexVector k4 = liou.apply(ComplexVector(y + h * (A41 * k1 + A42 * k2 + A43 * k3)));
    const ComplexVector k5 =
        liou.apply(ComplexVector(y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4)));
    const ComplexVector k6 = liou.apply(
        ComplexVector(y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5)));
    ComplexVector y5 = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
    const ComplexVector k7 = liou.apply(y5);
    const ComplexVector err_vec =
        h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);

    double err = 0.0;
    for (long i = 0; i < y.size(); ++i) {
      const double scale = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err = std::max(err, std::abs(err_vec[i]) / scale);
    }
    if (err <= 1.0) {
      t += h;
      y.swap(y5);
      max_defect = std::max(max_defect, resymmetrize_vec(y, d));
    }
    const double factor = (err == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= factor;
  }
  return max_defect;
}

}  // namespace

DenseMatrix propagator_expm(const Liouvillian& liou, double t) {
  const long d = liou.dim();
  if (d * d > 10000) {
    throw std::invalid_argument("propagator_expm: dim^2 exceeds the 10^4 size guard");
  }
  DenseMatrix dense = DenseMatrix(liou.matrix()) * Complex(t, 0.0);
  return dense.exp();
}

Trajectory evolve(const Liouvillian& liou, const DensityMatrix& rho0, const EvolutionConfig& cfg) {
  validate_config(cfg);
  if (!(rho0.space().spec() == liou.space().spec())) {
    throw std::invalid_argument("evolve: initial state space mismatch");
  }
  const int d = liou.dim();
  const std::vector<double> times = recording_times(cfg);

  Trajectory out;
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  ComplexVector y = vectorize(rho0.matrix());

  // expm method: precompute the propagator for each distinct interval length
  DenseMatrix step_prop;
  double step_prop_dt = -1.0;
  double h_adaptive = cfg.dt_initial;

  auto record = [&](double t) {
    DenseMatrix rho = devectorize(y, d);
    out.times.push_back(t);
    out.max_trace_deviation =
        std::max(out.max_trace_deviation, std::abs(rho.trace() - Complex(1.0, 0.0)));
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(rho, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    out.min_eigenvalue = std::min(out.min_eigenvalue, min_eig);
    if (min_eig < -1e-6) {
      std::ostringstream msg;
      msg << "positivity violation: min eigenvalue " << min_eig;
      out.warnings.push_back({t, msg.str()});
    }
    out.states.push_back(std::move(rho));
  };

  record(times.front());
  for (std::size_t j = 1; j < times.size(); ++j) {
    const double t0 = times[j - 1];
    const double t1 = times[j];
    double defect = 0.0;
    switch (cfg.method) {
      case Method::rk4_fixed:
        defect = rk4_span(liou, y, t0, t1, cfg.dt_initial, d);
        break;
      case Method::rk45_adaptive:
        defect = rk45_span(liou, y, t0, t1, h_adaptive, cfg.rel_tol, cfg.abs_tol, d);
        break;
      case Method::expm_propagator: {
        const double dt = t1 - t0;
        if (step_prop_dt != dt) {
          step_prop = propagator_expm(liou, dt);
          step_prop_dt = dt;
        }
        ComplexVector ynext = step_prop * y;
        y.swap(ynext);
        defect = resymmetrize_vec(y, d);
        break;
      }
    }
    out.max_hermiticity_defect = std::max(out.max_hermiticity_defect, defect);
    record(t1);
  }
  return out;
}

}  // namespace pqed
