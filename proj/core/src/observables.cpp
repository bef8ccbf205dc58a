#include "pqed/observables.hpp"

#include <cmath>
#include <stdexcept>

#include "pqed/system.hpp"
#include "pqed/units.hpp"

namespace pqed {

Complex expectation(const Operator& op, const DensityMatrix& rho) {
  return rho.expectation(op);
}

double extinction_empty(const NanocavityParams& cav, double delta_cav) {
  const double kin = in_coupling(cav);
  return (2.0 * kin * cav.kappa_out / units::c0_nm_fs) /
         (cav.kappa_out * cav.kappa_out + delta_cav * delta_cav);
}

double extinction_driven(const NanocavityParams& cav, double alpha, Complex a_expectation) {
  if (alpha == 0.0) throw std::invalid_argument("extinction_driven: alpha must be nonzero");
  const double kin = in_coupling(cav);
  return -2.0 * std::sqrt(kin) * a_expectation.real() / (units::c0_nm_fs * alpha);
}

namespace {

// basis index of |0 photons, only emitter j excited>, -1 if not retained
int single_excited_index(const HilbertSpace& space, int j) {
  const unsigned all_ground = (1u << space.n_emitters()) - 1u;
  const unsigned bits = all_ground & ~(1u << (space.n_emitters() - j));
  return space.position(0, bits);
}

}  // namespace

ComplexVector bright_state(const SpacePtr& space) {
  if (!space) throw std::invalid_argument("bright_state: null space");
  const int n = space->n_emitters();
  if (n < 2) throw std::invalid_argument("bright_state: need at least two emitters");
  ComplexVector s = ComplexVector::Zero(space->dim());
  const double w = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 1; j <= n; ++j) {
    const int idx = single_excited_index(*space, j);
    if (idx < 0) throw std::invalid_argument("bright_state: single-excitation state not retained");
    s[idx] = Complex(w, 0.0);
  }
  return s;
}

ComplexVector dark_state_pair(const SpacePtr& space) {
  if (!space) throw std::invalid_argument("dark_state_pair: null space");
  if (space->n_emitters() != 2) {
    throw std::invalid_argument("dark_state_pair: defined for exactly two emitters");
  }
  const int i1 = single_excited_index(*space, 1);
  const int i2 = single_excited_index(*space, 2);
  if (i1 < 0 || i2 < 0) {
    throw std::invalid_argument("dark_state_pair: single-excitation states not retained");
  }
  ComplexVector a = ComplexVector::Zero(space->dim());
  const double w = 1.0 / std::sqrt(2.0);
  a[i1] = Complex(w, 0.0);
  a[i2] = Complex(-w, 0.0);
  return a;
}

BrightDark bright_dark_populations(const DensityMatrix& rho) {
  const HilbertSpace& space = rho.space();
  const int n = space.n_emitters();
  if (n < 2) throw std::invalid_argument("bright_dark_populations: need at least two emitters");
  const ComplexVector s = bright_state(rho.space_ptr());
  BrightDark out;
  out.bright = (s.adjoint() * rho.matrix() * s).value().real();
  double manifold = 0.0;
  for (int j = 1; j <= n; ++j) {
    const int idx = single_excited_index(space, j);
    if (idx >= 0) manifold += rho.matrix()(idx, idx).real();
  }
  out.dark = manifold - out.bright;
  return out;
}

int TimeSeries::index(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  return -1;
}

const std::vector<double>& TimeSeries::channel(const std::string& name) const {
  const int i = index(name);
  if (i < 0) throw std::invalid_argument("TimeSeries: no channel named " + name);
  return data[static_cast<std::size_t>(i)];
}

TimeSeries build_time_series(const Trajectory& traj, const SpacePtr& space) {
  if (!space) throw std::invalid_argument("build_time_series: null space");
  const int n = space->n_emitters();
  const bool photons = space->n_max() >= 1;

  TimeSeries ts;
  ts.times = traj.times;
  if (photons) {
    ts.names.push_back("photon_number");
    ts.names.push_back("re_a");
    ts.names.push_back("im_a");
  }
  for (int j = 1; j <= n; ++j) ts.names.push_back("emitter_population_" + std::to_string(j));
  const bool split = n >= 2;
  if (split) {
    ts.names.push_back(n == 2 ? "p_s" : "p_bright");
    ts.names.push_back(n == 2 ? "p_a" : "p_dark");
  }
  ts.data.assign(ts.names.size(), {});
  for (auto& col : ts.data) col.reserve(traj.states.size());

  SparseMatrix a_mat;
  if (photons) a_mat = annihilation(space).matrix();
  ComplexVector s_vec;
  if (split) s_vec = bright_state(space);

  const auto& states = space->states();
  for (const DenseMatrix& rho : traj.states) {
    std::size_t c = 0;
    if (photons) {
      double nph = 0.0;
      for (int i = 0; i < space->dim(); ++i) {
        nph += states[static_cast<std::size_t>(i)].photons * rho(i, i).real();
      }
      const Complex a_exp = (a_mat * rho).trace();
      ts.data[c++].push_back(nph);
      ts.data[c++].push_back(a_exp.real());
      ts.data[c++].push_back(a_exp.imag());
    }
    for (int j = 1; j <= n; ++j) {
      double pop = 0.0;
      for (int i = 0; i < space->dim(); ++i) {
        if (space->emitter_excited(states[static_cast<std::size_t>(i)], j)) pop += rho(i, i).real();
      }
      ts.data[c++].push_back(pop);
    }
    if (split) {
      double manifold = 0.0;
      for (int j = 1; j <= n; ++j) {
        const int idx = single_excited_index(*space, j);
        if (idx >= 0) manifold += rho(idx, idx).real();
      }
      const double bright = (s_vec.adjoint() * rho * s_vec).value().real();
      ts.data[c++].push_back(bright);
      ts.data[c++].push_back(manifold - bright);
    }
  }
  return ts;
}

}  // namespace pqed
