#pragma once

#include <string>
#include <vector>

#include "pqed/density.hpp"
#include "pqed/integrators.hpp"
#include "pqed/params.hpp"

namespace pqed {

Complex expectation(const Operator& op, const DensityMatrix& rho);

// Empty-cavity extinction cross-section (nm^2) at cavity-drive detuning
// delta_cav (meV): sigma = (2 kappa_in kappa_out / c0) / (kappa_out^2 + delta_cav^2).
// On resonance this returns sigma_ext_classical exactly.
double extinction_empty(const NanocavityParams& cav, double delta_cav);

// Extinction cross-section (nm^2) from the steady-state cavity amplitude:
// sigma = -2 sqrt(kappa_in) Re<a> / (c0 alpha).  Rejects alpha = 0.
double extinction_driven(const NanocavityParams& cav, double alpha, Complex a_expectation);

// Normalized symmetric single-excitation state |S> = N^{-1/2} sum_j |0, only j excited>.
ComplexVector bright_state(const SpacePtr& space);
// Antisymmetric partner (|0,eg> - |0,ge>)/sqrt(2); two-emitter spaces only.
ComplexVector dark_state_pair(const SpacePtr& space);

struct BrightDark {
  double bright = 0.0;  // <S|rho|S>
  double dark = 0.0;    // single-excitation population orthogonal to |S>
};

// Requires at least two emitters.  For N = 2 the dark population equals <A|rho|A>.
BrightDark bright_dark_populations(const DensityMatrix& rho);

struct TimeSeries {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<double>> data;  // data[channel][sample]

  int index(const std::string& name) const;
  bool has(const std::string& name) const { return index(name) >= 0; }
  const std::vector<double>& channel(const std::string& name) const;
};

// Observable channels over a trajectory: photon_number, re_a, im_a (when the
// space has photons), emitter_population_j, and for >= 2 emitters the
// bright/dark split (named p_s/p_a for two emitters, p_bright/p_dark beyond).
TimeSeries build_time_series(const Trajectory& traj, const SpacePtr& space);

}  // namespace pqed
