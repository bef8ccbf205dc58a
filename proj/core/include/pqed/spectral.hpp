#pragma once

#include <vector>

#include "pqed/params.hpp"
#include "pqed/types.hpp"

namespace pqed {

struct RabiEstimate {
  bool overdamped = true;   // too few significant extrema to call a frequency
  double omega_mev = 0.0;   // dominant angular frequency, meV
  int significant_extrema = 0;
};

// Dominant oscillation frequency of a uniformly sampled damped channel.
// Pipeline: local extrema with parabolic refinement; log-linear envelope fits
// to the maxima and minima; midline removal and amplitude normalization; Hann
// window; zero-padded FFT (>= 16x); parabolic interpolation on the log
// magnitude.  Fewer than three extrema with swings above `floor` reports
// overdamped instead of a number.
RabiEstimate rabi_frequency(const std::vector<double>& times, const std::vector<double>& values,
                            double floor = 1e-6);

struct HybridStates {
  Complex omega_plus;   // meV
  Complex omega_minus;  // meV
};

// Closed-form complex hybrid-state frequencies for one emitter at coupling g:
//   w_pm = (we + wc)/2 +- sqrt(g^2 (1 - iR) + ((we - wc)/2)^2)
// with wc = omega_cav - i kappa_out, we = omega_qe - i kappa_vib and
// R = Im[V]/Re[V]; principal-branch square root.
HybridStates hybrid_states_analytic(const NanocavityParams& cav, const EmitterSpec& em, double g);

struct DecayFit {
  double rate_mev = 0.0;     // fitted exponential decay rate (meV)
  double log_intercept = 0.0;
  int points = 0;
};

// Log-linear least-squares fit of values ~ exp(-rate * t / hbar) over
// t in [t_lo, t_hi], ignoring samples at or below `floor`.
DecayFit fit_exponential_decay(const std::vector<double>& times, const std::vector<double>& values,
                               double t_lo, double t_hi, double floor = 1e-12);

}  // namespace pqed
