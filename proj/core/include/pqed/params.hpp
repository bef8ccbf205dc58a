#pragma once

#include <optional>
#include <string>
#include <vector>

namespace pqed {

struct NanocavityParams {
  double omega_cav = 0.0;            // resonance (meV)
  double kappa_out = 0.0;            // amplitude decay half-width (meV); energy decays at 2*kappa_out
  double mode_volume_re = 0.0;       // Re[V] (nm^3)
  double mode_volume_im = 0.0;       // Im[V] (nm^3)
  double epsilon = 1.0;              // relative permittivity of the host
  double sigma_ext_classical = 0.0;  // on-resonance classical extinction cross-section (nm^2)

  bool operator==(const NanocavityParams&) const = default;
};

struct EmitterSpec {
  double omega_qe = 0.0;    // transition energy (meV)
  double kappa_vib = 0.0;   // dephasing rate (meV)
  double dipole = 0.0;      // transition dipole moment (Debye)
  double x = 0.0;           // gap-plane position (nm)
  double y = 0.0;

  bool operator==(const EmitterSpec&) const = default;
};

struct DriveSpec {
  double omega_p = 0.0;  // drive frequency (meV)
  double alpha = 0.0;    // coherent amplitude (real, >= 0)

  bool operator==(const DriveSpec&) const = default;
};

// Sandwich-rate convention for the sigma_z dephasing dissipator.
//   as_written: sandwich prefactor kappa_vib     -> coherence decay 2*kappa_vib
//   half_rate:  sandwich prefactor kappa_vib / 2 -> coherence decay kappa_vib
enum class DephasingConvention { as_written, half_rate };

inline double dephasing_sandwich_rate(double kappa_vib, DephasingConvention c) {
  return c == DephasingConvention::as_written ? kappa_vib : 0.5 * kappa_vib;
}

// Coherence (off-diagonal) decay rate implied by the convention; this is the
// emitter half-width entering linear-response and hybrid-state formulas.
inline double emitter_coherence_rate(double kappa_vib, DephasingConvention c) {
  return 2.0 * dephasing_sandwich_rate(kappa_vib, c);
}

enum class InitialStateKind { ground, photon, emitter, custom };

struct InitialStateSpec {
  InitialStateKind kind = InitialStateKind::ground;
  int emitter = 1;  // for kind == emitter (1-based)
  // for kind == custom: amplitudes over the <=1-excitation basis in the order
  // ground, photon, emitter 1, ..., emitter N (unnormalized; complex as re/im pairs)
  std::vector<double> amplitudes_re;
  std::vector<double> amplitudes_im;

  bool operator==(const InitialStateSpec&) const = default;
};

}  // namespace pqed
