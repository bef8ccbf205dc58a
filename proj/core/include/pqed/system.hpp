#pragma once

#include <optional>
#include <vector>

#include "pqed/mode_profile.hpp"
#include "pqed/operators.hpp"
#include "pqed/params.hpp"

namespace pqed {

// Emitter-cavity coupling at the emitter's position (meV):
//   g = sqrt(hbar*omega_cav / (2 eps0 eps Re[V])) * d * u(r),
// evaluated in SI units and converted to meV.  Throws if the position lies
// outside a tabulated profile's range.
double coupling_strength(const NanocavityParams& cav, const EmitterSpec& em,
                         const ModeProfile& profile);

// Same with u = 1 (emitter at the field maximum).
double central_coupling(const NanocavityParams& cav, double dipole_debye);

// In-coupling rate calibrated to the classical extinction cross-section:
// kappa_in = kappa_out * c0 * sigma_ext_classical / 2  (meV nm^3/fs).
double in_coupling(const NanocavityParams& cav);

// Collective coupling enhancement sqrt(sum_j u(r_j)^2) relative to a single
// central emitter.  Requires at least one emitter.
double effective_coupling(const std::vector<EmitterSpec>& emitters, const ModeProfile& profile);

// Drive amplitude giving mean photon number target_nph in the empty cavity at
// detuning delta_cav = omega_cav - omega_p:
//   alpha = sqrt(target_nph (kappa_out^2 + delta_cav^2) / kappa_in).
double drive_for_photon_number(const NanocavityParams& cav, double delta_cav, double target_nph);

// Frequency of the rotating frame all Hamiltonian detunings refer to:
// the drive frequency when a drive is present, else the first emitter's
// transition energy, else the cavity resonance.  (Undriven populations are
// frame-independent.)
double frame_reference(const NanocavityParams& cav, const std::vector<EmitterSpec>& emitters,
                       const std::optional<DriveSpec>& drive);

// Rotating-frame system Hamiltonian (meV):
//   H = Dcav a^dag a + sum_j (Dj/2) sigma_z^j
//     + sum_j g_j (a^dag sigma_-^j + a sigma_+^j)
//     + i sqrt(kappa_in) alpha (a - a^dag)
// with Dcav = omega_cav - omega_ref, Dj = omega_qe_j - omega_ref.
// This overload derives each g_j from the cavity and the mode profile.
Operator build_hamiltonian(const SpacePtr& space, const NanocavityParams& cav,
                           const std::vector<EmitterSpec>& emitters, const ModeProfile& profile,
                           const std::optional<DriveSpec>& drive);

// Same Hamiltonian with the couplings g_j supplied explicitly (meV, one per
// emitter, each >= 0).  Lets callers pin g independently of the cavity
// frequency — detuning sweeps hold g fixed — and represent fully decoupled
// emitters (g_j = 0).
Operator build_hamiltonian(const SpacePtr& space, const NanocavityParams& cav,
                           const std::vector<EmitterSpec>& emitters,
                           const std::vector<double>& couplings_mev,
                           const std::optional<DriveSpec>& drive);

}  // namespace pqed
