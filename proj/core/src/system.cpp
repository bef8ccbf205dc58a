#include "pqed/system.hpp"

#include <cmath>
#include <stdexcept>

#include "pqed/units.hpp"

namespace pqed {

double central_coupling(const NanocavityParams& cav, double dipole_debye) {
  if (!(cav.mode_volume_re > 0.0)) throw std::invalid_argument("coupling: Re[V] must be > 0");
  if (!(cav.epsilon >= 1.0)) throw std::invalid_argument("coupling: epsilon must be >= 1");
  if (!(dipole_debye > 0.0)) throw std::invalid_argument("coupling: dipole must be > 0");
  const double energy_j = cav.omega_cav * 1e-3 * units::e_charge_si;  // meV -> J
  const double volume_m3 = cav.mode_volume_re * 1e-27;                // nm^3 -> m^3
  const double dipole_cm = dipole_debye * units::debye_si;            // Debye -> C m
  const double g_j = dipole_cm * std::sqrt(energy_j / (2.0 * units::eps0_si * cav.epsilon * volume_m3));
  return g_j / units::e_charge_si * 1e3;  // J -> meV
}

double coupling_strength(const NanocavityParams& cav, const EmitterSpec& em,
                         const ModeProfile& profile) {
  const double u = profile.at_xy(em.x, em.y);
  if (u == 0.0) return 0.0;
  return central_coupling(cav, em.dipole) * u;
}

double in_coupling(const NanocavityParams& cav) {
  if (!(cav.kappa_out > 0.0)) throw std::invalid_argument("in_coupling: kappa_out must be > 0");
  if (cav.sigma_ext_classical < 0.0) {
    throw std::invalid_argument("in_coupling: sigma_ext_classical must be >= 0");
  }
  return cav.kappa_out * units::c0_nm_fs * cav.sigma_ext_classical / 2.0;
}

double effective_coupling(const std::vector<EmitterSpec>& emitters, const ModeProfile& profile) {
  if (emitters.empty()) throw std::invalid_argument("effective_coupling: need at least one emitter");
  double s = 0.0;
  for (const auto& em : emitters) {
    const double u = profile.at_xy(em.x, em.y);
    s += u * u;
  }
  return std::sqrt(s);
}

double drive_for_photon_number(const NanocavityParams& cav, double delta_cav, double target_nph) {
  if (target_nph < 0.0) throw std::invalid_argument("drive_for_photon_number: target must be >= 0");
  const double kin = in_coupling(cav);
  if (!(kin > 0.0)) throw std::invalid_argument("drive_for_photon_number: kappa_in must be > 0");
  return std::sqrt(target_nph * (cav.kappa_out * cav.kappa_out + delta_cav * delta_cav) / kin);
}

double frame_reference(const NanocavityParams& cav, const std::vector<EmitterSpec>& emitters,
                       const std::optional<DriveSpec>& drive) {
  if (drive.has_value()) return drive->omega_p;
  if (!emitters.empty()) return emitters.front().omega_qe;
  return cav.omega_cav;
}

Operator build_hamiltonian(const SpacePtr& space, const NanocavityParams& cav,
                           const std::vector<EmitterSpec>& emitters, const ModeProfile& profile,
                           const std::optional<DriveSpec>& drive) {
  std::vector<double> couplings;
  couplings.reserve(emitters.size());
  for (const EmitterSpec& em : emitters) couplings.push_back(coupling_strength(cav, em, profile));
  return build_hamiltonian(space, cav, emitters, couplings, drive);
}

Operator build_hamiltonian(const SpacePtr& space, const NanocavityParams& cav,
                           const std::vector<EmitterSpec>& emitters,
                           const std::vector<double>& couplings_mev,
                           const std::optional<DriveSpec>& drive) {
  if (!space) throw std::invalid_argument("build_hamiltonian: null space");
  if (space->n_emitters() != static_cast<int>(emitters.size())) {
    throw std::invalid_argument("build_hamiltonian: emitter count does not match space");
  }
  if (couplings_mev.size() != emitters.size()) {
    throw std::invalid_argument("build_hamiltonian: coupling count does not match emitter count");
  }
  for (double g : couplings_mev) {
    if (!(g >= 0.0) || !std::isfinite(g)) {
      throw std::invalid_argument("build_hamiltonian: couplings must be finite and >= 0");
    }
  }
  const double omega_ref = frame_reference(cav, emitters, drive);
  const double delta_cav = cav.omega_cav - omega_ref;

  Operator h = identity_operator(space) * Complex(0.0, 0.0);
  const bool has_photons = space->n_max() >= 1;

  if (has_photons) {
    Operator a = annihilation(space);
    Operator adag = a.adjoint();
    h += Complex(delta_cav, 0.0) * (adag * a);
    for (std::size_t j = 0; j < emitters.size(); ++j) {
      const double g = couplings_mev[j];
      if (g != 0.0) {
        Operator sm = pauli(space, PauliKind::minus, static_cast<int>(j + 1));
        // a^dag sigma_- composed in this order only visits intermediate states
        // at or below the initial excitation, so the product stays exact under
        // a sector cap; the reverse process is its adjoint.
        Operator jc = adag * sm;
        h += Complex(g, 0.0) * (jc + jc.adjoint());
      }
    }
    if (drive.has_value() && drive->alpha != 0.0) {
      if (drive->alpha < 0.0) throw std::invalid_argument("build_hamiltonian: alpha must be >= 0");
      const double amp = std::sqrt(in_coupling(cav)) * drive->alpha;
      h += Complex(0.0, amp) * a - Complex(0.0, amp) * a.adjoint();
    }
  } else if (drive.has_value() && drive->alpha != 0.0) {
    throw std::invalid_argument("build_hamiltonian: drive requires n_max >= 1");
  }

  for (std::size_t j = 0; j < emitters.size(); ++j) {
    const double dj = emitters[j].omega_qe - omega_ref;
    if (dj != 0.0) {
      h += Complex(0.5 * dj, 0.0) * pauli(space, PauliKind::z, static_cast<int>(j + 1));
    }
  }
  return h;
}

}  // namespace pqed
