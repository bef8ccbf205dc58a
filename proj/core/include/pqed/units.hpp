#pragma once

// Internal unit system: energies and rates in meV, time in fs, lengths in nm.
// Time evolution divides meV-valued generators by hbar_mev_fs to obtain 1/fs.

namespace pqed::units {

inline constexpr double hbar_mev_fs = 658.2119569;         // h/(2 pi e) * 1e18
inline constexpr double c0_nm_fs = 299.792458;             // vacuum speed of light
inline constexpr double mev_per_thz = 4.135667696923859;   // E = h f

// SI constants for the dipole-coupling evaluation (CODATA 2018)
inline constexpr double eps0_si = 8.8541878128e-12;        // F/m
inline constexpr double e_charge_si = 1.602176634e-19;     // C (exact)
inline constexpr double debye_si = 3.335640951981521e-30;  // C m (1e-21/c)

}  // namespace pqed::units
