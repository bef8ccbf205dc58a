#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pqed/density.hpp"
#include "pqed/hilbert.hpp"
#include "pqed/integrators.hpp"
#include "pqed/mode_profile.hpp"
#include "pqed/params.hpp"
#include "pqed/sweep.hpp"

namespace pqed {

// Raised for any problem in a configuration file; messages carry
// "path:line:column: ..." positions where one is known.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelBlock {
  int n_max = 2;                      // photon Fock cutoff
  std::optional<int> sector_cap;      // keep states with <= cap excitations
  DephasingConvention convention = DephasingConvention::as_written;
  bool convergence_guard = true;      // rerun at higher n_max and compare

  bool operator==(const ModelBlock&) const = default;
};

struct ProfileBlock {
  ProfileKind kind = ProfileKind::analytic;
  double width_nm = default_profile_width_nm;  // analytic only
  std::string file;                            // tabulated only

  bool operator==(const ProfileBlock&) const = default;
};

// Drive frequency is given either absolutely (omega_p_mev) or relative to the
// cavity resonance (delta_p_mev: omega_p = omega_cav + delta_p_mev); amplitude
// either directly (alpha) or as an empty-cavity mean photon number target
// (photon_number).  After parsing, exactly one member of each pair is set.
struct DriveBlock {
  std::optional<double> omega_p_mev;
  std::optional<double> delta_p_mev;
  std::optional<double> alpha;
  std::optional<double> photon_number;

  bool operator==(const DriveBlock&) const = default;
};

enum class SweepType { map, position };

struct SweepBlock {
  SweepType type = SweepType::map;
  std::vector<SweepAxis> axes;          // two for a map, one for a position sweep
  std::optional<Placement> placement;   // position sweeps only
  long max_cells = default_cell_budget;

  bool operator==(const SweepBlock&) const = default;
};

struct RunConfig {
  ModelBlock model;
  NanocavityParams cavity;
  std::vector<EmitterSpec> emitters;
  ProfileBlock profile;
  std::optional<DriveBlock> drive;
  InitialStateSpec initial;
  EvolutionConfig evolution;
  std::optional<SweepBlock> sweep;

  bool operator==(const RunConfig&) const = default;
};

// Built-in defaults (applied for absent optional keys and echoed on output).
NanocavityParams default_cavity();
EmitterSpec default_emitter(const NanocavityParams& cavity);

// Strict INI-style parser: unknown blocks or keys are errors (with a
// nearest-key suggestion), duplicate keys are errors, all values are
// range-checked.  [emitter] blocks repeat, one per emitter, in order.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& path_label);

// Canonical full-precision rendering; parse(serialize(parse(x))) == parse(x).
std::string serialize_config(const RunConfig& config);

// Everything derived from a RunConfig that a run needs.
struct ResolvedSystem {
  SpacePtr space;
  NanocavityParams cavity;
  std::vector<EmitterSpec> emitters;
  ModeProfile profile;
  std::optional<DriveSpec> drive;   // alpha and omega_p fully resolved
  DephasingConvention convention = DephasingConvention::as_written;
  DensityMatrix initial;
  std::vector<double> couplings;    // g_j (meV), one per emitter
  double kappa_in = 0.0;            // meV nm^3/fs
  double collective_enhancement = 0.0;  // sqrt(sum_j u_j^2); 0 without emitters
  EvolutionConfig evolution;
  bool convergence_guard = true;
};

ResolvedSystem resolve(const RunConfig& config);
// Same, with the photon cutoff overridden (used by the convergence guard).
ResolvedSystem resolve_with_n_max(const RunConfig& config, int n_max);

// Cell-independent part of a sweep, with the drive amplitude fixed once.
SweepBase make_sweep_base(const RunConfig& config);

}  // namespace pqed
