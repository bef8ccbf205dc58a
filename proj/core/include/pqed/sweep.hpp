#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pqed/integrators.hpp"
#include "pqed/mode_profile.hpp"
#include "pqed/params.hpp"

namespace pqed {

enum class AxisName { delta_p, delta_cav, g_scale, position_x, ring_radius };

std::string to_string(AxisName name);
AxisName axis_name_from_string(const std::string& s);

struct SweepAxis {
  AxisName name = AxisName::delta_p;
  double start = 0.0;
  double stop = 1.0;
  int count = 2;

  bool operator==(const SweepAxis&) const = default;
};

// Uniform grid including both endpoints; requires count >= 2 and start < stop.
std::vector<double> axis_values(const SweepAxis& axis);

enum class Placement { symmetric_pair, asymmetric_pair, ring, encircled };

std::string to_string(Placement p);
Placement placement_from_string(const std::string& s);

// Immutable description of the system a sweep perturbs per cell.  The drive
// amplitude is resolved once here and held fixed across cells: a sweep models
// a fixed incident field scanned in frequency or geometry.
struct SweepBase {
  HilbertSpec space_spec;
  NanocavityParams cavity;
  std::vector<EmitterSpec> emitters;
  ModeProfile profile = ModeProfile::analytic(default_profile_width_nm);
  std::optional<DriveSpec> drive;
  DephasingConvention convention = DephasingConvention::as_written;
  InitialStateSpec initial;      // steady-state fallback start / evolution start
  EvolutionConfig evolution;     // position sweeps only
};

struct SweepResult {
  std::vector<SweepAxis> axes;              // 1 or 2
  std::vector<std::string> channels;
  std::vector<std::vector<double>> values;  // values[channel][i1 * count2 + i2]
  int failed_cells = 0;                     // cells holding NaN after solver failure
  // hygiene extremes over all successful steady-state cells
  double max_trace_deviation = 0.0;
  double max_hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;

  long cell_count() const;
  double at(const std::string& channel, long i1, long i2 = 0) const;
};

inline constexpr long default_cell_budget = 100000;

// Steady-state observable map over two axes.  Channels: re_a, im_a, abs_a,
// photon_number, plus extinction when the base is driven.  Cells are
// independent solves; results are gathered by index, so grids are identical
// for any worker count.  Throws when the grid exceeds the cell budget.
SweepResult run_map(const SweepBase& base, const SweepAxis& axis1, const SweepAxis& axis2,
                    int workers, long max_cells = default_cell_budget);

// Per-position time evolution summaries along one axis.  Channels:
// effective_coupling, rabi_omega_mev (NaN when overdamped), rabi_overdamped,
// final_p_dark (NaN below two emitters), final_emitter_population_1.
SweepResult run_position_sweep(const SweepBase& base, Placement placement, const SweepAxis& axis,
                               int workers, long max_cells = default_cell_budget);

// Emitter layout for one placement at a given axis value (positions only;
// other emitter fields copied from the base).
std::vector<EmitterSpec> place_emitters(const std::vector<EmitterSpec>& base, Placement placement,
                                        double value);

}  // namespace pqed
