#include "pqed/sweep.hpp"

#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "pqed/liouvillian.hpp"
#include "pqed/observables.hpp"
#include "pqed/spectral.hpp"
#include "pqed/steady_state.hpp"
#include "pqed/system.hpp"

namespace pqed {

std::string to_string(AxisName name) {
  switch (name) {
    case AxisName::delta_p: return "delta_p";
    case AxisName::delta_cav: return "delta_cav";
    case AxisName::g_scale: return "g_scale";
    case AxisName::position_x: return "position_x";
    case AxisName::ring_radius: return "ring_radius";
  }
  return "?";
}

AxisName axis_name_from_string(const std::string& s) {
  if (s == "delta_p") return AxisName::delta_p;
  if (s == "delta_cav") return AxisName::delta_cav;
  if (s == "g_scale") return AxisName::g_scale;
  if (s == "position_x") return AxisName::position_x;
  if (s == "ring_radius") return AxisName::ring_radius;
  throw std::invalid_argument("unknown sweep axis name: " + s);
}

std::string to_string(Placement p) {
  switch (p) {
    case Placement::symmetric_pair: return "symmetric_pair";
    case Placement::asymmetric_pair: return "asymmetric_pair";
    case Placement::ring: return "ring";
    case Placement::encircled: return "encircled";
  }
  return "?";
}

Placement placement_from_string(const std::string& s) {
  if (s == "symmetric_pair") return Placement::symmetric_pair;
  if (s == "asymmetric_pair") return Placement::asymmetric_pair;
  if (s == "ring") return Placement::ring;
  if (s == "encircled") return Placement::encircled;
  throw std::invalid_argument("unknown placement: " + s);
}

std::vector<double> axis_values(const SweepAxis& axis) {
  if (axis.count < 2) throw std::invalid_argument("sweep axis: count must be >= 2");
  if (!(axis.start < axis.stop)) throw std::invalid_argument("sweep axis: need start < stop");
  std::vector<double> v(static_cast<std::size_t>(axis.count));
  const double step = (axis.stop - axis.start) / (axis.count - 1);
  for (int i = 0; i < axis.count; ++i) v[static_cast<std::size_t>(i)] = axis.start + step * i;
  v.back() = axis.stop;
  return v;
}

long SweepResult::cell_count() const {
  long n = 1;
  for (const auto& a : axes) n *= a.count;
  return n;
}

double SweepResult::at(const std::string& channel, long i1, long i2) const {
  for (std::size_t c = 0; c < channels.size(); ++c) {
    if (channels[c] == channel) {
      const long n2 = axes.size() > 1 ? axes[1].count : 1;
      return values[c][static_cast<std::size_t>(i1 * n2 + i2)];
    }
  }
  throw std::invalid_argument("SweepResult: no channel named " + channel);
}

std::vector<EmitterSpec> place_emitters(const std::vector<EmitterSpec>& base, Placement placement,
                                        double value) {
  std::vector<EmitterSpec> out = base;
  const int n = static_cast<int>(out.size());
  switch (placement) {
    case Placement::symmetric_pair:
      if (n != 2) throw std::invalid_argument("symmetric_pair placement needs exactly 2 emitters");
      out[0].x = value;
      out[0].y = 0.0;
      out[1].x = -value;
      out[1].y = 0.0;
      break;
    case Placement::asymmetric_pair:
      if (n != 2) throw std::invalid_argument("asymmetric_pair placement needs exactly 2 emitters");
      out[0].x = 0.0;
      out[0].y = 0.0;
      out[1].x = value;
      out[1].y = 0.0;
      break;
    case Placement::ring:
      if (n < 1) throw std::invalid_argument("ring placement needs at least 1 emitter");
      for (int k = 0; k < n; ++k) {
        const double th = 2.0 * M_PI * k / n;
        out[static_cast<std::size_t>(k)].x = value * std::cos(th);
        out[static_cast<std::size_t>(k)].y = value * std::sin(th);
      }
      break;
    case Placement::encircled:
      if (n < 2) throw std::invalid_argument("encircled placement needs at least 2 emitters");
      out[0].x = 0.0;
      out[0].y = 0.0;
      for (int k = 1; k < n; ++k) {
        const double th = 2.0 * M_PI * (k - 1) / (n - 1);
        out[static_cast<std::size_t>(k)].x = value * std::cos(th);
        out[static_cast<std::size_t>(k)].y = value * std::sin(th);
      }
      break;
  }
  return out;
}

namespace {

// static index striding; results land in preallocated slots, so output is
// independent of scheduling
void parallel_cells(long n, int workers, const std::function<void(long)>& body) {
  if (workers <= 1 || n <= 1) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  const int w = static_cast<int>(std::min<long>(workers, n));
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  pool.reserve(static_cast<std::size_t>(w));
  for (int t = 0; t < w; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (long i = t; i < n; i += w) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct CellSystem {
  NanocavityParams cavity;
  std::vector<EmitterSpec> emitters;
  std::optional<DriveSpec> drive;
  double g_scale = 1.0;
};

// Couplings for one cell.  Derived against the BASE cavity mode on purpose:
// a delta_cav axis moves the resonance being detuned, not the mode profile
// normalization, so g stays pinned across detuning axes.  Position axes still
// vary g through the emitter coordinates, and a g_scale axis multiplies it.
std::vector<double> cell_couplings(const SweepBase& base, const CellSystem& sys) {
  std::vector<double> g;
  g.reserve(sys.emitters.size());
  for (const EmitterSpec& em : sys.emitters) {
    g.push_back(sys.g_scale * coupling_strength(base.cavity, em, base.profile));
  }
  return g;
}

// anchor frequency the delta axes refer to: the first emitter's transition,
// else the cavity resonance
double axis_anchor(const SweepBase& base) {
  return base.emitters.empty() ? base.cavity.omega_cav : base.emitters.front().omega_qe;
}

void apply_axis(CellSystem& sys, const SweepBase& base, AxisName name, double value) {
  const double anchor = axis_anchor(base);
  switch (name) {
    case AxisName::delta_p:
      if (!sys.drive.has_value()) {
        throw std::invalid_argument("sweep: delta_p axis requires a driven base config");
      }
      sys.drive->omega_p = anchor + value;
      break;
    case AxisName::delta_cav:
      sys.cavity.omega_cav = anchor + value;
      break;
    case AxisName::g_scale:
      if (value < 0.0) throw std::invalid_argument("sweep: g_scale must be >= 0");
      sys.g_scale = value;
      break;
    case AxisName::position_x:
      if (sys.emitters.empty()) {
        throw std::invalid_argument("sweep: position_x axis requires at least one emitter");
      }
      sys.emitters.front().x = value;
      break;
    case AxisName::ring_radius:
      sys.emitters = place_emitters(sys.emitters, Placement::ring, value);
      break;
  }
}

struct HygieneAccumulator {
  std::mutex mutex;
  double max_trace_dev = 0.0;
  double max_herm = 0.0;
  double min_eig = std::numeric_limits<double>::infinity();

  void feed(const DensityDiagnostics& d) {
    std::lock_guard<std::mutex> lock(mutex);
    max_trace_dev = std::max(max_trace_dev, d.trace_deviation);
    max_herm = std::max(max_herm, d.hermiticity_defect);
    min_eig = std::min(min_eig, d.min_eigenvalue);
  }
};

}  // namespace

SweepResult run_map(const SweepBase& base, const SweepAxis& axis1, const SweepAxis& axis2,
                    int workers, long max_cells) {
  const std::vector<double> v1 = axis_values(axis1);
  const std::vector<double> v2 = axis_values(axis2);
  const long n1 = static_cast<long>(v1.size());
  const long n2 = static_cast<long>(v2.size());
  if (n1 * n2 > max_cells) {
    throw std::invalid_argument("run_map: grid of " + std::to_string(n1 * n2) +
                                " cells exceeds the budget of " + std::to_string(max_cells));
  }
  const bool driven = base.drive.has_value();

  SweepResult out;
  out.axes = {axis1, axis2};
  out.channels = {"re_a", "im_a", "abs_a", "photon_number"};
  if (driven) out.channels.push_back("extinction");
  out.values.assign(out.channels.size(),
                    std::vector<double>(static_cast<std::size_t>(n1 * n2),
                                        std::numeric_limits<double>::quiet_NaN()));

  std::vector<char> failed(static_cast<std::size_t>(n1 * n2), 0);
  HygieneAccumulator hygiene;
  const SpacePtr proto_space = make_space(base.space_spec);
  if (proto_space->n_max() < 1) {
    throw std::invalid_argument("run_map: steady-state maps need n_max >= 1");
  }

  parallel_cells(n1 * n2, workers, [&](long cell) {
    const long i1 = cell / n2;
    const long i2 = cell % n2;
    CellSystem sys{base.cavity, base.emitters, base.drive};
    apply_axis(sys, base, axis1.name, v1[static_cast<std::size_t>(i1)]);
    apply_axis(sys, base, axis2.name, v2[static_cast<std::size_t>(i2)]);

    const SpacePtr space = make_space(base.space_spec);
    const std::vector<double> couplings = cell_couplings(base, sys);
    try {
      const Operator h = build_hamiltonian(space, sys.cavity, sys.emitters, couplings, sys.drive);
      const Liouvillian liou = build_liouvillian(h, sys.cavity, sys.emitters, base.convention);
      const DensityMatrix init = initial_state(space, base.initial);
      const DensityMatrix rho = steady_state(liou, &init);
      hygiene.feed(rho.diagnostics());

      const Complex a_exp = rho.expectation(annihilation(space));
      double nph = 0.0;
      for (int i = 0; i < space->dim(); ++i) {
        nph += space->states()[static_cast<std::size_t>(i)].photons * rho.matrix()(i, i).real();
      }
      const std::size_t idx = static_cast<std::size_t>(cell);
      out.values[0][idx] = a_exp.real();
      out.values[1][idx] = a_exp.imag();
      out.values[2][idx] = std::abs(a_exp);
      out.values[3][idx] = nph;
      if (driven) {
        out.values[4][idx] = extinction_driven(sys.cavity, sys.drive->alpha, a_exp);
      }
    } catch (const SolverError&) {
      failed[static_cast<std::size_t>(cell)] = 1;
    }
  });

  for (char f : failed) out.failed_cells += f;
  out.max_trace_deviation = hygiene.max_trace_dev;
  out.max_hermiticity_defect = hygiene.max_herm;
  out.min_eigenvalue = hygiene.min_eig;
  return out;
}

SweepResult run_position_sweep(const SweepBase& base, Placement placement, const SweepAxis& axis,
                               int workers, long max_cells) {
  if ((placement == Placement::symmetric_pair || placement == Placement::asymmetric_pair) &&
      axis.name != AxisName::position_x) {
    throw std::invalid_argument("run_position_sweep: pair placements take a position_x axis");
  }
  if ((placement == Placement::ring || placement == Placement::encircled) &&
      axis.name != AxisName::ring_radius) {
    throw std::invalid_argument("run_position_sweep: ring placements take a ring_radius axis");
  }
  const std::vector<double> vals = axis_values(axis);
  const long n = static_cast<long>(vals.size());
  if (n > max_cells) {
    throw std::invalid_argument("run_position_sweep: axis exceeds the cell budget");
  }

  SweepResult out;
  out.axes = {axis};
  out.channels = {"effective_coupling", "rabi_omega_mev", "rabi_overdamped", "final_p_dark",
                  "final_emitter_population_1"};
  out.values.assign(out.channels.size(),
                    std::vector<double>(static_cast<std::size_t>(n),
                                        std::numeric_limits<double>::quiet_NaN()));
  std::vector<char> failed(static_cast<std::size_t>(n), 0);
  HygieneAccumulator hygiene;

  parallel_cells(n, workers, [&](long cell) {
    const std::size_t idx = static_cast<std::size_t>(cell);
    const std::vector<EmitterSpec> placed =
        place_emitters(base.emitters, placement, vals[idx]);
    const SpacePtr space = make_space(base.space_spec);
    try {
      const Operator h = build_hamiltonian(space, base.cavity, placed, base.profile, base.drive);
      const Liouvillian liou = build_liouvillian(h, base.cavity, placed, base.convention);
      const DensityMatrix init = initial_state(space, base.initial);
      const Trajectory traj = evolve(liou, init, base.evolution);
      hygiene.feed({traj.max_trace_deviation, traj.max_hermiticity_defect, traj.min_eigenvalue});
      const TimeSeries ts = build_time_series(traj, space);

      out.values[0][idx] = effective_coupling(placed, base.profile);
      const std::string channel =
          ts.has("emitter_population_1") ? "emitter_population_1" : "photon_number";
      const RabiEstimate rabi = rabi_frequency(ts.times, ts.channel(channel));
      out.values[1][idx] =
          rabi.overdamped ? std::numeric_limits<double>::quiet_NaN() : rabi.omega_mev;
      out.values[2][idx] = rabi.overdamped ? 1.0 : 0.0;
      if (ts.has("p_a")) {
        out.values[3][idx] = ts.channel("p_a").back();
      } else if (ts.has("p_dark")) {
        out.values[3][idx] = ts.channel("p_dark").back();
      }
      if (ts.has("emitter_population_1")) {
        out.values[4][idx] = ts.channel("emitter_population_1").back();
      }
    } catch (const SolverError&) {
      failed[idx] = 1;
    }
  });

  for (char f : failed) out.failed_cells += f;
  out.max_trace_deviation = hygiene.max_trace_dev;
  out.max_hermiticity_defect = hygiene.max_herm;
  out.min_eigenvalue = hygiene.min_eig;
  return out;
}

}  // namespace pqed
