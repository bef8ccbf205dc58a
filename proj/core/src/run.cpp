#include "pqed/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "pqed/liouvillian.hpp"
#include "pqed/observables.hpp"
#include "pqed/spectral.hpp"
#include "pqed/steady_state.hpp"
#include "pqed/system.hpp"

namespace pqed {

namespace {

constexpr double guard_tol = 1e-8;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Comment block starting every CSV: version, config echo, derived quantities.
std::string header_block(const RunConfig& c, const ResolvedSystem& sys) {
  std::ostringstream out;
  out << "# pqed " << version_string << "\n";
  std::istringstream cfg(serialize_config(c));
  std::string line;
  while (std::getline(cfg, line)) {
    if (line.empty()) {
      out << "#\n";
    } else {
      out << "# " << line << "\n";
    }
  }
  for (std::size_t j = 0; j < sys.couplings.size(); ++j) {
    out << "# derived: g_" << (j + 1) << "_mev = " << num(sys.couplings[j]) << "\n";
  }
  out << "# derived: kappa_in = " << num(sys.kappa_in) << "\n";
  if (!sys.emitters.empty()) {
    out << "# derived: collective_enhancement = " << num(sys.collective_enhancement) << "\n";
  }
  if (sys.drive) {
    out << "# derived: omega_p_mev = " << num(sys.drive->omega_p) << "\n";
    out << "# derived: alpha = " << num(sys.drive->alpha) << "\n";
  }
  for (std::size_t j = 0; j < sys.couplings.size(); ++j) {
    const double g = sys.couplings[j];
    const double kv = sys.emitters[j].kappa_vib;
    const double ko = sys.cavity.kappa_out;
    out << "# derived: g_over_kappa_vib_" << (j + 1) << " = " << num(g / kv) << "\n";
    out << "# derived: g_over_kappa_out_" << (j + 1) << " = " << num(g / ko) << "\n";
    out << "# derived: cooperativity_" << (j + 1) << " = " << num(g * g / (ko * kv)) << "\n";
  }
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

using Summary = std::vector<std::pair<std::string, std::string>>;

std::string summary_csv(const std::string& header, const Summary& rows) {
  std::ostringstream out;
  out << header << "key,value\n";
  for (const auto& [key, value] : rows) out << key << "," << value << "\n";
  return out.str();
}

std::string timeseries_csv(const std::string& header, const TimeSeries& ts) {
  std::ostringstream out;
  out << header << "time_fs";
  for (const auto& name : ts.names) out << "," << name;
  out << "\n";
  for (std::size_t i = 0; i < ts.times.size(); ++i) {
    out << num(ts.times[i]);
    for (const auto& channel : ts.data) out << "," << num(channel[i]);
    out << "\n";
  }
  return out.str();
}

std::string sweep_csv(const std::string& header, const SweepResult& res) {
  std::ostringstream out;
  out << header << to_string(res.axes[0].name);
  if (res.axes.size() == 2) out << "," << to_string(res.axes[1].name);
  for (const auto& name : res.channels) out << "," << name;
  out << "\n";
  const std::vector<double> v1 = axis_values(res.axes[0]);
  const std::vector<double> v2 =
      res.axes.size() == 2 ? axis_values(res.axes[1]) : std::vector<double>{0.0};
  for (std::size_t i1 = 0; i1 < v1.size(); ++i1) {
    for (std::size_t i2 = 0; i2 < v2.size(); ++i2) {
      out << num(v1[i1]);
      if (res.axes.size() == 2) out << "," << num(v2[i2]);
      const std::size_t cell = i1 * v2.size() + i2;
      for (const auto& channel : res.values) out << "," << num(channel[cell]);
      out << "\n";
    }
  }
  return out.str();
}

// Named scalar observables of a state; the common currency of summaries and
// of the convergence-guard comparison across photon cutoffs.
std::vector<std::pair<std::string, double>> state_scalars(const ResolvedSystem& sys,
                                                          const DensityMatrix& rho) {
  std::vector<std::pair<std::string, double>> v;
  const SpacePtr& space = rho.space_ptr();
  if (space->n_max() >= 1) {
    const Complex a = expectation(annihilation(space), rho);
    const Complex n = expectation(creation(space) * annihilation(space), rho);
    v.emplace_back("photon_number", n.real());
    v.emplace_back("re_a", a.real());
    v.emplace_back("im_a", a.imag());
    if (sys.drive && sys.drive->alpha > 0.0) {
      v.emplace_back("extinction_nm2", extinction_driven(sys.cavity, sys.drive->alpha, a));
    }
  }
  const int n_emitters = space->n_emitters();
  for (int j = 1; j <= n_emitters; ++j) {
    const Complex z = expectation(pauli(space, PauliKind::z, j), rho);
    v.emplace_back("emitter_population_" + std::to_string(j), 0.5 * (z.real() + 1.0));
  }
  if (n_emitters >= 2) {
    const BrightDark bd = bright_dark_populations(rho);
    if (n_emitters == 2) {
      v.emplace_back("p_s", bd.bright);
      v.emplace_back("p_a", bd.dark);
    } else {
      v.emplace_back("p_bright", bd.bright);
      v.emplace_back("p_dark", bd.dark);
    }
  }
  return v;
}

TimeSeries series_at_n_max(const RunConfig& config, int n_max) {
  ResolvedSystem sys = resolve_with_n_max(config, n_max);
  const Operator h = build_hamiltonian(sys.space, sys.cavity, sys.emitters, sys.profile, sys.drive);
  const Liouvillian liou = build_liouvillian(h, sys.cavity, sys.emitters, sys.convention);
  const Trajectory traj = evolve(liou, sys.initial, sys.evolution);
  return build_time_series(traj, sys.space);
}

double max_series_diff(const TimeSeries& a, const TimeSeries& b) {
  double worst = 0.0;
  for (std::size_t c = 0; c < a.names.size(); ++c) {
    const int j = b.index(a.names[c]);
    if (j < 0) continue;
    const std::size_t n = std::min(a.data[c].size(), b.data[j].size());
    for (std::size_t i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(a.data[c][i] - b.data[j][static_cast<std::size_t>(i)]));
    }
  }
  return worst;
}

std::vector<std::pair<std::string, double>> steady_scalars_at_n_max(const RunConfig& config,
                                                                    int n_max) {
  ResolvedSystem sys = resolve_with_n_max(config, n_max);
  const Operator h = build_hamiltonian(sys.space, sys.cavity, sys.emitters, sys.profile, sys.drive);
  const Liouvillian liou = build_liouvillian(h, sys.cavity, sys.emitters, sys.convention);
  const DensityMatrix rho = steady_state(liou, &sys.initial);
  return state_scalars(sys, rho);
}

double max_scalar_diff(const std::vector<std::pair<std::string, double>>& a,
                       const std::vector<std::pair<std::string, double>>& b) {
  double worst = 0.0;
  for (const auto& [name, value] : a) {
    for (const auto& [other_name, other_value] : b) {
      if (name == other_name) {
        worst = std::max(worst, std::abs(value - other_value));
        break;
      }
    }
  }
  return worst;
}

[[noreturn]] void reject_unconverged(int n_max, double drift, double escalation_drift) {
  if (escalation_drift < guard_tol) {
    throw SolverError("photon cutoff n_max = " + std::to_string(n_max) +
                      " is too small: observables shift by " + num(drift) +
                      " when the cutoff doubles; rerun with n_max >= " +
                      std::to_string(2 * n_max) + " or disable the convergence guard");
  }
  throw SolverError("observables have not converged in the photon cutoff even at 4x n_max "
                    "(drift " +
                    num(escalation_drift) + "); the configured drive is too strong for a "
                    "truncated photon ladder");
}

}  // namespace

RunOutputs cmd_simulate(const RunConfig& config, const std::string& out_dir,
                        const RunOptions& options) {
  (void)options;
  ResolvedSystem sys = resolve(config);
  const Operator h = build_hamiltonian(sys.space, sys.cavity, sys.emitters, sys.profile, sys.drive);
  const Liouvillian liou = build_liouvillian(h, sys.cavity, sys.emitters, sys.convention);
  const Trajectory traj = evolve(liou, sys.initial, sys.evolution);
  const TimeSeries ts = build_time_series(traj, sys.space);

  bool guard_ran = false;
  double drift = 0.0;
  if (sys.convergence_guard && config.model.n_max >= 1) {
    guard_ran = true;
    const TimeSeries doubled = series_at_n_max(config, 2 * config.model.n_max);
    drift = max_series_diff(ts, doubled);
    if (drift > guard_tol) {
      const TimeSeries quadrupled = series_at_n_max(config, 4 * config.model.n_max);
      reject_unconverged(config.model.n_max, drift, max_series_diff(doubled, quadrupled));
    }
  }

  std::filesystem::create_directories(out_dir);
  const std::string header = header_block(config, sys);
  RunOutputs outputs;
  const std::string ts_path = join_path(out_dir, "timeseries.csv");
  write_file(ts_path, timeseries_csv(header, ts));
  outputs.files.push_back(ts_path);

  Summary rows;
  rows.emplace_back("samples", std::to_string(ts.times.size()));
  rows.emplace_back("t_final_fs", num(ts.times.empty() ? 0.0 : ts.times.back()));
  for (std::size_t c = 0; c < ts.names.size(); ++c) {
    rows.emplace_back("final_" + ts.names[c], num(ts.data[c].back()));
  }
  rows.emplace_back("max_trace_deviation", num(traj.max_trace_deviation));
  rows.emplace_back("max_hermiticity_defect", num(traj.max_hermiticity_defect));
  rows.emplace_back("min_eigenvalue", num(traj.min_eigenvalue));
  rows.emplace_back("warnings", std::to_string(traj.warnings.size()));
  rows.emplace_back("convergence_guard", guard_ran ? "ran" : "off");
  if (guard_ran) rows.emplace_back("convergence_drift", num(drift));
  const std::string summary_path = join_path(out_dir, "summary.csv");
  write_file(summary_path, summary_csv(header, rows));
  outputs.files.push_back(summary_path);
  return outputs;
}

RunOutputs cmd_steady(const RunConfig& config, const std::string& out_dir,
                      const RunOptions& options) {
  (void)options;
  ResolvedSystem sys = resolve(config);
  const Operator h = build_hamiltonian(sys.space, sys.cavity, sys.emitters, sys.profile, sys.drive);
  const Liouvillian liou = build_liouvillian(h, sys.cavity, sys.emitters, sys.convention);
  const DensityMatrix rho = steady_state(liou, &sys.initial);
  const auto scalars = state_scalars(sys, rho);

  bool guard_ran = false;
  double drift = 0.0;
  if (sys.convergence_guard && config.model.n_max >= 1) {
    guard_ran = true;
    const auto doubled = steady_scalars_at_n_max(config, 2 * config.model.n_max);
    drift = max_scalar_diff(scalars, doubled);
    if (drift > guard_tol) {
      const auto quadrupled = steady_scalars_at_n_max(config, 4 * config.model.n_max);
      reject_unconverged(config.model.n_max, drift, max_scalar_diff(doubled, quadrupled));
    }
  }

  std::filesystem::create_directories(out_dir);
  const std::string header = header_block(config, sys);
  Summary rows;
  for (const auto& [name, value] : scalars) rows.emplace_back(name, num(value));
  const DensityDiagnostics diag = rho.diagnostics();
  rows.emplace_back("trace_deviation", num(diag.trace_deviation));
  rows.emplace_back("hermiticity_defect", num(diag.hermiticity_defect));
  rows.emplace_back("min_eigenvalue", num(diag.min_eigenvalue));
  rows.emplace_back("convergence_guard", guard_ran ? "ran" : "off");
  if (guard_ran) rows.emplace_back("convergence_drift", num(drift));
  RunOutputs outputs;
  const std::string summary_path = join_path(out_dir, "summary.csv");
  write_file(summary_path, summary_csv(header, rows));
  outputs.files.push_back(summary_path);
  return outputs;
}

RunOutputs cmd_sweep(const RunConfig& config, const std::string& out_dir,
                     const RunOptions& options) {
  if (!config.sweep) {
    throw ConfigError("the sweep command requires a [sweep] block in the configuration");
  }
  ResolvedSystem sys = resolve(config);
  const SweepBase base = make_sweep_base(config);
  const SweepBlock& sw = *config.sweep;
  SweepResult res;
  if (sw.type == SweepType::map) {
    res = run_map(base, sw.axes[0], sw.axes[1], options.workers, sw.max_cells);
  } else {
    res = run_position_sweep(base, *sw.placement, sw.axes[0], options.workers, sw.max_cells);
  }

  std::filesystem::create_directories(out_dir);
  const std::string header = header_block(config, sys);
  RunOutputs outputs;
  const std::string sweep_path = join_path(out_dir, "sweep.csv");
  write_file(sweep_path, sweep_csv(header, res));
  outputs.files.push_back(sweep_path);

  Summary rows;
  rows.emplace_back("cells", std::to_string(res.cell_count()));
  rows.emplace_back("failed_cells", std::to_string(res.failed_cells));
  rows.emplace_back("max_trace_deviation", num(res.max_trace_deviation));
  rows.emplace_back("max_hermiticity_defect", num(res.max_hermiticity_defect));
  rows.emplace_back("min_eigenvalue", num(res.min_eigenvalue));
  const std::string summary_path = join_path(out_dir, "summary.csv");
  write_file(summary_path, summary_csv(header, rows));
  outputs.files.push_back(summary_path);
  return outputs;
}

RunOutputs cmd_hybrid(const RunConfig& config, const std::string& out_dir,
                      const RunOptions& options) {
  (void)options;
  ResolvedSystem sys = resolve(config);
  if (sys.emitters.empty()) {
    throw ConfigError("the hybrid command requires at least one [emitter] block");
  }
  double sum_sq = 0.0;
  for (const double g : sys.couplings) sum_sq += g * g;
  const double g_eff = std::sqrt(sum_sq);
  const HybridStates hs = hybrid_states_analytic(sys.cavity, sys.emitters[0], g_eff);

  std::filesystem::create_directories(out_dir);
  const std::string header = header_block(config, sys);
  Summary rows;
  rows.emplace_back("g_eff_mev", num(g_eff));
  rows.emplace_back("omega_plus_re_mev", num(hs.omega_plus.real()));
  rows.emplace_back("omega_plus_im_mev", num(hs.omega_plus.imag()));
  rows.emplace_back("omega_minus_re_mev", num(hs.omega_minus.real()));
  rows.emplace_back("omega_minus_im_mev", num(hs.omega_minus.imag()));
  rows.emplace_back("splitting_mev", num(hs.omega_plus.real() - hs.omega_minus.real()));
  RunOutputs outputs;
  const std::string summary_path = join_path(out_dir, "summary.csv");
  write_file(summary_path, summary_csv(header, rows));
  outputs.files.push_back(summary_path);
  return outputs;
}

}  // namespace pqed
