#include "pqed/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>

#include "pqed/config.hpp"
#include "pqed/density.hpp"
#include "pqed/integrators.hpp"
#include "pqed/liouvillian.hpp"
#include "pqed/observables.hpp"
#include "pqed/spectral.hpp"
#include "pqed/steady_state.hpp"
#include "pqed/sweep.hpp"
#include "pqed/system.hpp"

namespace pqed {

namespace {

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Worst-case state-hygiene extremes accumulated across all evolution and
// sweep runs of the suite; judged by the final criterion.
struct HygieneAccumulator {
  double trace = 0.0;
  double herm = 0.0;
  double eig = 0.0;

  void feed(const Trajectory& traj) {
    trace = std::max(trace, traj.max_trace_deviation);
    herm = std::max(herm, traj.max_hermiticity_defect);
    eig = std::min(eig, traj.min_eigenvalue);
  }
  void feed(const SweepResult& res) {
    trace = std::max(trace, res.max_trace_deviation);
    herm = std::max(herm, res.max_hermiticity_defect);
    eig = std::min(eig, res.min_eigenvalue);
  }
};

std::vector<EmitterSpec> central_emitters(const NanocavityParams& cav, int count,
                                          double kappa_vib) {
  EmitterSpec em = default_emitter(cav);
  em.kappa_vib = kappa_vib;
  return std::vector<EmitterSpec>(static_cast<std::size_t>(count), em);
}

template <class Body>
CriterionResult run_criterion(int index, const std::string& name, double runtime_limit_s,
                              Body&& body) {
  CriterionResult r;
  r.index = index;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.runtime_s > runtime_limit_s) {
    r.pass = false;
    if (!r.detail.empty()) r.detail += "; ";
    r.detail += "runtime over the " + num(runtime_limit_s) + " s limit";
  }
  return r;
}

// --- criterion 1: quantum-classical extinction calibration ------------------

CriterionResult criterion_extinction(const ValidationOptions& opt) {
  return run_criterion(1, "extinction_calibration", 1e-3, [&](CriterionResult& r) {
    const NanocavityParams cav = default_cavity();
    const double sigma_q = extinction_empty(cav, 0.0) * opt.kappa_in_scale;
    r.measured = std::abs(sigma_q - cav.sigma_ext_classical) / cav.sigma_ext_classical;
    r.tolerance = 1e-12;
    r.pass = r.measured <= r.tolerance;
    r.detail = "on-resonance cross-section " + num(sigma_q) + " nm^2 vs classical " +
               num(cav.sigma_ext_classical) + " nm^2";
  });
}

// --- criterion 2: driven empty-cavity steady state --------------------------

CriterionResult criterion_driven_cavity() {
  return run_criterion(2, "driven_cavity_photon_number", 1.0, [&](CriterionResult& r) {
    const NanocavityParams cav = default_cavity();
    HilbertSpec spec;
    spec.n_max = 2;
    spec.n_emitters = 0;
    const SpacePtr space = make_space(spec);
    const ModeProfile profile = ModeProfile::analytic(default_profile_width_nm);
    const double kappa_in = in_coupling(cav);
    const double alpha = cav.kappa_out * std::sqrt(1e-6 / kappa_in);
    const Operator number_op = creation(space) * annihilation(space);
    double worst = 0.0;
    for (int i = 0; i < 101; ++i) {
      const double delta = -3.0 * cav.kappa_out + i * (6.0 * cav.kappa_out / 100.0);
      const DriveSpec drive{cav.omega_cav - delta, alpha};
      const Operator h = build_hamiltonian(space, cav, {}, profile, drive);
      const Liouvillian liou = build_liouvillian(h, cav, {});
      const DensityMatrix rho = steady_state(liou);
      const double measured_n = expectation(number_op, rho).real();
      const double expected_n =
          kappa_in * alpha * alpha / (cav.kappa_out * cav.kappa_out + delta * delta);
      worst = std::max(worst, std::abs(measured_n - expected_n) / expected_n);
    }
    r.measured = worst;
    r.tolerance = 1e-10;
    r.pass = r.measured <= r.tolerance;
    r.detail = "worst relative photon-number error over a 101-point detuning scan";
  });
}

// --- criterion 3: vacuum Rabi frequencies -----------------------------------

struct RabiCheck {
  double estimated = 0.0;
  double reference = 0.0;
  bool overdamped = false;
};

RabiCheck rabi_check(int n_emitters, double t_max, HygieneAccumulator* hygiene) {
  const NanocavityParams cav = default_cavity();
  const std::vector<EmitterSpec> emitters = central_emitters(cav, n_emitters, 0.0);
  HilbertSpec spec;
  spec.n_max = 1;
  spec.n_emitters = n_emitters;
  const SpacePtr space = make_space(spec);
  const ModeProfile profile = ModeProfile::analytic(default_profile_width_nm);
  const Operator h = build_hamiltonian(space, cav, emitters, profile, std::nullopt);
  const Liouvillian liou = build_liouvillian(h, cav, emitters);
  EvolutionConfig ec;
  ec.t_max = t_max;
  ec.dt_initial = 0.01;
  ec.record_stride = 100;  // 1 fs samples
  const Trajectory traj = evolve(liou, DensityMatrix::single_photon(space), ec);
  if (hygiene) hygiene->feed(traj);
  const TimeSeries ts = build_time_series(traj, space);
  const RabiEstimate est = rabi_frequency(ts.times, ts.channel("emitter_population_1"));
  const double g = coupling_strength(cav, emitters[0], profile);
  RabiCheck out;
  out.reference = std::sqrt(4.0 * n_emitters * g * g - cav.kappa_out * cav.kappa_out);
  out.estimated = est.omega_mev;
  out.overdamped = est.overdamped;
  return out;
}

CriterionResult criterion_rabi(HygieneAccumulator* hygiene) {
  return run_criterion(3, "vacuum_rabi_frequencies", 20.0, [&](CriterionResult& r) {
    const RabiCheck one = rabi_check(1, 400.0, hygiene);
    const RabiCheck two = rabi_check(2, 300.0, hygiene);
    r.tolerance = 0.02;
    if (one.overdamped || two.overdamped) {
      r.pass = false;
      r.measured = std::numeric_limits<double>::quiet_NaN();
      r.detail = "oscillation analysis reported overdamped dynamics";
      return;
    }
    const double err1 = std::abs(one.estimated - one.reference) / one.reference;
    const double err2 = std::abs(two.estimated - two.reference) / two.reference;
    r.measured = std::max(err1, err2);
    r.pass = r.measured <= r.tolerance;
    r.detail = "1 emitter: " + num(one.estimated) + " vs " + num(one.reference) +
               " meV; 2 emitters: " + num(two.estimated) + " vs " + num(two.reference) + " meV";
  });
}

// --- criterion 4: dark-state formation --------------------------------------

CriterionResult criterion_dark_formation(HygieneAccumulator* hygiene) {
  return run_criterion(4, "dark_state_formation", 30.0, [&](CriterionResult& r) {
    const NanocavityParams cav = default_cavity();
    const std::vector<EmitterSpec> emitters = central_emitters(cav, 2, 0.0);
    HilbertSpec spec;
    spec.n_max = 1;
    spec.n_emitters = 2;
    const SpacePtr space = make_space(spec);
    const ModeProfile profile = ModeProfile::analytic(default_profile_width_nm);
    const Operator h = build_hamiltonian(space, cav, emitters, profile, std::nullopt);
    const Liouvillian liou = build_liouvillian(h, cav, emitters);
    // Well past 10 plasmon lifetimes: the slowest transient is the S-A
    // coherence, whose amplitude decays at kappa_out/2, so by 330 fs its
    // contribution to the per-emitter populations is below 5e-5.
    EvolutionConfig ec;
    ec.t_max = 330.0;
    ec.dt_initial = 0.01;
    ec.record_stride = 100;
    const Trajectory traj = evolve(liou, DensityMatrix::single_emitter_excited(space, 1), ec);
    if (hygiene) hygiene->feed(traj);
    const TimeSeries ts = build_time_series(traj, space);
    const double p_a = ts.channel("p_a").back();
    const double pop1 = ts.channel("emitter_population_1").back();
    const double pop2 = ts.channel("emitter_population_2").back();
    r.measured = std::max({std::abs(p_a - 0.5), std::abs(pop1 - 0.25), std::abs(pop2 - 0.25)});
    r.tolerance = 1e-3;
    r.pass = r.measured <= r.tolerance;
    r.detail = "final P_A = " + num(p_a) + ", populations = " + num(pop1) + ", " + num(pop2);
  });
}

// --- criterion 5: dark-state robustness -------------------------------------

double dark_decay_rate(const NanocavityParams& cav, double kappa_vib,
                       HygieneAccumulator* hygiene) {
  const std::vector<EmitterSpec> emitters = central_emitters(cav, 2, kappa_vib);
  HilbertSpec spec;
  spec.n_max = 1;
  spec.n_emitters = 2;
  const SpacePtr space = make_space(spec);
  const ModeProfile profile = ModeProfile::analytic(default_profile_width_nm);
  const Operator h = build_hamiltonian(space, cav, emitters, profile, std::nullopt);
  const Liouvillian liou = build_liouvillian(h, cav, emitters, DephasingConvention::half_rate);
  EvolutionConfig ec;
  ec.t_max = 400.0;
  ec.dt_initial = 0.01;
  ec.record_stride = 50;  // 0.5 fs samples
  const DensityMatrix init = DensityMatrix::pure(space, dark_state_pair(space));
  const Trajectory traj = evolve(liou, init, ec);
  if (hygiene) hygiene->feed(traj);
  const TimeSeries ts = build_time_series(traj, space);
  const DecayFit fit = fit_exponential_decay(ts.times, ts.channel("p_a"), 100.0, 350.0);
  return fit.rate_mev;
}

CriterionResult criterion_dark_robustness(HygieneAccumulator* hygiene, std::string* info) {
  const double limit = std::numeric_limits<double>::infinity();
  return run_criterion(5, "dark_state_robustness", limit, [&](CriterionResult& r) {
    const NanocavityParams cav = default_cavity();
    const double rate_lo = dark_decay_rate(cav, 12.5, hygiene);
    const double rate_mid = dark_decay_rate(cav, 25.0, hygiene);
    const double rate_hi = dark_decay_rate(cav, 50.0, hygiene);
    NanocavityParams doubled = cav;
    doubled.kappa_out *= 2.0;
    const double rate_mid_doubled = dark_decay_rate(doubled, 25.0, hygiene);
    const bool monotone = rate_lo < rate_mid && rate_mid < rate_hi;
    r.measured = std::abs(rate_mid_doubled - rate_mid) / rate_mid;
    r.tolerance = 0.05;
    r.pass = monotone && r.measured <= r.tolerance;
    r.detail = "decay rates " + num(rate_lo) + " / " + num(rate_mid) + " / " + num(rate_hi) +
               " meV for dephasing 12.5 / 25 / 50 meV" + (monotone ? "" : " (not monotone)") +
               "; cavity-loss doubling shifts the middle rate by " + num(100.0 * r.measured) + "%";
    if (info) {
      const double plasmon_rate = 2.0 * cav.kappa_out;
      *info = "informational: sub-radiant decay " + num(rate_mid) +
              " meV vs plasmon energy decay " + num(plasmon_rate) +
              " meV; lifetime longer by " + num(plasmon_rate / rate_mid) + "x (not asserted)";
    }
  });
}

// --- criterion 6: hybrid-state detuning map ---------------------------------

// Positions of the two tallest interior local maxima, refined by a parabola
// through each summit and its neighbors; increasing order.  Returns nullopt
// when fewer than two local maxima exist.
std::optional<std::pair<double, double>> two_peak_positions(const std::vector<double>& x,
                                                            const std::vector<double>& v) {
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] >= v[i - 1] && v[i] >= v[i + 1] && (v[i] > v[i - 1] || v[i] > v[i + 1])) {
      peaks.push_back(i);
    }
  }
  if (peaks.size() < 2) return std::nullopt;
  std::sort(peaks.begin(), peaks.end(),
            [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  peaks.resize(2);
  std::sort(peaks.begin(), peaks.end());
  auto refine = [&](std::size_t i) {
    const double denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
    double offset = 0.0;
    if (denom != 0.0) offset = 0.5 * (v[i - 1] - v[i + 1]) / denom;
    offset = std::clamp(offset, -0.5, 0.5);
    const double dx = x[1] - x[0];
    return x[i] + offset * dx;
  };
  return std::make_pair(refine(peaks[0]), refine(peaks[1]));
}

CriterionResult criterion_hybrid_map(const ValidationOptions& opt, HygieneAccumulator* hygiene) {
  return run_criterion(6, "hybrid_state_map", 300.0, [&](CriterionResult& r) {
    const NanocavityParams cav = default_cavity();
    const EmitterSpec em = default_emitter(cav);
    SweepBase base;
    base.space_spec.n_max = 2;
    base.space_spec.n_emitters = 1;
    base.cavity = cav;
    base.emitters = {em};
    base.profile = ModeProfile::analytic(default_profile_width_nm);
    const double kappa_in = in_coupling(cav);
    base.drive = DriveSpec{cav.omega_cav, cav.kappa_out * std::sqrt(1e-6 / kappa_in)};
    SweepAxis cav_axis;
    cav_axis.name = AxisName::delta_cav;
    cav_axis.start = -60.0;
    cav_axis.stop = 60.0;
    cav_axis.count = 61;
    SweepAxis drive_axis;
    drive_axis.name = AxisName::delta_p;
    drive_axis.start = -75.0;
    drive_axis.stop = 75.0;
    drive_axis.count = 61;
    const SweepResult res = run_map(base, cav_axis, drive_axis, opt.workers);
    if (hygiene) hygiene->feed(res);
    if (res.failed_cells != 0) {
      r.pass = false;
      r.detail = std::to_string(res.failed_cells) + " map cells failed to solve";
      return;
    }

    const std::vector<double> drive_values = axis_values(drive_axis);
    const std::vector<double> cav_values = axis_values(cav_axis);
    auto column = [&](long i1) {
      std::vector<double> v(drive_values.size());
      for (std::size_t i2 = 0; i2 < v.size(); ++i2) {
        v[i2] = res.at("abs_a", i1, static_cast<long>(i2));
      }
      return v;
    };

    // quantitative check at zero cavity detuning: the symmetric doublet
    const auto center = two_peak_positions(drive_values, column(30));
    if (!center) {
      r.pass = false;
      r.detail = "expected a two-ridge doublet in the zero-detuning map column";
      return;
    }
    const ModeProfile profile = ModeProfile::analytic(default_profile_width_nm);
    const double g = coupling_strength(cav, em, profile);
    const HybridStates hs = hybrid_states_analytic(cav, em, g);
    const double ref_minus = hs.omega_minus.real() - em.omega_qe;
    const double ref_plus = hs.omega_plus.real() - em.omega_qe;
    const double splitting = ref_plus - ref_minus;
    r.measured = std::max(std::abs(center->first - ref_minus),
                          std::abs(center->second - ref_plus));
    r.tolerance = 0.02 * splitting;

    // avoided crossing: across the anti-crossing region the dominant ridge
    // never touches the bare-resonance line delta_p = delta_cav and switches
    // from the lower to the upper branch at the center
    bool avoided = true;
    for (long i1 = 15; i1 <= 45 && avoided; ++i1) {
      const std::vector<double> v = column(i1);
      const long arg =
          std::max_element(v.begin(), v.end()) - v.begin();
      const double ridge = drive_values[static_cast<std::size_t>(arg)];
      const double dc = cav_values[static_cast<std::size_t>(i1)];
      if (std::abs(ridge - dc) < 0.25 * splitting) avoided = false;
      if (dc != 0.0 && (ridge - dc) * dc < 0.0) avoided = false;
    }
    r.pass = r.measured <= r.tolerance && avoided;
    r.detail = "ridge maxima " + num(center->first) + " / " + num(center->second) +
               " meV vs closed form " + num(ref_minus) + " / " + num(ref_plus) + " meV" +
               (avoided ? "" : "; dominant ridge does not avoid the bare crossing");
  });
}

// --- criterion 7: splitting threshold ---------------------------------------

// Number of resolved maxima after merging peak pairs whose separating valley
// is shallower than `frac` of the curve's full range.
int merged_peak_count(const std::vector<double>& v, double frac) {
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] >= v[i - 1] && v[i] >= v[i + 1] && (v[i] > v[i - 1] || v[i] > v[i + 1])) {
      peaks.push_back(i);
    }
  }
  if (peaks.empty()) return 1;  // monotone or edge-peaked curve: one summit
  const double range =
      *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end());
  const double min_depth = frac * range;
  while (peaks.size() >= 2) {
    double best_depth = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t k = 0; k + 1 < peaks.size(); ++k) {
      double valley = v[peaks[k]];
      for (std::size_t i = peaks[k]; i <= peaks[k + 1]; ++i) valley = std::min(valley, v[i]);
      const double depth = std::min(v[peaks[k]], v[peaks[k + 1]]) - valley;
      if (depth < best_depth) {
        best_depth = depth;
        best = k;
      }
    }
    if (best_depth >= min_depth) break;
    peaks.erase(peaks.begin() + static_cast<long>(v[peaks[best]] >= v[peaks[best + 1]] ? best + 1
                                                                                       : best));
  }
  return static_cast<int>(peaks.size());
}

CriterionResult criterion_splitting_threshold() {
  const double limit = std::numeric_limits<double>::infinity();
  return run_criterion(7, "splitting_threshold", limit, [&](CriterionResult& r) {
    const NanocavityParams cav = default_cavity();
    HilbertSpec spec;
    spec.n_max = 2;
    spec.n_emitters = 1;
    const SpacePtr space = make_space(spec);
    const ModeProfile profile = ModeProfile::analytic(default_profile_width_nm);
    const Operator a_op = annihilation(space);
    const double g0 = central_coupling(cav, default_emitter(cav).dipole);
    const double kappa_in = in_coupling(cav);
    const double alpha = cav.kappa_out * std::sqrt(1e-6 / kappa_in);

    auto peak_count = [&](double coupling_ratio) {
      EmitterSpec em = default_emitter(cav);
      em.dipole *= coupling_ratio * em.kappa_vib / g0;  // target g = ratio * kappa_vib
      std::vector<double> sigma(161);
      for (int i = 0; i < 161; ++i) {
        const double delta_p = -80.0 + i * 1.0;
        const DriveSpec drive{em.omega_qe + delta_p, alpha};
        const Operator h = build_hamiltonian(space, cav, {em}, profile, drive);
        const Liouvillian liou = build_liouvillian(h, cav, {em});
        const DensityMatrix rho = steady_state(liou);
        sigma[static_cast<std::size_t>(i)] =
            extinction_driven(cav, alpha, expectation(a_op, rho));
      }
      return merged_peak_count(sigma, 1e-3);
    };

    const std::vector<double> merged_ratios = {0.25, 0.5, 0.75, 1.0};
    const std::vector<double> split_ratios = {1.5, 2.0, 3.0};
    int correct = 0;
    std::ostringstream detail;
    detail << "peaks per coupling/dephasing ratio:";
    for (const double ratio : merged_ratios) {
      const int n = peak_count(ratio);
      correct += (n == 1);
      detail << " " << num(ratio) << "->" << n;
    }
    for (const double ratio : split_ratios) {
      const int n = peak_count(ratio);
      correct += (n == 2);
      detail << " " << num(ratio) << "->" << n;
    }
    r.measured = static_cast<double>(correct);
    r.tolerance = 7.0;  // all classifications must match
    r.pass = correct == 7;
    r.detail = detail.str();
  });
}

// --- criterion 8: collective coupling at N = 8 ------------------------------

CriterionResult criterion_collective_scaling(HygieneAccumulator* hygiene) {
  const double limit = std::numeric_limits<double>::infinity();
  return run_criterion(8, "collective_scaling_n8", limit, [&](CriterionResult& r) {
    const NanocavityParams cav = default_cavity();
    const std::vector<EmitterSpec> emitters = central_emitters(cav, 8, 0.0);
    HilbertSpec spec;
    spec.n_max = 1;
    spec.n_emitters = 8;
    spec.sector_cap = 1;  // 10 retained states instead of 512
    const SpacePtr space = make_space(spec);
    const ModeProfile profile = ModeProfile::analytic(default_profile_width_nm);
    const Operator h = build_hamiltonian(space, cav, emitters, profile, std::nullopt);
    const Liouvillian liou = build_liouvillian(h, cav, emitters);
    EvolutionConfig ec;
    ec.t_max = 200.0;
    ec.dt_initial = 0.01;
    ec.record_stride = 100;
    const Trajectory traj = evolve(liou, DensityMatrix::single_photon(space), ec);
    if (hygiene) hygiene->feed(traj);
    const TimeSeries ts = build_time_series(traj, space);
    const RabiEstimate est = rabi_frequency(ts.times, ts.channel("emitter_population_1"));
    const double g = coupling_strength(cav, emitters[0], profile);
    const double reference = std::sqrt(4.0 * 8.0 * g * g - cav.kappa_out * cav.kappa_out);
    if (est.overdamped) {
      r.pass = false;
      r.measured = std::numeric_limits<double>::quiet_NaN();
      r.detail = "oscillation analysis reported overdamped dynamics";
      return;
    }
    r.measured = std::abs(est.omega_mev - reference) / reference;
    r.tolerance = 0.02;
    r.pass = r.measured <= r.tolerance;
    r.detail = "estimated " + num(est.omega_mev) + " meV vs sqrt(32 g^2 - kappa_out^2) = " +
               num(reference) + " meV";
  });
}

// --- criterion 9: excitation-sector truncation ------------------------------

TimeSeries truncation_series(const std::optional<int>& sector_cap, HygieneAccumulator* hygiene) {
  const NanocavityParams cav = default_cavity();
  const std::vector<EmitterSpec> emitters = central_emitters(cav, 2, 25.0);
  HilbertSpec spec;
  spec.n_max = 2;
  spec.n_emitters = 2;
  spec.sector_cap = sector_cap;
  const SpacePtr space = make_space(spec);
  const ModeProfile profile = ModeProfile::analytic(default_profile_width_nm);
  const Operator h = build_hamiltonian(space, cav, emitters, profile, std::nullopt);
  const Liouvillian liou = build_liouvillian(h, cav, emitters);
  EvolutionConfig ec;
  ec.t_max = 200.0;
  ec.dt_initial = 0.01;
  ec.record_stride = 100;
  ec.method = Method::expm_propagator;
  const Trajectory traj = evolve(liou, DensityMatrix::single_emitter_excited(space, 1), ec);
  if (hygiene) hygiene->feed(traj);
  return build_time_series(traj, space);
}

CriterionResult criterion_sector_truncation(HygieneAccumulator* hygiene) {
  const double limit = std::numeric_limits<double>::infinity();
  return run_criterion(9, "sector_truncation_equivalence", limit, [&](CriterionResult& r) {
    const TimeSeries full = truncation_series(std::nullopt, hygiene);
    const TimeSeries truncated = truncation_series(1, hygiene);
    const std::vector<std::string> channels = {"photon_number", "emitter_population_1",
                                               "emitter_population_2", "p_s", "p_a"};
    double worst = 0.0;
    for (const auto& name : channels) {
      const auto& a = full.channel(name);
      const auto& b = truncated.channel(name);
      for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
      }
    }
    r.measured = worst;
    r.tolerance = 1e-10;
    r.pass = r.measured <= r.tolerance;
    r.detail = "12-state space vs 4-state single-excitation restriction, undriven";
  });
}

// --- criterion 10: numerical hygiene and integrator cross-check -------------

CriterionResult criterion_hygiene(HygieneAccumulator* hygiene) {
  const double limit = std::numeric_limits<double>::infinity();
  return run_criterion(10, "numerical_hygiene", limit, [&](CriterionResult& r) {
    const NanocavityParams cav = default_cavity();
    const std::vector<EmitterSpec> emitters = central_emitters(cav, 2, 25.0);
    HilbertSpec spec;
    spec.n_max = 2;
    spec.n_emitters = 2;
    const SpacePtr space = make_space(spec);
    const ModeProfile profile = ModeProfile::analytic(default_profile_width_nm);
    const Operator h = build_hamiltonian(space, cav, emitters, profile, std::nullopt);
    const Liouvillian liou = build_liouvillian(h, cav, emitters);
    const DensityMatrix init = DensityMatrix::single_emitter_excited(space, 1);

    EvolutionConfig expm_cfg;
    expm_cfg.t_max = 500.0;
    expm_cfg.dt_initial = 0.01;
    expm_cfg.record_stride = 100;
    expm_cfg.method = Method::expm_propagator;
    const Trajectory exact = evolve(liou, init, expm_cfg);

    EvolutionConfig rk_cfg = expm_cfg;
    rk_cfg.method = Method::rk45_adaptive;
    rk_cfg.rel_tol = 1e-10;
    rk_cfg.abs_tol = 1e-13;
    const Trajectory adaptive = evolve(liou, init, rk_cfg);

    if (hygiene) {
      hygiene->feed(exact);
      hygiene->feed(adaptive);
    }
    double cross = 0.0;
    const std::size_t n = std::min(exact.states.size(), adaptive.states.size());
    for (std::size_t i = 0; i < n; ++i) {
      cross = std::max(cross, (exact.states[i] - adaptive.states[i]).cwiseAbs().maxCoeff());
    }
    const double trace_bound = 1e-9;
    const double herm_bound = 1e-10;
    const double eig_bound = -1e-8;
    const bool hygiene_ok = hygiene->trace < trace_bound && hygiene->herm < herm_bound &&
                            hygiene->eig >= eig_bound;
    r.measured = cross;
    r.tolerance = 1e-8;
    r.pass = cross <= r.tolerance && hygiene_ok;
    r.detail = "adaptive vs exponential propagator on a 12-state system over 500 fs; "
               "accumulated trace dev " +
               num(hygiene->trace) + ", hermiticity defect " + num(hygiene->herm) +
               ", lowest eigenvalue " + num(hygiene->eig) +
               (hygiene_ok ? "" : " (hygiene bounds violated)");
  });
}

}  // namespace

bool ValidationReport::all_passed() const {
  for (const auto& r : results) {
    if (!r.pass) return false;
  }
  return !results.empty();
}

ValidationReport run_validation(const ValidationOptions& options) {
  ValidationReport report;
  HygieneAccumulator hygiene;
  auto wanted = [&](int index) { return options.only == 0 || options.only == index; };
  if (wanted(1)) report.results.push_back(criterion_extinction(options));
  if (wanted(2)) report.results.push_back(criterion_driven_cavity());
  if (wanted(3)) report.results.push_back(criterion_rabi(&hygiene));
  if (wanted(4)) report.results.push_back(criterion_dark_formation(&hygiene));
  if (wanted(5)) report.results.push_back(criterion_dark_robustness(&hygiene, &report.informational));
  if (wanted(6)) report.results.push_back(criterion_hybrid_map(options, &hygiene));
  if (wanted(7)) report.results.push_back(criterion_splitting_threshold());
  if (wanted(8)) report.results.push_back(criterion_collective_scaling(&hygiene));
  if (wanted(9)) report.results.push_back(criterion_sector_truncation(&hygiene));
  if (wanted(10)) report.results.push_back(criterion_hygiene(&hygiene));
  return report;
}

bool print_validation(std::ostream& out, const ValidationOptions& options) {
  const ValidationReport report = run_validation(options);
  for (const auto& r : report.results) {
    char head[160];
    std::snprintf(head, sizeof(head), "[%2d] %s %-30s measured=%-12.6g tolerance=%-12.6g %6.2fs",
                  r.index, r.pass ? "PASS" : "FAIL", r.name.c_str(), r.measured, r.tolerance,
                  r.runtime_s);
    out << head;
    if (!r.detail.empty()) out << "  | " << r.detail;
    out << "\n";
  }
  if (!report.informational.empty()) out << report.informational << "\n";
  out << (report.all_passed() ? "all acceptance criteria passed"
                              : "acceptance criteria FAILED")
      << "\n";
  return report.all_passed();
}

}  // namespace pqed
