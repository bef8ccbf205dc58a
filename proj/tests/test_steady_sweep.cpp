#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "pqed/config.hpp"
#include "pqed/observables.hpp"
#include "pqed/spectral.hpp"
#include "pqed/steady_state.hpp"
#include "pqed/sweep.hpp"
#include "pqed/system.hpp"
#include "pqed/units.hpp"

using namespace pqed;

namespace {

const ModeProfile kProfile = ModeProfile::analytic(default_profile_width_nm);

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

bool same_grid(const SweepResult& a, const SweepResult& b) {
  if (a.values.size() != b.values.size()) return false;
  for (std::size_t c = 0; c < a.values.size(); ++c) {
    if (a.values[c].size() != b.values[c].size()) return false;
    for (std::size_t k = 0; k < a.values[c].size(); ++k) {
      const double x = a.values[c][k];
      const double y = b.values[c][k];
      if (!(x == y || (std::isnan(x) && std::isnan(y)))) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("driven empty-cavity steady state matches the closed-form amplitude") {
  const NanocavityParams cav = default_cavity();
  const SpacePtr space = make_space({2, 0, std::nullopt});
  const double kin = in_coupling(cav);

  for (double delta : {0.0, 20.0, -20.0, 37.0}) {
    const double alpha = drive_for_photon_number(cav, delta, 1e-6);
    const DriveSpec drive{cav.omega_cav - delta, alpha};
    const Operator h = build_hamiltonian(space, cav, {}, kProfile, drive);
    const Liouvillian liou = build_liouvillian(h, cav, {});
    const DensityMatrix rho = steady_state(liou);

    const Complex expect = -std::sqrt(kin) * alpha / Complex(cav.kappa_out, delta);
    const Complex a_exp = rho.expectation(annihilation(space));
    CHECK(std::abs(a_exp - expect) <= 1e-8 * std::abs(expect));
    if (delta == 0.0) CHECK(a_exp.real() < 0.0);

    // the quantum extinction equals the classical Lorentzian point by point
    CHECK(rel_err(extinction_driven(cav, alpha, a_exp), extinction_empty(cav, delta)) <= 1e-10);
  }
}

TEST_CASE("classical extinction profile peaks at the calibrated value with half-width kappa_out") {
  const NanocavityParams cav = default_cavity();
  CHECK(rel_err(extinction_empty(cav, 0.0), cav.sigma_ext_classical) <= 1e-14);
  CHECK(rel_err(extinction_empty(cav, cav.kappa_out), 0.5 * cav.sigma_ext_classical) <= 1e-12);
  CHECK(rel_err(extinction_empty(cav, -cav.kappa_out), 0.5 * cav.sigma_ext_classical) <= 1e-12);
  CHECK_THROWS_AS((void)extinction_driven(cav, 0.0, Complex(0.1, 0.0)), std::invalid_argument);
}

TEST_CASE("undriven dissipative system relaxes to its ground state") {
  const NanocavityParams cav = default_cavity();
  const EmitterSpec em = default_emitter(cav);
  const SpacePtr space = make_space({2, 1, std::nullopt});
  const Operator h = build_hamiltonian(space, cav, {em}, kProfile, std::nullopt);
  const Liouvillian liou = build_liouvillian(h, cav, {em});
  const DensityMatrix rho = steady_state(liou);

  const int ground_idx = space->position(0, 0b1);
  REQUIRE(ground_idx >= 0);
  CHECK(std::abs(rho.matrix()(ground_idx, ground_idx).real() - 1.0) <= 1e-9);
  CHECK(std::abs(rho.trace() - 1.0) <= 1e-12);
}

TEST_CASE("degenerate kernels fall back to evolution, or throw when forbidden") {
  const NanocavityParams cav = default_cavity();
  const EmitterSpec em = default_emitter(cav);
  const SpacePtr space = make_space({1, 1, std::nullopt});
  // decoupled emitter (g = 0) with pure dephasing: the kernel is degenerate
  const Operator h = build_hamiltonian(space, cav, {em}, {0.0}, std::nullopt);
  const Liouvillian liou = build_liouvillian(h, cav, {em});

  const DensityMatrix excited = DensityMatrix::single_emitter_excited(space, 1);
  const DensityMatrix rho = steady_state(liou, &excited);
  const Complex z = rho.expectation(pauli(space, PauliKind::z, 1));
  CHECK(std::abs(z.real() - 1.0) <= 1e-10);

  SteadyStateOptions no_fallback;
  no_fallback.allow_fallback = false;
  CHECK_THROWS_AS((void)steady_state(liou, &excited, no_fallback), SolverError);
}

TEST_CASE("hybrid-state formula has the exact decoupled, matched, and exchanged limits") {
  NanocavityParams cav = default_cavity();
  EmitterSpec em = default_emitter(cav);
  em.omega_qe = cav.omega_cav + 17.0;
  em.kappa_vib = 13.0;

  const HybridStates g0 = hybrid_states_analytic(cav, em, 0.0);
  const Complex wc(cav.omega_cav, -cav.kappa_out);
  const Complex we(em.omega_qe, -em.kappa_vib);
  const double match_bare =
      std::min(std::abs(g0.omega_plus - we) + std::abs(g0.omega_minus - wc),
               std::abs(g0.omega_plus - wc) + std::abs(g0.omega_minus - we));
  CHECK(match_bare <= 1e-10);

  // matched linewidths on resonance: purely real splitting of exactly 2 g
  EmitterSpec matched = em;
  matched.omega_qe = cav.omega_cav;
  matched.kappa_vib = cav.kappa_out;
  const HybridStates hm = hybrid_states_analytic(cav, matched, 31.0);
  CHECK(std::abs(hm.omega_plus.real() - hm.omega_minus.real() - 62.0) <= 1e-10);
  CHECK(std::abs(hm.omega_plus.imag() - hm.omega_minus.imag()) <= 1e-10);

  // swapping the roles of the two oscillators leaves the pair invariant
  NanocavityParams swapped_cav = cav;
  swapped_cav.omega_cav = em.omega_qe;
  swapped_cav.kappa_out = em.kappa_vib;
  EmitterSpec swapped_em = em;
  swapped_em.omega_qe = cav.omega_cav;
  swapped_em.kappa_vib = cav.kappa_out;
  const HybridStates ab = hybrid_states_analytic(cav, em, 22.0);
  const HybridStates ba = hybrid_states_analytic(swapped_cav, swapped_em, 22.0);
  CHECK(std::abs(ab.omega_plus - ba.omega_plus) <= 1e-10);
  CHECK(std::abs(ab.omega_minus - ba.omega_minus) <= 1e-10);

  // both hybrid states decay
  CHECK(ab.omega_plus.imag() < 0.0);
  CHECK(ab.omega_minus.imag() < 0.0);
}

namespace {

SweepBase driven_single_emitter_base(DephasingConvention conv, double kappa_vib) {
  const NanocavityParams cav = default_cavity();
  EmitterSpec em = default_emitter(cav);
  em.kappa_vib = kappa_vib;

  SweepBase base;
  base.space_spec = {2, 1, std::nullopt};
  base.cavity = cav;
  base.emitters = {em};
  base.convention = conv;
  base.drive = DriveSpec{cav.omega_cav, drive_for_photon_number(cav, 0.0, 1e-6)};
  return base;
}

}  // namespace

TEST_CASE("steady-state maps are identical for any worker count") {
  const SweepBase base = driven_single_emitter_base(DephasingConvention::as_written, 25.0);
  const SweepAxis a1{AxisName::delta_cav, -20.0, 20.0, 5};
  const SweepAxis a2{AxisName::delta_p, -30.0, 30.0, 4};
  const SweepResult r1 = run_map(base, a1, a2, 1);
  const SweepResult r8 = run_map(base, a1, a2, 8);
  CHECK(r1.failed_cells == 0);
  CHECK(same_grid(r1, r8));
  CHECK(r1.channels == std::vector<std::string>{"re_a", "im_a", "abs_a", "photon_number", "extinction"});
  // the flat layout runs the second axis fastest
  CHECK(r1.at("abs_a", 2, 3) == r1.values[2][2 * 4 + 3]);
}

TEST_CASE("matched-linewidth maps are symmetric under detuning reflection") {
  const SweepBase base =
      driven_single_emitter_base(DephasingConvention::half_rate, default_cavity().kappa_out);
  const int n = 7;
  const SweepAxis a1{AxisName::delta_cav, -30.0, 30.0, n};
  const SweepAxis a2{AxisName::delta_p, -30.0, 30.0, n};
  const SweepResult r = run_map(base, a1, a2, 4);
  REQUIRE(r.failed_cells == 0);

  // reflecting both detunings through the anti-crossing center conjugates <a>:
  // |<a>| and Re<a> are symmetric, Im<a> is antisymmetric
  double scale = 0.0;
  for (double v : r.values[2]) scale = std::max(scale, v);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double fwd = r.at("abs_a", i, j);
      const double rev = r.at("abs_a", n - 1 - i, n - 1 - j);
      CHECK(std::abs(fwd - rev) <= 1e-10 * scale);
      CHECK(std::abs(r.at("re_a", i, j) - r.at("re_a", n - 1 - i, n - 1 - j)) <= 1e-10 * scale);
      CHECK(std::abs(r.at("im_a", i, j) + r.at("im_a", n - 1 - i, n - 1 - j)) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("zeroed coupling collapses the map onto a single resonance ridge") {
  const SweepBase base = driven_single_emitter_base(DephasingConvention::as_written, 25.0);
  const SweepAxis g_axis{AxisName::g_scale, 0.0, 1.0, 2};
  const SweepAxis p_axis{AxisName::delta_p, -40.0, 40.0, 21};
  const SweepResult r = run_map(base, g_axis, p_axis, 4);
  REQUIRE(r.failed_cells == 0);

  const double kin = in_coupling(base.cavity);
  const double alpha = base.drive->alpha;
  const std::vector<double> deltas = axis_values(p_axis);
  long argmax0 = 0;
  for (long j = 0; j < 21; ++j) {
    if (r.at("abs_a", 0, j) > r.at("abs_a", 0, argmax0)) argmax0 = j;
    const double expect = std::sqrt(kin) * alpha /
                          std::hypot(base.cavity.kappa_out, deltas[static_cast<std::size_t>(j)]);
    CHECK(rel_err(r.at("abs_a", 0, j), expect) <= 1e-8);
  }
  CHECK(argmax0 == 10);  // the undetuned center cell

  long argmax1 = 0;
  for (long j = 0; j < 21; ++j) {
    if (r.at("abs_a", 1, j) > r.at("abs_a", 1, argmax1)) argmax1 = j;
  }
  CHECK(std::abs(argmax1 - 10) >= 4);  // coupled row: weight pushed off-center
  CHECK(r.at("abs_a", 1, 10) < r.at("abs_a", 1, argmax1));

  // extinction channel is consistent with the amplitude channel
  const double ext = r.at("extinction", 0, 10);
  const double from_re = -2.0 * std::sqrt(kin) * r.at("re_a", 0, 10) / (units::c0_nm_fs * alpha);
  CHECK(rel_err(ext, from_re) <= 1e-12);
}

TEST_CASE("map runner refuses oversized grids and undriven drive-frequency axes") {
  const SweepBase base = driven_single_emitter_base(DephasingConvention::as_written, 25.0);
  CHECK_THROWS_AS((void)run_map(base, {AxisName::delta_cav, -1.0, 1.0, 400},
                                {AxisName::delta_p, -1.0, 1.0, 300}, 1),
                  std::invalid_argument);

  SweepBase undriven = base;
  undriven.drive.reset();
  CHECK_THROWS_AS((void)run_map(undriven, {AxisName::delta_cav, -1.0, 1.0, 2},
                                {AxisName::delta_p, -1.0, 1.0, 2}, 1),
                  std::invalid_argument);
}

namespace {

SweepBase pair_evolution_base(InitialStateKind kind) {
  const NanocavityParams cav = default_cavity();
  EmitterSpec em = default_emitter(cav);
  em.kappa_vib = 0.0;

  SweepBase base;
  base.space_spec = {1, 2, 1};
  base.cavity = cav;
  base.emitters = {em, em};
  base.initial.kind = kind;
  base.initial.emitter = 1;
  base.evolution.t_max = 300.0;
  base.evolution.dt_initial = 0.01;
  base.evolution.record_stride = 50;
  return base;
}

}  // namespace

TEST_CASE("symmetric-pair position sweep reports the collective coupling curve") {
  const SweepBase base = pair_evolution_base(InitialStateKind::photon);
  const SweepAxis axis{AxisName::position_x, 0.0, 8.0, 5};
  const SweepResult r = run_position_sweep(base, Placement::symmetric_pair, axis, 4);
  REQUIRE(r.failed_cells == 0);
  CHECK(r.channels == std::vector<std::string>{"effective_coupling", "rabi_omega_mev",
                                               "rabi_overdamped", "final_p_dark",
                                               "final_emitter_population_1"});

  const double w2 = default_profile_width_nm * default_profile_width_nm;
  const std::vector<double> xs = axis_values(axis);
  for (long i = 0; i < 5; ++i) {
    const double u = std::exp(-xs[static_cast<std::size_t>(i)] * xs[static_cast<std::size_t>(i)] / (2.0 * w2));
    CHECK(rel_err(r.at("effective_coupling", i), std::sqrt(2.0) * u) <= 1e-12);
    // a photon only feeds the symmetric combination; the dark state stays empty
    CHECK(std::abs(r.at("final_p_dark", i)) <= 1e-6);
  }

  const double g0 = central_coupling(base.cavity, base.emitters[0].dipole);
  const double expect = std::sqrt(8.0 * g0 * g0 - base.cavity.kappa_out * base.cavity.kappa_out);
  CHECK(r.at("rabi_overdamped", 0) == 0.0);
  CHECK(rel_err(r.at("rabi_omega_mev", 0), expect) <= 0.02);

  const SweepResult r1 = run_position_sweep(base, Placement::symmetric_pair, axis, 1);
  CHECK(same_grid(r, r1));
}

TEST_CASE("an emitter excitation leaves half its weight in the protected state at any symmetric offset") {
  const SweepBase base = pair_evolution_base(InitialStateKind::emitter);
  const SweepAxis axis{AxisName::position_x, 0.0, 8.0, 5};
  const SweepResult r = run_position_sweep(base, Placement::symmetric_pair, axis, 4);
  REQUIRE(r.failed_cells == 0);
  for (long i = 0; i < 5; ++i) {
    CHECK(std::abs(r.at("final_p_dark", i) - 0.5) <= 1e-3);
  }
}

TEST_CASE("shrinking a ring of eight onto the center reproduces the co-located collective rate") {
  const NanocavityParams cav = default_cavity();
  EmitterSpec em = default_emitter(cav);
  em.kappa_vib = 0.0;

  SweepBase base;
  base.space_spec = {1, 8, 1};
  base.cavity = cav;
  base.emitters.assign(8, em);
  base.initial.kind = InitialStateKind::photon;
  base.evolution.t_max = 150.0;
  base.evolution.dt_initial = 0.01;
  base.evolution.record_stride = 50;

  const SweepAxis axis{AxisName::ring_radius, 0.0, 3.0, 3};
  const SweepResult r = run_position_sweep(base, Placement::ring, axis, 4);
  REQUIRE(r.failed_cells == 0);
  CHECK(rel_err(r.at("effective_coupling", 0), std::sqrt(8.0)) <= 1e-12);

  // oracle: the same eight emitters placed explicitly on the center
  const SpacePtr space = make_space(base.space_spec);
  std::vector<EmitterSpec> central(8, em);
  const Operator h = build_hamiltonian(space, cav, central, kProfile, std::nullopt);
  const Liouvillian liou = build_liouvillian(h, cav, central);
  const Trajectory traj = evolve(liou, DensityMatrix::single_photon(space), base.evolution);
  const TimeSeries ts = build_time_series(traj, space);
  const RabiEstimate oracle = rabi_frequency(ts.times, ts.channel("emitter_population_1"));
  REQUIRE(!oracle.overdamped);
  CHECK(rel_err(r.at("rabi_omega_mev", 0), oracle.omega_mev) <= 0.01);

  const double g0 = central_coupling(cav, em.dipole);
  CHECK(rel_err(oracle.omega_mev, std::sqrt(32.0 * g0 * g0 - cav.kappa_out * cav.kappa_out)) <= 0.02);

  // larger rings couple less
  CHECK(r.at("effective_coupling", 2) < r.at("effective_coupling", 1));
  CHECK(r.at("effective_coupling", 1) < r.at("effective_coupling", 0));
}

TEST_CASE("position sweeps reject mismatched placement axes and oversized axes") {
  const SweepBase base = pair_evolution_base(InitialStateKind::photon);
  CHECK_THROWS_AS((void)run_position_sweep(base, Placement::symmetric_pair,
                                           {AxisName::ring_radius, 0.0, 3.0, 3}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)run_position_sweep(base, Placement::symmetric_pair,
                                           {AxisName::position_x, 0.0, 8.0, 5}, 1, 4),
                  std::invalid_argument);
}
