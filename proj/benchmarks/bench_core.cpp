// Microbenchmarks for the hot paths: operator assembly, generator assembly
// and application, the direct steady-state solve, time evolution, and one
// full sweep cell.

#include <benchmark/benchmark.h>

#include <optional>
#include <vector>

#include "pqed/config.hpp"
#include "pqed/integrators.hpp"
#include "pqed/liouvillian.hpp"
#include "pqed/steady_state.hpp"
#include "pqed/system.hpp"

namespace {

using namespace pqed;

const ModeProfile kProfile = ModeProfile::analytic(default_profile_width_nm);

struct Fixture {
  NanocavityParams cavity = default_cavity();
  std::vector<EmitterSpec> emitters;
  SpacePtr space;
  std::optional<DriveSpec> drive;

  Fixture(int n_max, int n_emitters, std::optional<int> cap, bool driven) {
    EmitterSpec em = default_emitter(cavity);
    emitters.assign(static_cast<std::size_t>(n_emitters), em);
    space = make_space({n_max, n_emitters, cap});
    if (driven) {
      drive = DriveSpec{cavity.omega_cav, drive_for_photon_number(cavity, 0.0, 1e-6)};
    }
  }

  Operator hamiltonian() const {
    return build_hamiltonian(space, cavity, emitters, kProfile, drive);
  }

  Liouvillian liouvillian() const { return build_liouvillian(hamiltonian(), cavity, emitters); }
};

void BM_BuildHamiltonian(benchmark::State& state) {
  const Fixture f(2, 2, std::nullopt, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.hamiltonian());
  }
}
BENCHMARK(BM_BuildHamiltonian);

void BM_BuildLiouvillian(benchmark::State& state) {
  const Fixture f(2, 2, std::nullopt, false);
  const Operator h = f.hamiltonian();
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_liouvillian(h, f.cavity, f.emitters));
  }
}
BENCHMARK(BM_BuildLiouvillian);

void BM_LiouvillianApply(benchmark::State& state) {
  const Fixture f(2, 2, std::nullopt, false);
  const Liouvillian liou = f.liouvillian();
  ComplexVector v = ComplexVector::Ones(liou.superop().super_dim());
  for (auto _ : state) {
    benchmark::DoNotOptimize(liou.apply(v));
  }
}
BENCHMARK(BM_LiouvillianApply);

void BM_SteadyStateSolve(benchmark::State& state) {
  const Fixture f(2, 1, std::nullopt, true);
  const Liouvillian liou = f.liouvillian();
  for (auto _ : state) {
    benchmark::DoNotOptimize(steady_state(liou));
  }
}
BENCHMARK(BM_SteadyStateSolve);

void BM_EvolveShortWindow(benchmark::State& state) {
  const Fixture f(1, 2, 1, false);
  const Liouvillian liou = f.liouvillian();
  const DensityMatrix rho0 = DensityMatrix::single_photon(f.space);
  EvolutionConfig cfg;
  cfg.t_max = 50.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve(liou, rho0, cfg));
  }
}
BENCHMARK(BM_EvolveShortWindow);

void BM_SweepCell(benchmark::State& state) {
  const Fixture f(2, 1, std::nullopt, true);
  for (auto _ : state) {
    const Liouvillian liou = f.liouvillian();
    benchmark::DoNotOptimize(steady_state(liou));
  }
}
BENCHMARK(BM_SweepCell);

}  // namespace

BENCHMARK_MAIN();
