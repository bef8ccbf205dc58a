#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "pqed/config.hpp"
#include "pqed/liouvillian.hpp"
#include "pqed/system.hpp"
#include "pqed/units.hpp"

using namespace pqed;

namespace {

const ModeProfile kProfile = ModeProfile::analytic(default_profile_width_nm);

std::vector<EmitterSpec> central(int n, double kappa_vib) {
  const NanocavityParams cav = default_cavity();
  EmitterSpec em = default_emitter(cav);
  em.kappa_vib = kappa_vib;
  return std::vector<EmitterSpec>(static_cast<std::size_t>(n), em);
}

double max_abs(const DenseMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

std::vector<double> sorted_real_eigenvalues(const DenseMatrix& h) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end());
  return v;
}

DenseMatrix random_hermitian(int dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(u(rng), u(rng));
  }
  return 0.5 * (m + m.adjoint()).eval();
}

}  // namespace

TEST_CASE("hamiltonian is hermitian with and without a drive") {
  const NanocavityParams cav = default_cavity();
  const auto ems = central(2, 25.0);
  const SpacePtr space = make_space({2, 2, std::nullopt});

  const Operator h0 = build_hamiltonian(space, cav, ems, kProfile, std::nullopt);
  CHECK(max_abs((h0.dense() - h0.dense().adjoint()).eval()) <= 1e-12);

  const DriveSpec drive{cav.omega_cav - 10.0, 0.02};
  const Operator hd = build_hamiltonian(space, cav, ems, kProfile, drive);
  CHECK(max_abs((hd.dense() - hd.dense().adjoint()).eval()) <= 1e-12);
}

TEST_CASE("resonant spectrum shows the sqrt(n) doublet ladder") {
  const NanocavityParams cav = default_cavity();
  const auto ems = central(1, 25.0);
  const double g = central_coupling(cav, ems[0].dipole);

  const SpacePtr one = make_space({1, 1, std::nullopt});
  const auto ev1 = sorted_real_eigenvalues(build_hamiltonian(one, cav, ems, kProfile, std::nullopt).dense());
  REQUIRE(ev1.size() == 4);
  CHECK(std::abs(ev1[0] + g) <= 1e-9);
  CHECK(std::abs(ev1[1]) <= 1e-9);
  CHECK(std::abs(ev1[2]) <= 1e-9);
  CHECK(std::abs(ev1[3] - g) <= 1e-9);

  const SpacePtr two = make_space({2, 1, std::nullopt});
  const auto ev2 = sorted_real_eigenvalues(build_hamiltonian(two, cav, ems, kProfile, std::nullopt).dense());
  REQUIRE(ev2.size() == 6);
  const double r2 = std::sqrt(2.0);
  CHECK(std::abs(ev2[0] + r2 * g) <= 1e-9);
  CHECK(std::abs(ev2[1] + g) <= 1e-9);
  CHECK(std::abs(ev2[2]) <= 1e-9);
  CHECK(std::abs(ev2[3]) <= 1e-9);
  CHECK(std::abs(ev2[4] - g) <= 1e-9);
  CHECK(std::abs(ev2[5] - r2 * g) <= 1e-9);
}

TEST_CASE("undriven hamiltonian conserves total excitation; the drive term breaks it") {
  const NanocavityParams cav = default_cavity();
  const auto ems = central(2, 25.0);
  const SpacePtr space = make_space({2, 2, std::nullopt});

  Operator n_exc = creation(space) * annihilation(space);
  const Operator id = identity_operator(space);
  for (int j = 1; j <= 2; ++j) {
    n_exc += 0.5 * (pauli(space, PauliKind::z, j) + id);
  }

  const Operator h0 = build_hamiltonian(space, cav, ems, kProfile, std::nullopt);
  CHECK(max_abs((h0 * n_exc - n_exc * h0).dense()) <= 1e-9);

  const DriveSpec drive{ems[0].omega_qe, 0.05};
  const Operator hd = build_hamiltonian(space, cav, ems, kProfile, drive);
  CHECK(max_abs((hd * n_exc - n_exc * hd).dense()) > 1e-6);

  // with the drive frequency pinned to the undriven frame, the difference is
  // exactly the displacement term
  const double kin = in_coupling(cav);
  const Complex i_unit(0.0, 1.0);
  const Operator a = annihilation(space);
  const DenseMatrix expect =
      (i_unit * std::sqrt(kin) * drive.alpha * (a.dense() - a.adjoint().dense())).eval();
  CHECK(max_abs((hd.dense() - h0.dense() - expect).eval()) <= 1e-9);
}

TEST_CASE("decoupled undriven hamiltonian is diagonal") {
  NanocavityParams cav = default_cavity();
  const auto ems = central(2, 25.0);
  const SpacePtr space = make_space({2, 2, std::nullopt});
  DenseMatrix h = build_hamiltonian(space, cav, ems, {0.0, 0.0}, std::nullopt).dense();
  h.diagonal().setZero();
  CHECK(max_abs(h) == 0.0);
}

TEST_CASE("sector-truncated hamiltonian equals the projected full hamiltonian") {
  const NanocavityParams cav = default_cavity();
  const auto ems = central(2, 25.0);
  const SectorProjection proj = sector_project({2, 2, std::nullopt}, 1);

  const DenseMatrix h_full = build_hamiltonian(proj.full, cav, ems, kProfile, std::nullopt).dense();
  const DenseMatrix h_trunc =
      build_hamiltonian(proj.truncated, cav, ems, kProfile, std::nullopt).dense();
  const DenseMatrix projected =
      DenseMatrix(proj.restriction) * h_full * DenseMatrix(proj.injection);
  CHECK(max_abs((h_trunc - projected).eval()) <= 1e-12);
}

TEST_CASE("liouvillian preserves the trace and matches a dense right-hand side") {
  const NanocavityParams cav = default_cavity();
  const auto ems = central(1, 25.0);
  const SpacePtr space = make_space({2, 1, std::nullopt});
  const DriveSpec drive{cav.omega_cav - 7.0, 0.03};
  const Operator h = build_hamiltonian(space, cav, ems, kProfile, drive);

  for (DephasingConvention conv : {DephasingConvention::as_written, DephasingConvention::half_rate}) {
    const Liouvillian liou = build_liouvillian(h, cav, ems, conv);
    CHECK(liou.trace_defect() <= 1e-12);

    DenseMatrix rho = random_hermitian(space->dim(), 23);
    rho /= rho.trace();

    const DenseMatrix hm = h.dense();
    const DenseMatrix am = annihilation(space).dense();
    const DenseMatrix zm = pauli(space, PauliKind::z, 1).dense();
    const Complex i_unit(0.0, 1.0);
    auto damp = [&](const DenseMatrix& l, double gamma) {
      const DenseMatrix ldl = (l.adjoint() * l).eval();
      return (gamma * (l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl))).eval();
    };
    DenseMatrix rhs = (-i_unit * (hm * rho - rho * hm)).eval();
    rhs += damp(am, 2.0 * cav.kappa_out);
    rhs += damp(zm, dephasing_sandwich_rate(ems[0].kappa_vib, conv));
    rhs /= units::hbar_mev_fs;

    CHECK(max_abs((liou.apply(rho) - rhs).eval()) <= 1e-12);
  }
}
