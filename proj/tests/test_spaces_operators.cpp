#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "pqed/hilbert.hpp"
#include "pqed/operators.hpp"
#include "pqed/superoperator.hpp"

using namespace pqed;

namespace {

// hand-built single-factor matrices in the frozen conventions
DenseMatrix photon_ladder(int n_max) {
  DenseMatrix a = DenseMatrix::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

DenseMatrix two_level(double ee, double eg, double ge, double gg) {
  DenseMatrix m(2, 2);  // basis order (excited, ground)
  m << ee, eg, ge, gg;
  return m;
}

DenseMatrix random_dense(int dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(u(rng), u(rng));
  }
  return m;
}

Operator as_operator(const SpacePtr& space, const DenseMatrix& m) {
  return Operator(space, SparseMatrix(m.sparseView()));
}

double max_abs(const DenseMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("basis enumeration is Fock-major with excited-before-ground emitter factors") {
  const SpacePtr space = make_space({2, 2, std::nullopt});
  REQUIRE(space->dim() == 12);
  CHECK(space->full_dim() == 12);

  for (int k = 0; k < 12; ++k) {
    const BasisState& s = space->states()[static_cast<std::size_t>(k)];
    CHECK(s.photons == k / 4);
    CHECK(s.ground_bits == static_cast<std::uint32_t>(k % 4));
    CHECK(space->full_index(s) == k);
    CHECK(space->position(s.photons, s.ground_bits) == k);
    const int excited = 2 - std::popcount(s.ground_bits);
    CHECK(space->excitation(s) == s.photons + excited);
  }

  // emitter 1 maps to the high bit, emitter 2 to the low bit; a set bit means ground
  const BasisState eg{0, 0b01};
  CHECK(space->emitter_excited(eg, 1));
  CHECK(!space->emitter_excited(eg, 2));
  const BasisState ge{0, 0b10};
  CHECK(!space->emitter_excited(ge, 1));
  CHECK(space->emitter_excited(ge, 2));
}

TEST_CASE("sector truncation keeps exactly the low-excitation states") {
  const SpacePtr capped = make_space({2, 2, 1});
  REQUIRE(capped->dim() == 4);
  CHECK(capped->full_dim() == 12);
  CHECK(capped->is_truncated());

  const auto retained = capped->retained_full_indices();
  REQUIRE(retained.size() == 4);
  CHECK(retained[0] == 1);  // |0, e g>
  CHECK(retained[1] == 2);  // |0, g e>
  CHECK(retained[2] == 3);  // |0, g g>
  CHECK(retained[3] == 7);  // |1, g g>

  CHECK(capped->position(0, 0b11) == 2);
  CHECK(capped->position(1, 0b11) == 3);
  CHECK(capped->position(2, 0b11) == -1);  // two photons: over the cap
  CHECK(capped->position(1, 0b01) == -1);  // photon + excited emitter: over the cap
  CHECK(capped->position(0, 0b00) == -1);  // both emitters excited

  const SpacePtr eight = make_space({1, 8, 1});
  CHECK(eight->dim() == 10);  // ground + photon + 8 single-emitter states
  CHECK(eight->full_dim() == 512);
}

TEST_CASE("sector projection maps are mutually inverse on the retained sector") {
  const SectorProjection proj = sector_project({2, 2, std::nullopt}, 1);
  REQUIRE(proj.truncated->dim() == 4);
  REQUIRE(proj.full->dim() == 12);

  const DenseMatrix ri = DenseMatrix(proj.restriction) * DenseMatrix(proj.injection);
  CHECK(max_abs(ri - DenseMatrix::Identity(4, 4)) == 0.0);

  DenseMatrix projector = DenseMatrix(proj.injection) * DenseMatrix(proj.restriction);
  for (int k = 0; k < 12; ++k) {
    const bool kept = std::find(proj.retained.begin(), proj.retained.end(), k) != proj.retained.end();
    CHECK(projector(k, k) == (kept ? 1.0 : 0.0));
  }
  projector.diagonal().setZero();
  CHECK(max_abs(projector) == 0.0);
}

TEST_CASE("photon ladder carries sqrt(n) amplitudes") {
  const SpacePtr space = make_space({3, 0, std::nullopt});
  REQUIRE(space->dim() == 4);
  const DenseMatrix a = annihilation(space).dense();
  CHECK(max_abs(a - photon_ladder(3)) == 0.0);
  CHECK(max_abs(creation(space).dense() - photon_ladder(3).adjoint()) == 0.0);
  CHECK(max_abs(annihilation(space).adjoint().dense() - creation(space).dense()) == 0.0);
}

TEST_CASE("composite operators equal explicit Kronecker products") {
  const SpacePtr space = make_space({2, 2, std::nullopt});
  const DenseMatrix i3 = DenseMatrix::Identity(3, 3);
  const DenseMatrix i2 = DenseMatrix::Identity(2, 2);
  const DenseMatrix a3 = photon_ladder(2);
  const DenseMatrix sz = two_level(1, 0, 0, -1);
  const DenseMatrix sm = two_level(0, 0, 1, 0);   // |g><e|
  const DenseMatrix sp = two_level(0, 1, 0, 0);   // |e><g|

  const DenseMatrix a_expect = Eigen::kroneckerProduct(a3, Eigen::kroneckerProduct(i2, i2).eval()).eval();
  CHECK(max_abs(annihilation(space).dense() - a_expect) == 0.0);

  const DenseMatrix sz1 = Eigen::kroneckerProduct(i3, Eigen::kroneckerProduct(sz, i2).eval()).eval();
  const DenseMatrix sz2 = Eigen::kroneckerProduct(i3, Eigen::kroneckerProduct(i2, sz).eval()).eval();
  CHECK(max_abs(pauli(space, PauliKind::z, 1).dense() - sz1) == 0.0);
  CHECK(max_abs(pauli(space, PauliKind::z, 2).dense() - sz2) == 0.0);

  const DenseMatrix sm1 = Eigen::kroneckerProduct(i3, Eigen::kroneckerProduct(sm, i2).eval()).eval();
  const DenseMatrix sp2 = Eigen::kroneckerProduct(i3, Eigen::kroneckerProduct(i2, sp).eval()).eval();
  CHECK(max_abs(pauli(space, PauliKind::minus, 1).dense() - sm1) == 0.0);
  CHECK(max_abs(pauli(space, PauliKind::plus, 2).dense() - sp2) == 0.0);
}

TEST_CASE("pauli algebra holds emitter by emitter") {
  const SpacePtr space = make_space({2, 2, std::nullopt});
  const DenseMatrix id = identity_operator(space).dense();
  CHECK(max_abs(id - DenseMatrix::Identity(12, 12)) == 0.0);

  for (int j : {1, 2}) {
    const Operator sp = pauli(space, PauliKind::plus, j);
    const Operator sm = pauli(space, PauliKind::minus, j);
    CHECK(max_abs((sp * sm + sm * sp).dense() - id) <= 1e-15);
    CHECK(max_abs((sp * sp).dense()) == 0.0);
    CHECK(max_abs(sp.adjoint().dense() - sm.dense()) == 0.0);
  }

  const Operator z1 = pauli(space, PauliKind::z, 1);
  const Operator z2 = pauli(space, PauliKind::z, 2);
  CHECK(max_abs((z1 * z2 - z2 * z1).dense()) == 0.0);
  const Operator m1 = pauli(space, PauliKind::minus, 1);
  const Operator p2 = pauli(space, PauliKind::plus, 2);
  CHECK(max_abs((m1 * p2 - p2 * m1).dense()) == 0.0);
}

TEST_CASE("operator algebra rejects mismatched spaces") {
  const SpacePtr small = make_space({1, 0, std::nullopt});
  const SpacePtr large = make_space({2, 0, std::nullopt});
  Operator a = annihilation(small);
  const Operator b = annihilation(large);
  CHECK_THROWS_AS(a += b, std::invalid_argument);
  CHECK_THROWS_AS((void)(a * b), std::invalid_argument);
}

TEST_CASE("vectorization is column-stacking and invertible") {
  const DenseMatrix rho = random_dense(5, 17);
  const ComplexVector v = vectorize(rho);
  REQUIRE(v.size() == 25);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) CHECK(v(i + 5 * j) == rho(i, j));
  }
  CHECK(max_abs(devectorize(v, 5) - rho) == 0.0);
}

TEST_CASE("superoperators realize left, right, and sandwich multiplication") {
  const SpacePtr space = make_space({1, 1, std::nullopt});
  const int d = space->dim();
  REQUIRE(d == 4);
  const DenseMatrix am = random_dense(d, 5);
  const DenseMatrix bm = random_dense(d, 6);
  const DenseMatrix rho = random_dense(d, 7);
  const Operator a = as_operator(space, am);
  const Operator b = as_operator(space, bm);

  CHECK(max_abs(spre(a).apply(rho) - am * rho) <= 1e-13);
  CHECK(max_abs(spost(a).apply(rho) - rho * am) <= 1e-13);
  CHECK(max_abs(ssandwich(a, b).apply(rho) - am * rho * bm) <= 1e-13);

  // the sandwich acts on stacked columns as kron(B^T, A)
  const ComplexVector lhs = ssandwich(a, b).apply(vectorize(rho));
  const ComplexVector rhs = vectorize((am * rho * bm).eval());
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("dissipator matches its defining formula") {
  const SpacePtr space = make_space({1, 1, std::nullopt});
  const int d = space->dim();
  const DenseMatrix lm = random_dense(d, 11);
  const DenseMatrix rho = random_dense(d, 12);
  const Operator l = as_operator(space, lm);
  const double gamma = 0.37;

  const DenseMatrix ldl = (lm.adjoint() * lm).eval();
  const DenseMatrix expect =
      gamma * (lm * rho * lm.adjoint() - 0.5 * (ldl * rho + rho * ldl));
  CHECK(max_abs(dissipator(l, gamma).apply(rho) - expect) <= 1e-12);

  const DenseMatrix h = (random_dense(d, 13) + random_dense(d, 13).adjoint()).eval();
  const Complex i_unit(0.0, 1.0);
  const DenseMatrix comm = (-i_unit * (h * rho - rho * h)).eval();
  CHECK(max_abs(commutator_generator(as_operator(space, h)).apply(rho) - comm) <= 1e-12);
}
