#include "pqed/liouvillian.hpp"

#include <stdexcept>

#include "pqed/units.hpp"

namespace pqed {

Liouvillian::Liouvillian(SpacePtr space, SuperOperator superop)
    : space_(std::move(space)), superop_(std::move(superop)) {
  if (!space_) throw std::invalid_argument("Liouvillian: null space");
  if (!(superop_.space().spec() == space_->spec())) {
    throw std::invalid_argument("Liouvillian: superoperator space mismatch");
  }
}

double Liouvillian::trace_defect() const {
  const int d = space_->dim();
  const SparseMatrix& m = superop_.matrix();
  // t^T L, with t selecting the diagonal positions i + i*d
  Eigen::RowVectorXcd t = Eigen::RowVectorXcd::Zero(m.rows());
  for (int i = 0; i < d; ++i) t[i + static_cast<long>(i) * d] = Complex(1.0, 0.0);
  Eigen::RowVectorXcd w = t * m;
  return w.cwiseAbs().maxCoeff();
}

Liouvillian build_liouvillian(const Operator& h, const NanocavityParams& cav,
                              const std::vector<EmitterSpec>& emitters,
                              DephasingConvention convention) {
  const SpacePtr& space = h.space_ptr();
  if (space->n_emitters() != static_cast<int>(emitters.size())) {
    throw std::invalid_argument("build_liouvillian: emitter count does not match space");
  }
  const double herm = (h.dense() - h.dense().adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) throw std::invalid_argument("build_liouvillian: Hamiltonian is not Hermitian");

  SuperOperator gen = commutator_generator(h);  // meV units
  if (space->n_max() >= 1 && cav.kappa_out > 0.0) {
    gen += dissipator(annihilation(space), 2.0 * cav.kappa_out);
  }
  for (std::size_t j = 0; j < emitters.size(); ++j) {
    const double rate = dephasing_sandwich_rate(emitters[j].kappa_vib, convention);
    if (rate > 0.0) {
      gen += dissipator(pauli(space, PauliKind::z, static_cast<int>(j + 1)), rate);
    }
  }
  gen *= Complex(1.0 / units::hbar_mev_fs, 0.0);  // meV -> 1/fs
  return Liouvillian(space, std::move(gen));
}

}  // namespace pqed
