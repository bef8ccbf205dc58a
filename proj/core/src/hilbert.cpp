#include "pqed/hilbert.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace pqed {

HilbertSpace::HilbertSpace(HilbertSpec spec) : spec_(spec) {
  if (spec_.n_max < 0) throw std::invalid_argument("HilbertSpec: n_max must be >= 0");
  if (spec_.n_emitters < 0 || spec_.n_emitters > 8)
    throw std::invalid_argument("HilbertSpec: n_emitters must be in [0, 8]");
  if (spec_.sector_cap && *spec_.sector_cap < 0)
    throw std::invalid_argument("HilbertSpec: sector_cap must be >= 0");

  const int n_em = spec_.n_emitters;
  const std::uint32_t em_states = 1u << n_em;
  states_.reserve(static_cast<std::size_t>(spec_.n_max + 1) * em_states);
  for (int n = 0; n <= spec_.n_max; ++n) {
    for (std::uint32_t bits = 0; bits < em_states; ++bits) {
      BasisState s{n, bits};
      if (spec_.sector_cap && excitation(s) > *spec_.sector_cap) continue;
      index_.emplace(full_index(s), static_cast<int>(states_.size()));
      states_.push_back(s);
    }
  }
}

int HilbertSpace::full_dim() const {
  return (spec_.n_max + 1) << spec_.n_emitters;
}

std::int64_t HilbertSpace::full_index(const BasisState& s) const {
  return (static_cast<std::int64_t>(s.photons) << spec_.n_emitters) | s.ground_bits;
}

int HilbertSpace::excitation(const BasisState& s) const {
  return s.photons + spec_.n_emitters - std::popcount(s.ground_bits);
}

bool HilbertSpace::emitter_excited(const BasisState& s, int emitter) const {
  return !((s.ground_bits >> (spec_.n_emitters - emitter)) & 1u);
}

int HilbertSpace::position(int photons, std::uint32_t ground_bits) const {
  if (photons < 0 || photons > spec_.n_max) return -1;
  const auto it = index_.find(full_index(BasisState{photons, ground_bits}));
  return it == index_.end() ? -1 : it->second;
}

std::vector<std::int64_t> HilbertSpace::retained_full_indices() const {
  std::vector<std::int64_t> out;
  out.reserve(states_.size());
  for (const auto& s : states_) out.push_back(full_index(s));
  return out;
}

SpacePtr make_space(const HilbertSpec& spec) {
  return std::make_shared<HilbertSpace>(spec);
}

SectorProjection sector_project(const HilbertSpec& spec, int cap) {
  if (cap < 0) throw std::invalid_argument("sector_project: cap must be >= 0");

  HilbertSpec full_spec = spec;
  full_spec.sector_cap.reset();
  HilbertSpec trunc_spec = spec;
  trunc_spec.sector_cap = cap;

  SectorProjection p;
  p.full = make_space(full_spec);
  p.truncated = make_space(trunc_spec);
  p.retained = p.truncated->retained_full_indices();

  const int df = p.full->dim();
  const int dt = p.truncated->dim();
  std::vector<Triplet> trip;
  trip.reserve(p.retained.size());
  for (int k = 0; k < dt; ++k)
    trip.emplace_back(static_cast<int>(p.retained[static_cast<std::size_t>(k)]), k, Complex{1.0, 0.0});
  p.injection.resize(df, dt);
  p.injection.setFromTriplets(trip.begin(), trip.end());
  p.restriction = p.injection.transpose();
  return p;
}

}  // namespace pqed
