#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pqed/types.hpp"

namespace pqed {

// Composite space: one bosonic cavity mode truncated at n_max photons and
// n_emitters two-level emitters.
//
// Frozen basis conventions:
//   - the global index runs Fock-major: photon number slowest, emitter 1 next,
//     emitter n_emitters fastest;
//   - each emitter factor is ordered (excited, ground), i.e. sigma_z = diag(+1,-1);
//   - a|n> = sqrt(n)|n-1>.
//
// An optional sector_cap keeps only basis states whose total excitation
// (photons + excited emitters) does not exceed the cap.
struct HilbertSpec {
  int n_max = 2;
  int n_emitters = 0;
  std::optional<int> sector_cap;

  bool operator==(const HilbertSpec&) const = default;
};

struct BasisState {
  int photons = 0;
  // bit (n_emitters - j) set  <=>  emitter j (1-based) is in its ground state
  std::uint32_t ground_bits = 0;
};

class HilbertSpace {
 public:
  explicit HilbertSpace(HilbertSpec spec);

  const HilbertSpec& spec() const { return spec_; }
  int n_max() const { return spec_.n_max; }
  int n_emitters() const { return spec_.n_emitters; }
  bool is_truncated() const { return spec_.sector_cap.has_value(); }

  int dim() const { return static_cast<int>(states_.size()); }
  int full_dim() const;  // dimension of the untruncated space

  const std::vector<BasisState>& states() const { return states_; }

  std::int64_t full_index(const BasisState& s) const;
  int excitation(const BasisState& s) const;
  bool emitter_excited(const BasisState& s, int emitter) const;  // 1-based

  // position of a basis state in this space, -1 if not retained
  int position(int photons, std::uint32_t ground_bits) const;

  // full-space indices of the retained states, ascending
  std::vector<std::int64_t> retained_full_indices() const;

 private:
  HilbertSpec spec_;
  std::vector<BasisState> states_;
  std::unordered_map<std::int64_t, int> index_;
};

using SpacePtr = std::shared_ptr<const HilbertSpace>;

SpacePtr make_space(const HilbertSpec& spec);

// Excitation-sector truncation of a space, with the maps between the truncated
// and full spaces.  injection * restriction is the orthogonal projector onto
// the retained sector.
struct SectorProjection {
  SpacePtr full;
  SpacePtr truncated;
  std::vector<std::int64_t> retained;  // full-space indices, ascending
  SparseMatrix injection;              // full_dim x truncated_dim
  SparseMatrix restriction;            // truncated_dim x full_dim
};

SectorProjection sector_project(const HilbertSpec& spec, int cap);

}  // namespace pqed
