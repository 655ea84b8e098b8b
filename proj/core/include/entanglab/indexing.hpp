#pragma once

#include <cstdint>
#include <vector>

#include "entanglab/lattice.hpp"

namespace entanglab {

inline std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

/// Number of base-nu configurations of a region.
inline std::uint64_t config_count(const Region& r, int nu) {
  return ipow(static_cast<std::uint64_t>(nu), r.size());
}

inline int digit_at(std::uint64_t code, int pos, int nu) {
  for (int i = 0; i < pos; ++i) code /= nu;
  return static_cast<int>(code % nu);
}

/// For each configuration code of `sub` (digits over sub's sorted sites),
/// the additive contribution to the code of `parent`. Codes of disjoint
/// sub-regions of `parent` add without carries, so a parent configuration
/// splits as parent_code = sum_j embed[sub_j_code].
std::vector<std::uint64_t> embed_codes(const Region& parent, const Region& sub,
                                       int nu);

/// Extract a sub-region configuration code from a parent code.
std::uint64_t extract_code(const Region& parent, const Region& sub, int nu,
                           std::uint64_t parent_code);

/// sub-region code of every parent configuration, as a dense lookup table.
std::vector<std::uint32_t> sub_index_array(const Region& parent,
                                           const Region& sub, int nu);

}  // namespace entanglab
