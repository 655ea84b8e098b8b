#pragma once

#include <string>

#include "entanglab/states.hpp"

namespace entanglab {

/// State-vector file: magic "QPSV", version u32 = 1, local_dim u8,
/// n_sites u16, one u16 per window dimension, then nu^N interleaved
/// little-endian f64 (re, im) pairs in lexicographic configuration order
/// (site 0 = least significant digit). The dimension count is recovered
/// from the file size, so the file must be a regular seekable file.
void save_qpsv(const std::string& path, const PureState& psi);

PureState load_qpsv(const std::string& path);

}  // namespace entanglab
