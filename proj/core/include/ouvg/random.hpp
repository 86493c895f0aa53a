#pragma once

#include <cstdint>
#include <random>

namespace ouvg {

using Rng = std::mt19937_64;

/// Independent generator for substream `index` of a run seeded with `seed`.
/// Streams depend only on (seed, index), so results do not depend on how work
/// is split across threads.
inline Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x6f75u};
  return Rng(seq);
}

}  // namespace ouvg
