#pragma once

#include <random>

namespace uwv {

// Canonical [0,1) double from one generator call. Used instead of
// std::uniform_real_distribution so that seeded streams are identical
// across standard library implementations.
inline double canonical(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * canonical(rng);
}

}  // namespace uwv
