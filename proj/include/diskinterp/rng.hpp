#pragma once

#include <cstdint>
#include <random>

namespace diskinterp {

/// The seeded generator used for every random family. std::mt19937_64 is
/// fully specified by the standard; the distributions below are written out
/// by hand because the std:: ones are implementation-defined.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

}  // namespace diskinterp
