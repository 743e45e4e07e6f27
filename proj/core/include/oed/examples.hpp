#pragma once

#include <cstdint>

#include "oed/problem.hpp"
#include "oed/sclqr.hpp"

namespace oed {

/// Deterministic 64-bit generator (splitmix construction) used by every
/// synthetic example so problems are reproducible bit-for-bit from a seed.
struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  /// uniform double in [0, 1) with 53 random bits
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
};

/// Two-state benchmark problem with strongly nonlinear output and cost maps,
/// a moving cost minimum, and eight time-varying inequality rows.
ProblemDef m1();

/// Curvature structure of the synthetic quadratic cost.
enum class QMode { identity, diagonal, dense_spd };

/// Scalable linear-output problem: d_y = 6, box constraints [-1, 1] per
/// coordinate, f_A = -100 x, B = 100 I, cost 0.5 x^T Q x with seeded Q.
/// d_x must be even and at least 4. Same arguments rebuild the identical
/// problem.
ProblemDef synthetic_family(int d_x, uint64_t seed,
                            QMode mode = QMode::dense_spd);

/// Mean-variance allocation: outputs are expected return and total weight,
/// the return target switches to zero when no asset has positive expected
/// return, weights live in [0, 1].
ProblemDef portfolio_synthetic(int d_x, uint64_t seed);

/// The 3-D linear model with printed cost matrices and K_x = 500.
SclqrModel sclqr_paper();

}  // namespace oed
