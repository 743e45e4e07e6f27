#pragma once

#include <vector>

#include "oed/linalg.hpp"

namespace oed {

/// Sharpness and weight settings for the constraint penalty.
struct BarrierConfig {
  enum class P2Mode { designed, fixed };
  P2Mode p2_mode = P2Mode::designed;
  double K_RQ = 1e4;    ///< target ratio between penalty and cost curvature
  double p2 = 1.0;      ///< used directly when p2_mode == fixed
  double p1_ref = 1e3;  ///< sharpness for the smooth reference penalty
};

/// Rows of the constraint pair (G, c) that are strictly violated at a point.
struct ActiveSet {
  std::vector<int> indices;  ///< ascending row indices with g_i > 0
  Mat Gbar;                  ///< violated rows of G
  Vec gbar;                  ///< matching entries of g = Gx + c
  bool empty() const { return indices.empty(); }
};

/// Smooth penalty (p2/p1) log(1 + exp(p1 s)), evaluated without overflow.
double beta_ref(double s, double p1, double p2);

/// Sharp-limit slope of the penalty gradient: p2^2 s for s > 0, else 0.
double xi_limit(double s, double p2);

/// Sharp-limit curvature: p2^2 for s > 0, (ln 2 + 1) p2^2 / 4 at s = 0, else 0.
double Xi_limit(double s, double p2);

/// Choose p2 so the penalty curvature dominates the cost curvature by K_RQ:
/// p2^2 = (K_RQ - 1) ||Q|| / ||Gbar^T Gbar|| in the max absolute row sum norm.
/// Throws EmptyActiveSet when no rows are violated. Results for bitwise
/// identical inputs are cached; the cache is thread safe.
double design_p2(const Mat& Q, const Mat& Gbar, double K_RQ);

/// Collect the strictly violated rows of g = G x + c at the given point.
ActiveSet active_set(const Mat& G, const Vec& c, const Vec& x);

}  // namespace oed
