#pragma once

#include <utility>
#include <vector>

#include "oed/sim.hpp"

namespace oed {

/// Tracking accuracy of a run against a reference state series.
struct AccuracyReport {
  double E_x = 0.0;      ///< time-averaged per-coordinate l1 state error
  double E_sigma = 0.0;  ///< ratio of accumulated cost to reference cost
  std::vector<std::pair<double, double>> excluded_windows;
};

/// Rectangle-rule accuracy metrics over the shared sample grid.
/// Samples falling inside `exclude` windows are dropped from both integrals.
/// Throws LengthMismatch on grid disagreement and ZeroReferenceCost when the
/// reference cost integral is not positive.
AccuracyReport accuracy_metrics(
    const Trajectory& traj, const Mat& ref_states, const Vec& ref_sigma,
    const std::vector<std::pair<double, double>>& exclude = {});

/// Emulate a slow solver's delivered trajectory on a fast sampling grid.
///
/// Row n of chi_star is the minimizer computed at sample n; a computation
/// started at sample n is delivered ceil(tau_slow(n)/tau_fast(n)) samples
/// later and held until the next delivery. Samples before the first delivery
/// hold row 0; when nothing is delivered inside the grid the series is
/// returned unchanged.
Mat emulate_delayed(const Vec& tau_slow, const Vec& tau_fast,
                    const Mat& chi_star);

/// Cubic trendline fit tau = (p1 d + p2)^3 via least squares on cube roots.
struct TrendFit {
  double p1 = 0.0;
  double p2 = 0.0;
  double r_squared = 0.0;  ///< of the cube-root-transformed regression
};

/// Fit the cubic trendline; needs at least 3 points with positive times and
/// nonconstant dims. Throws DegenerateFit otherwise.
TrendFit fit_cube_trend(const std::vector<double>& dims,
                        const std::vector<double>& mean_times);

/// Order statistics of a duration series.
struct TimingSummary {
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double min = 0.0;
  double max = 0.0;
  double mad_over_median = 0.0;  ///< median absolute deviation over median
};

/// Summarize durations; quantiles interpolate linearly at (n-1)p.
/// Throws EmptySeries on an empty input.
TimingSummary timing_summary(const Vec& tau);

}  // namespace oed
