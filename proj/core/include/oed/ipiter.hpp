#pragma once

#include <utility>
#include <vector>

#include "oed/controller.hpp"

namespace oed {

/// Result of iterating the minimizing step at one instant.
struct SolveReport {
  Vec chi_star;                     ///< best iterate found
  int iterations = 0;               ///< steps taken before acceptance
  double final_eta_norm = 0.0;      ///< max-norm of eta at chi_star
  std::vector<double> rate_samples; ///< tail contraction ratios, at most 5
  bool converged = false;           ///< false when max_iter was exhausted
};

struct LagrangeMultiplier {
  Vec zeta;
};

/// One interior-point step chi' = chi + eta(t, chi).
Vec ip_step(const ProblemDef& p, const BarrierConfig& cfg, double t,
            const Vec& chi);

/// Drive the minimizing direction to zero at one instant. Full steps are
/// taken while they contract both the direction norm and the output
/// residual; outside that regime the iterate is transported along the flow
/// of a smoothed direction field under a residual-decay step control, and
/// finished with damped Newton steps on the raw direction. Convergence
/// always means the raw direction max-norm dropped to tol; iterations
/// counts accepted state updates of any kind.
SolveReport solve_instant(const ProblemDef& p, const BarrierConfig& cfg,
                          double t, const Vec& chi0, double tol = 1e-10,
                          int max_iter = 200);

/// Multiplier estimate zeta = (H R^-1 H^T)^-1 (ybar - h + H R^-1 r).
LagrangeMultiplier lagrange_multiplier(const ProblemDef& p,
                                       const BarrierConfig& cfg, double t,
                                       const Vec& chi);

/// Max-norm of the first-order optimality residual [r - H^T zeta; ybar - h].
double kkt_residual(const ProblemDef& p, const BarrierConfig& cfg, double t,
                    const Vec& chi, const LagrangeMultiplier& mult);

/// One interior-point step on the stacked trajectory problem over the given
/// sample times. The stacked step decouples into independent per-instant
/// blocks, and is computed that way.
Vec stacked_ip_step(const ProblemDef& p, const BarrierConfig& cfg,
                    const std::vector<double>& sample_times, const Vec& phi);

struct RefPoint {
  double t = 0.0;
  Vec chi;
  int iterations = 0;
  bool converged = false;
  bool jump = false;  ///< inter-sample step exceeded 10x the median
};

/// Instant-minimizer samples along a time grid with jump annotations.
struct RefTrajectory {
  std::vector<RefPoint> points;
  double median_step = 0.0;
  /// intervals of half-width 0.05 around each flagged jump
  std::vector<std::pair<double, double>> exclusion_windows;
};

/// Solve each sample with solve_instant, warm-starting from the previous
/// sample's minimizer. Unconverged samples are recorded, not fatal.
RefTrajectory reference_trajectory(const ProblemDef& p,
                                   const BarrierConfig& cfg,
                                   const std::vector<double>& times,
                                   const Vec& chi_init, double tol = 1e-10,
                                   int max_iter = 200);

/// Reference-tracking control: solve B(x) u = -f_A(x) + K_chi (chi_star - x).
Vec tracking_control_from_solution(const EvalBundle& bundle,
                                   const Vec& chi_star, double K_chi);

}  // namespace oed
