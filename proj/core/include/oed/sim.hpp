#pragma once

#include <functional>
#include <string>

#include "oed/ipiter.hpp"

namespace oed {

/// Closed-loop integration settings. (t_final - t0)/dt must be a positive
/// integer within 1e-9.
struct SimConfig {
  enum class Law { oed, tracking_from_solution, constrained };

  double t0 = 0.0;
  double t_final = 1.0;
  double dt = 1.0 / 2000.0;
  double K_x = 100.0;
  Law law = Law::oed;
  double K_chi = 100.0;  ///< gain for tracking_from_solution
  /// reference for tracking_from_solution: t -> chi_star(t)
  std::function<Vec(double)> chi_star_fn;
  /// exogenous input for the constrained law: (t, x) -> v
  std::function<Vec(double, const Vec&)> v_law;
  bool zero_order_hold = false;  ///< hold u over the step instead of
                                 ///< recomputing it at every stage
};

/// Recorded closed-loop run. With N steps, times/states/outputs/sigma_values
/// have N+1 rows and tau_c has N entries (control-evaluation seconds at each
/// step's first stage).
struct Trajectory {
  Vec times;
  Mat states;
  Mat outputs;
  Vec sigma_values;
  Vec tau_c;
  bool completed = true;
  std::string error;
};

/// Classical four-stage Runge-Kutta update of x over one step of f.
Vec rk4_step(const std::function<Vec(double, const Vec&)>& f, double t,
             const Vec& x, double dt);

/// Integrate the closed loop from x0 with the configured control law.
/// The control is recomputed at every stage unless zero_order_hold is set.
/// On a non-finite evaluation the partial trajectory is returned with
/// completed = false and the error message recorded.
Trajectory simulate_closed_loop(const ProblemDef& p, const SimConfig& cfg,
                                const BarrierConfig& barrier, const Vec& x0);

}  // namespace oed
