#include "oed/sim.hpp"

#include <chrono>
#include <cmath>

namespace oed {

Vec rk4_step(const std::function<Vec(double, const Vec&)>& f, double t,
             const Vec& x, double dt) {
  const Vec k1 = f(t, x);
  const Vec k2 = f(t + 0.5 * dt, Vec(x + 0.5 * dt * k1));
  const Vec k3 = f(t + 0.5 * dt, Vec(x + 0.5 * dt * k2));
  const Vec k4 = f(t + dt, Vec(x + dt * k3));
  if (!k1.allFinite() || !k2.allFinite() || !k3.allFinite() ||
      !k4.allFinite()) {
    throw NonFiniteEvaluation("vector field");
  }
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace {

// One control evaluation for the configured law; wall-clock seconds of the
// whole evaluation are written to *seconds when given.
Vec eval_control(const ProblemDef& p, const SimConfig& cfg,
                 const BarrierConfig& barrier, double t, const Vec& x,
                 double* seconds) {
  const auto start = std::chrono::steady_clock::now();
  Vec u;
  switch (cfg.law) {
    case SimConfig::Law::oed:
      u = oed_control_eval(p, barrier, t, x, cfg.K_x);
      break;
    case SimConfig::Law::tracking_from_solution: {
      const EvalBundle bundle = eval_bundle(p, t, x);
      u = tracking_control_from_solution(bundle, cfg.chi_star_fn(t),
                                         cfg.K_chi);
      break;
    }
    case SimConfig::Law::constrained: {
      const EvalBundle bundle = eval_bundle(p, t, x);
      const ConstrainedSystemTerms terms =
          constrained_system_terms(bundle, barrier);
      const Vec v = cfg.v_law ? cfg.v_law(t, x)
                              : Vec(Vec::Zero(bundle.x.size()));
      const Vec drive = cfg.K_x * terms.omega_A + terms.Omega_B * v;
      u = oed_control(bundle, Vec(drive / cfg.K_x), cfg.K_x);
      break;
    }
  }
  if (seconds != nullptr) {
    *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start)
                   .count();
  }
  return u;
}

}  // namespace

Trajectory simulate_closed_loop(const ProblemDef& p, const SimConfig& cfg,
                                const BarrierConfig& barrier, const Vec& x0) {
  const double span = cfg.t_final - cfg.t0;
  if (!(cfg.dt > 0.0) || !(span > 0.0)) {
    throw NumericalError("simulation span and dt must be positive");
  }
  const double ratio = span / cfg.dt;
  const long long N = std::llround(ratio);
  if (N < 1 || std::fabs(ratio - static_cast<double>(N)) > 1e-9) {
    throw NumericalError("(t_final - t0)/dt is not a positive integer");
  }

  Trajectory traj;
  traj.times.resize(N + 1);
  traj.states.resize(N + 1, p.d_x);
  traj.outputs.resize(N + 1, p.d_y);
  traj.sigma_values.resize(N + 1);
  traj.tau_c.resize(N);

  Vec x = x0;
  long long recorded = 0;
  try {
    for (long long n = 0; n <= N; ++n) {
      const double t = cfg.t0 + static_cast<double>(n) * cfg.dt;
      traj.times(n) = t;
      traj.states.row(n) = x.transpose();
      const Vec y = p.h(t, x);
      const double s = p.sigma(t, x);
      if (!y.allFinite()) throw NonFiniteEvaluation("h");
      if (!std::isfinite(s)) throw NonFiniteEvaluation("sigma");
      traj.outputs.row(n) = y.transpose();
      traj.sigma_values(n) = s;
      recorded = n + 1;
      if (n == N) break;

      double tau = 0.0;
      const Vec u1 = eval_control(p, cfg, barrier, t, x, &tau);
      traj.tau_c(n) = tau;

      auto field = [&](double ts, const Vec& xs) -> Vec {
        const Vec us = cfg.zero_order_hold
                           ? u1
                           : eval_control(p, cfg, barrier, ts, xs, nullptr);
        return Vec(p.f_A(ts, xs) + p.B(ts, xs) * us);
      };
      // Stage 1 reuses the timed evaluation; later stages recompute unless
      // the hold flag is set.
      const Vec k1 = p.f_A(t, x) + p.B(t, x) * u1;
      const Vec x2 = x + 0.5 * cfg.dt * k1;
      const Vec k2 = field(t + 0.5 * cfg.dt, x2);
      const Vec x3 = x + 0.5 * cfg.dt * k2;
      const Vec k3 = field(t + 0.5 * cfg.dt, x3);
      const Vec x4 = x + cfg.dt * k3;
      const Vec k4 = field(t + cfg.dt, x4);
      if (!k1.allFinite() || !k2.allFinite() || !k3.allFinite() ||
          !k4.allFinite()) {
        throw NonFiniteEvaluation("vector field");
      }
      x += (cfg.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  } catch (const NonFiniteEvaluation& e) {
    traj.times.conservativeResize(recorded);
    traj.states.conservativeResize(recorded, Eigen::NoChange);
    traj.outputs.conservativeResize(recorded, Eigen::NoChange);
    traj.sigma_values.conservativeResize(recorded);
    traj.tau_c.conservativeResize(std::max<long long>(recorded - 1, 0));
    traj.completed = false;
    traj.error = e.what();
  }
  return traj;
}

}  // namespace oed
