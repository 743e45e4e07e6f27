#include "oed/sim.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "oed/examples.hpp"

namespace oed {
namespace {

BarrierConfig designed_cfg() { return BarrierConfig{}; }

// Start point whose frozen closed loop stays strictly feasible: a small
// offset from the instant minimizer, which is interior at t = 0.
Vec smooth_start(const ProblemDef& frozen_p, double angle, double radius) {
  const SolveReport rep = solve_instant(frozen_p, designed_cfg(), 0.0,
                                        Vec(Vec::Constant(2, 0.9)), 1e-12, 400);
  EXPECT_TRUE(rep.converged);
  Vec d(2);
  d << std::cos(angle), std::sin(angle);
  return Vec(rep.chi_star + radius * d);
}

TEST(Rk4StepTest, ZeroFieldKeepsState) {
  Vec x(2);
  x << 1.5, -2.0;
  const Vec next = rk4_step(
      [](double, const Vec& v) { return Vec(Vec::Zero(v.size())); }, 0.0, x,
      0.1);
  EXPECT_EQ((next - x).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Rk4StepTest, UnitFieldAdvancesByStep) {
  Vec x(3);
  x << 0.0, 1.0, -1.0;
  const Vec next = rk4_step(
      [](double, const Vec& v) { return Vec(Vec::Ones(v.size())); }, 0.0, x,
      0.25);
  EXPECT_LT((next - (x + Vec(Vec::Constant(3, 0.25)))).cwiseAbs().maxCoeff(),
            1e-15);
}

TEST(Rk4StepTest, MatchesExponentialDecay) {
  Vec x(2);
  x << 2.0, -3.0;
  const Vec next =
      rk4_step([](double, const Vec& v) { return Vec(-v); }, 0.0, x, 0.01);
  const Vec exact = x * std::exp(-0.01);
  EXPECT_LT((next - exact).cwiseAbs().maxCoeff(),
            1e-10 * x.cwiseAbs().maxCoeff());
}

TEST(Rk4StepTest, NonFiniteFieldRejected) {
  Vec x(1);
  x << 1.0;
  EXPECT_THROW(
      rk4_step([](double, const Vec&) { return Vec(Vec::Constant(1, std::nan(""))); },
               0.0, x, 0.1),
      NonFiniteEvaluation);
}

TEST(SimulateTest, RecordsUniformGridAndAllChannels) {
  const ProblemDef p = m1();
  SimConfig cfg;
  cfg.t0 = 0.5;
  cfg.t_final = 0.55;
  cfg.dt = 5e-4;
  cfg.K_x = 100.0;
  Vec x0(2);
  x0 << 0.2, 0.2;
  const Trajectory traj = simulate_closed_loop(p, cfg, designed_cfg(), x0);
  ASSERT_TRUE(traj.completed);
  const Eigen::Index n = traj.times.size();
  EXPECT_EQ(n, 101);
  EXPECT_EQ(traj.states.rows(), n);
  EXPECT_EQ(traj.states.cols(), 2);
  EXPECT_EQ(traj.outputs.rows(), n);
  EXPECT_EQ(traj.outputs.cols(), 1);
  EXPECT_EQ(traj.sigma_values.size(), n);
  EXPECT_EQ(traj.tau_c.size(), n - 1);
  for (Eigen::Index k = 0; k < n; ++k) {
    EXPECT_NEAR(traj.times(k), 0.5 + 5e-4 * static_cast<double>(k), 1e-12);
  }
  EXPECT_EQ((traj.states.row(0).transpose() - x0).cwiseAbs().maxCoeff(), 0.0);
  for (Eigen::Index k = 0; k + 1 < n; ++k) EXPECT_GE(traj.tau_c(k), 0.0);
}

TEST(SimulateTest, NonIntegerStepCountRejected) {
  const ProblemDef p = m1();
  SimConfig cfg;
  cfg.t0 = 0.0;
  cfg.t_final = 1.0;
  cfg.dt = 0.3;
  EXPECT_THROW(simulate_closed_loop(p, cfg, designed_cfg(), Vec(Vec::Zero(2))),
               NumericalError);
  cfg.dt = -0.1;
  EXPECT_THROW(simulate_closed_loop(p, cfg, designed_cfg(), Vec(Vec::Zero(2))),
               NumericalError);
}

TEST(SimulateTest, ControlRealizesDirectionFieldAtEverySample) {
  const ProblemDef p = m1();
  const BarrierConfig bc = designed_cfg();
  SimConfig cfg;
  cfg.t0 = 0.0;
  cfg.t_final = 0.025;
  cfg.dt = 5e-4;
  cfg.K_x = 100.0;
  Vec x0(2);
  x0 << 0.2, 0.2;
  const Trajectory traj = simulate_closed_loop(p, cfg, bc, x0);
  ASSERT_TRUE(traj.completed);
  for (Eigen::Index k = 0; k < traj.times.size(); ++k) {
    const double t = traj.times(k);
    const Vec x = traj.states.row(k).transpose();
    const EvalBundle b = eval_bundle(p, t, x);
    const Vec e = eta(b, assemble_rR(b, bc));
    const Vec u = oed_control(b, e, cfg.K_x);
    const Vec residual = b.B * u + b.f_A - cfg.K_x * e;
    EXPECT_LT(residual.cwiseAbs().maxCoeff(), 1e-9) << "sample " << k;
  }
}

TEST(SimulateTest, OutputErrorDecaysAtTheGain) {
  // On a frozen problem the closed-loop output obeys a first-order linear
  // equation; on a crossing-free segment RK4 tracks the exponential to well
  // under 1e-6 relative.
  const ProblemDef pf = frozen(m1(), 0.0);
  const Vec x0 = smooth_start(pf, 3.14159265 + 0.3, 0.01);
  SimConfig cfg;
  cfg.t0 = 0.0;
  cfg.t_final = 0.05;  // 5 / K_x
  cfg.dt = 2.5e-5;
  cfg.K_x = 100.0;
  const Trajectory traj = simulate_closed_loop(pf, cfg, designed_cfg(), x0);
  ASSERT_TRUE(traj.completed);
  const double ybar = pf.ybar(0.0)(0);
  const double e0 = std::abs(traj.outputs(0, 0) - ybar);
  ASSERT_GT(e0, 0.1);
  for (Eigen::Index k = 0; k < traj.times.size(); ++k) {
    const double analytic = e0 * std::exp(-cfg.K_x * traj.times(k));
    const double actual = std::abs(traj.outputs(k, 0) - ybar);
    EXPECT_LE(std::abs(actual - analytic), 1e-6 * analytic) << "sample " << k;
  }
}

TEST(SimulateTest, FourthOrderOnSmoothSegment) {
  const ProblemDef pf = frozen(m1(), 0.0);
  const Vec x0 = smooth_start(pf, 3.14159265 + 0.3, 0.01);
  Vec finals[3];
  const double dts[3] = {1e-3, 5e-4, 2.5e-4};
  for (int i = 0; i < 3; ++i) {
    SimConfig cfg;
    cfg.t0 = 0.0;
    cfg.t_final = 0.02;
    cfg.dt = dts[i];
    cfg.K_x = 100.0;
    const Trajectory traj = simulate_closed_loop(pf, cfg, designed_cfg(), x0);
    ASSERT_TRUE(traj.completed);
    finals[i] = traj.states.row(traj.states.rows() - 1).transpose();
  }
  const double e1 = (finals[0] - finals[1]).norm();
  const double e2 = (finals[1] - finals[2]).norm();
  ASSERT_GT(e2, 0.0);
  EXPECT_GE(std::log2(e1 / e2), 3.5);
}

TEST(SimulateTest, DistanceToMinimizerDescends) {
  const ProblemDef pf = frozen(m1(), 0.0);
  const SolveReport rep = solve_instant(pf, designed_cfg(), 0.0,
                                        Vec(Vec::Constant(2, 0.9)), 1e-12, 400);
  ASSERT_TRUE(rep.converged);
  for (int dir = 0; dir < 4; ++dir) {
    Vec d(2);
    d << std::cos(1.5707963 * dir + 0.3), std::sin(1.5707963 * dir + 0.3);
    const Vec x0 = rep.chi_star + 0.01 * d;
    SimConfig cfg;
    cfg.t0 = 0.0;
    cfg.t_final = 0.05;
    cfg.dt = 2.5e-4;
    cfg.K_x = 100.0;
    const Trajectory traj = simulate_closed_loop(pf, cfg, designed_cfg(), x0);
    ASSERT_TRUE(traj.completed);
    double prev = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < traj.times.size(); ++k) {
      const Vec x = traj.states.row(k).transpose();
      const double V = 0.5 * (x - rep.chi_star).squaredNorm();
      EXPECT_LE(V, prev * (1.0 + 1e-12)) << "dir " << dir << " sample " << k;
      prev = V;
    }
    EXPECT_LT(prev, 1e-7);
  }
}

TEST(SimulateTest, HoldFlagFreezesControlWithinStep) {
  const ProblemDef p = m1();
  SimConfig cfg;
  cfg.t0 = 0.0;
  cfg.t_final = 0.02;
  cfg.dt = 5e-4;
  cfg.K_x = 100.0;
  Vec x0(2);
  x0 << 0.2, 0.2;
  const Trajectory staged = simulate_closed_loop(p, cfg, designed_cfg(), x0);
  cfg.zero_order_hold = true;
  const Trajectory held = simulate_closed_loop(p, cfg, designed_cfg(), x0);
  ASSERT_TRUE(staged.completed);
  ASSERT_TRUE(held.completed);
  const double diff =
      (staged.states - held.states).cwiseAbs().maxCoeff();
  EXPECT_GT(diff, 0.0);
  EXPECT_LT(diff, 1e-2);
}

TEST(SimulateTest, NonFiniteAbortKeepsPartialRecord) {
  ProblemDef p = m1();
  const auto base = p.f_A;
  p.f_A = [base](double t, const Vec& x) {
    if (t > 0.0101) return Vec(Vec::Constant(2, std::nan("")));
    return base(t, x);
  };
  SimConfig cfg;
  cfg.t0 = 0.0;
  cfg.t_final = 0.05;
  cfg.dt = 1e-3;
  cfg.K_x = 100.0;
  Vec x0(2);
  x0 << 0.2, 0.2;
  const Trajectory traj = simulate_closed_loop(p, cfg, designed_cfg(), x0);
  EXPECT_FALSE(traj.completed);
  EXPECT_FALSE(traj.error.empty());
  EXPECT_GT(traj.times.size(), 5);
  EXPECT_LT(traj.times.size(), 51);
  EXPECT_EQ(traj.states.rows(), traj.times.size());
  EXPECT_EQ(traj.tau_c.size(), traj.times.size() - 1);
}

TEST(SimulateTest, TrackingLawConvergesToProvidedReference) {
  const ProblemDef p = m1();
  Vec chi_star(2);
  chi_star << 0.5, 0.4;
  SimConfig cfg;
  cfg.t0 = 0.0;
  cfg.t_final = 0.05;
  cfg.dt = 2.5e-5;
  cfg.law = SimConfig::Law::tracking_from_solution;
  cfg.K_chi = 100.0;
  cfg.chi_star_fn = [chi_star](double) { return chi_star; };
  Vec x0(2);
  x0 << 0.2, 0.2;
  const Trajectory traj = simulate_closed_loop(p, cfg, designed_cfg(), x0);
  ASSERT_TRUE(traj.completed);
  const double d0 = (x0 - chi_star).norm();
  for (Eigen::Index k = 0; k < traj.times.size(); ++k) {
    const Vec x = traj.states.row(k).transpose();
    const double analytic = d0 * std::exp(-cfg.K_chi * traj.times(k));
    EXPECT_LE(std::abs((x - chi_star).norm() - analytic), 1e-6 * analytic)
        << "sample " << k;
  }
}

TEST(SimulateTest, ConstrainedLawPullsOutputDown) {
  // Linear plant, output x1: the constrained law gives x1' = -K_x x1 while
  // the exogenous input steers only the unmeasured coordinates.
  ProblemDef p;
  p.d_x = 3;
  p.d_y = 1;
  p.d_c = 1;
  Mat A(3, 3);
  A << 0.2, 0.1, 0.0, -0.1, 0.3, 0.2, 0.0, 0.1, -0.2;
  p.f_A = [A](double, const Vec& x) { return Vec(A * x); };
  p.B = [](double, const Vec&) { return Mat(Mat::Identity(3, 3)); };
  p.h = [](double, const Vec& x) { return Vec(Vec::Constant(1, x(0))); };
  p.H = [](double, const Vec&) {
    Mat out(1, 3);
    out << 1.0, 0.0, 0.0;
    return out;
  };
  p.ybar = [](double) { return Vec(Vec::Zero(1)); };
  p.sigma = [](double, const Vec& x) { return 0.5 * x.squaredNorm(); };
  p.q = [](double, const Vec& x) { return x; };
  p.Q = [](double, const Vec&) { return Mat(Mat::Identity(3, 3)); };
  p.G = [](double) { return Mat(Mat::Zero(1, 3)); };
  p.c = [](double) { return Vec(Vec::Constant(1, -1.0)); };

  SimConfig cfg;
  cfg.t0 = 0.0;
  cfg.t_final = 0.05;
  cfg.dt = 2.5e-5;
  cfg.K_x = 100.0;
  cfg.law = SimConfig::Law::constrained;
  Vec v_const(3);
  v_const << 0.0, 0.5, -0.25;
  cfg.v_law = [v_const](double, const Vec&) { return v_const; };
  Vec x0(3);
  x0 << 0.8, 0.1, -0.1;
  const Trajectory traj = simulate_closed_loop(p, cfg, designed_cfg(), x0);
  ASSERT_TRUE(traj.completed);
  for (Eigen::Index k = 0; k < traj.times.size(); ++k) {
    const double analytic = x0(0) * std::exp(-cfg.K_x * traj.times(k));
    EXPECT_LE(std::abs(traj.states(k, 0) - analytic),
              1e-6 * std::abs(analytic) + 1e-12)
        << "sample " << k;
  }
  // The unmeasured coordinates integrate the exogenous drive exactly:
  // x2' = v2, x3' = v3 once the projector blanks the first coordinate.
  const Eigen::Index last = traj.times.size() - 1;
  EXPECT_NEAR(traj.states(last, 1), x0(1) + 0.5 * 0.05, 1e-8);
  EXPECT_NEAR(traj.states(last, 2), x0(2) - 0.25 * 0.05, 1e-8);
}

}  // namespace
}  // namespace oed
