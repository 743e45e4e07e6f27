#include "oed/problem.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "oed/examples.hpp"

namespace oed {
namespace {

// min 0.5 |x|^2 tracking h = x1 with one box row, everything analytic.
ProblemDef quadratic_toy() {
  ProblemDef p;
  p.d_x = 2;
  p.d_y = 1;
  p.d_c = 1;
  p.f_A = [](double, const Vec& x) { return Vec(-x); };
  p.B = [](double, const Vec&) { return Mat(Mat::Identity(2, 2)); };
  p.h = [](double, const Vec& x) {
    Vec out(1);
    out << x(0);
    return out;
  };
  p.H = [](double, const Vec&) {
    Mat out(1, 2);
    out << 1.0, 0.0;
    return out;
  };
  p.ybar = [](double) { return Vec(Vec::Zero(1)); };
  p.sigma = [](double, const Vec& x) { return 0.5 * x.squaredNorm(); };
  p.q = [](double, const Vec& x) { return x; };
  p.Q = [](double, const Vec&) { return Mat(Mat::Identity(2, 2)); };
  p.G = [](double) {
    Mat out(1, 2);
    out << 1.0, 0.0;
    return out;
  };
  p.c = [](double) { return Vec(Vec::Constant(1, -1.0)); };
  return p;
}

TEST(EvalBundleTest, BenchmarkProblemDimensions) {
  const ProblemDef p = m1();
  EXPECT_EQ(p.d_x, 2);
  EXPECT_EQ(p.d_y, 1);
  EXPECT_EQ(p.d_c, 8);
  const EvalBundle b = eval_bundle(p, 0.0, Vec(Vec::Zero(2)));
  EXPECT_EQ(b.f_A.size(), 2);
  EXPECT_EQ(b.h.size(), 1);
  EXPECT_EQ(b.ybar.size(), 1);
  EXPECT_EQ(b.q.size(), 2);
  EXPECT_EQ(b.c.size(), 8);
  EXPECT_EQ(b.B.rows(), 2);
  EXPECT_EQ(b.B.cols(), 2);
  EXPECT_EQ(b.H.rows(), 1);
  EXPECT_EQ(b.H.cols(), 2);
  EXPECT_EQ(b.Q.rows(), 2);
  EXPECT_EQ(b.G.rows(), 8);
  EXPECT_EQ(b.G.cols(), 2);
  EXPECT_TRUE(std::isfinite(b.sigma));
}

TEST(EvalBundleTest, StoresConstantCostCurvature) {
  const ProblemDef p = synthetic_family(8, 42, QMode::dense_spd);
  const EvalBundle a = eval_bundle(p, 0.3, Vec(Vec::Zero(8)));
  const EvalBundle b = eval_bundle(p, 1.7, Vec(Vec::Constant(8, 0.25)));
  EXPECT_EQ((a.Q - b.Q).cwiseAbs().maxCoeff(), 0.0);
}

TEST(EvalBundleTest, DeterministicReplay) {
  const ProblemDef p = m1();
  Vec x(2);
  x << 0.37, -0.81;
  const EvalBundle a = eval_bundle(p, 1.25, x);
  const EvalBundle b = eval_bundle(p, 1.25, x);
  EXPECT_EQ((a.f_A - b.f_A).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((a.h - b.h).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((a.q - b.q).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((a.Q - b.Q).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((a.H - b.H).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((a.G - b.G).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((a.c - b.c).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(a.sigma, b.sigma);
}

TEST(EvalBundleTest, CostCurvatureSymmetricPositiveDefinite) {
  for (uint64_t seed : {1ull, 9ull, 77ull}) {
    const ProblemDef p = synthetic_family(12, seed, QMode::dense_spd);
    const EvalBundle b = eval_bundle(p, 0.0, Vec(Vec::Zero(12)));
    EXPECT_LT((b.Q - b.Q.transpose()).cwiseAbs().maxCoeff(),
              1e-9 * (1.0 + b.Q.cwiseAbs().maxCoeff()));
    EXPECT_NO_THROW(factor_spd(b.Q, b.diagonal_q));
  }
}

TEST(EvalBundleTest, NanEvaluatorNamed) {
  ProblemDef p = quadratic_toy();
  p.f_A = [](double, const Vec&) {
    return Vec(Vec::Constant(2, std::nan("")));
  };
  try {
    eval_bundle(p, 0.0, Vec(Vec::Zero(2)));
    FAIL() << "expected NonFiniteEvaluation";
  } catch (const NonFiniteEvaluation& e) {
    EXPECT_EQ(e.evaluator, "f_A");
  }
}

TEST(EvalBundleTest, InfiniteCostNamed) {
  ProblemDef p = quadratic_toy();
  p.sigma = [](double, const Vec&) {
    return std::numeric_limits<double>::infinity();
  };
  try {
    eval_bundle(p, 0.0, Vec(Vec::Zero(2)));
    FAIL() << "expected NonFiniteEvaluation";
  } catch (const NonFiniteEvaluation& e) {
    EXPECT_EQ(e.evaluator, "sigma");
  }
}

TEST(EvalBundleTest, NonFiniteStateRejected) {
  const ProblemDef p = quadratic_toy();
  Vec x(2);
  x << 1.0, std::numeric_limits<double>::infinity();
  EXPECT_THROW(eval_bundle(p, 0.0, x), NumericalError);
}

TEST(CheckDerivativesTest, ExactOnQuadratics) {
  const DerivCheckReport rep =
      check_derivatives(quadratic_toy(), 0.0, Vec(Vec::Constant(2, 0.3)), 1e-5);
  EXPECT_LE(rep.q_error, 1e-9);
  EXPECT_LE(rep.Q_error, 1e-9);
  EXPECT_LE(rep.H_error, 1e-9);
  EXPECT_NEAR(rep.step, 1e-5, 1e-18);
}

TEST(CheckDerivativesTest, BenchmarkProblemDerivativesConsistent) {
  Vec x(2);
  x << 0.2, -0.1;
  const DerivCheckReport rep = check_derivatives(m1(), 1.0, x, 1e-5);
  EXPECT_LE(rep.q_error, 1e-5);
  EXPECT_LE(rep.Q_error, 1e-5);
  EXPECT_LE(rep.H_error, 1e-5);
}

TEST(CheckDerivativesTest, DetectsWrongGradient) {
  ProblemDef p = quadratic_toy();
  p.q = [](double, const Vec& x) { return Vec(2.0 * x); };
  const DerivCheckReport rep =
      check_derivatives(p, 0.0, Vec(Vec::Constant(2, 1.0)), 1e-5);
  EXPECT_GT(rep.q_error, 0.3);
  EXPECT_LT(rep.q_error, 3.0);
}

TEST(CheckDerivativesTest, StepClampedToSafeRange) {
  const ProblemDef p = quadratic_toy();
  const Vec x = Vec::Constant(2, 0.1);
  EXPECT_NEAR(check_derivatives(p, 0.0, x, 1e-12).step, 1e-8, 1e-20);
  EXPECT_NEAR(check_derivatives(p, 0.0, x, 1.0).step, 1e-3, 1e-15);
}

TEST(CheckDerivativesTest, PackagedExamplesConsistentAtRandomPoints) {
  SplitMix64 rng(606);
  const ProblemDef probs[] = {m1(), synthetic_family(6, 5, QMode::dense_spd),
                              portfolio_synthetic(6, 5)};
  for (const ProblemDef& p : probs) {
    for (int k = 0; k < 20; ++k) {
      const double t = 2.0 * rng.uniform();
      Vec x(p.d_x);
      for (int i = 0; i < p.d_x; ++i) x(i) = rng.uniform() - 0.5;
      const DerivCheckReport rep = check_derivatives(p, t, x, 1e-6);
      EXPECT_LE(rep.q_error, 1e-4);
      EXPECT_LE(rep.Q_error, 1e-4);
      EXPECT_LE(rep.H_error, 1e-4);
    }
  }
}

TEST(FrozenTest, PinsTimeArgument) {
  const ProblemDef p = m1();
  const double t_star = 1.3;
  const ProblemDef f = frozen(p, t_star);
  Vec x(2);
  x << 0.4, 0.1;
  for (double t : {0.0, 5.0, -2.0}) {
    EXPECT_EQ((f.h(t, x) - p.h(t_star, x)).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ((f.q(t, x) - p.q(t_star, x)).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ((f.ybar(t) - p.ybar(t_star)).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ((f.G(t) - p.G(t_star)).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ((f.c(t) - p.c(t_star)).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(f.sigma(t, x), p.sigma(t_star, x));
  }
  EXPECT_EQ(f.d_x, p.d_x);
  EXPECT_EQ(f.d_y, p.d_y);
  EXPECT_EQ(f.d_c, p.d_c);
}

}  // namespace
}  // namespace oed
