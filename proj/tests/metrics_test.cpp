#include "oed/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace oed {
namespace {

Trajectory make_traj(const Vec& times, const Mat& states, const Vec& sigma) {
  Trajectory t;
  t.times = times;
  t.states = states;
  t.sigma_values = sigma;
  return t;
}

TEST(AccuracyTest, HandComputedRectangleRule) {
  Vec times(3);
  times << 0.0, 0.1, 0.2;
  Mat states(3, 2);
  states << 1, 1, 2, 0, 5, 5;
  Vec sigma(3);
  sigma << 2, 4, 100;
  Mat ref(3, 2);
  ref << 0, 1, 1, 2, 0, 0;
  Vec ref_sigma(3);
  ref_sigma << 1, 2, 100;
  const AccuracyReport rep =
      accuracy_metrics(make_traj(times, states, sigma), ref, ref_sigma);
  // Left endpoints only: per-sample l1/d errors 0.5 and 1.5; cost 6/3.
  EXPECT_NEAR(rep.E_x, 1.0, 1e-12);
  EXPECT_NEAR(rep.E_sigma, 2.0, 1e-12);
  EXPECT_TRUE(rep.excluded_windows.empty());
}

TEST(AccuracyTest, WindowDropsSamplesFromBothIntegrals) {
  Vec times(3);
  times << 0.0, 0.1, 0.2;
  Mat states(3, 2);
  states << 1, 1, 2, 0, 5, 5;
  Vec sigma(3);
  sigma << 2, 4, 100;
  Mat ref(3, 2);
  ref << 0, 1, 1, 2, 0, 0;
  Vec ref_sigma(3);
  ref_sigma << 1, 2, 100;
  const std::vector<std::pair<double, double>> win = {{-0.05, 0.05}};
  const AccuracyReport rep =
      accuracy_metrics(make_traj(times, states, sigma), ref, ref_sigma, win);
  EXPECT_NEAR(rep.E_x, 1.5, 1e-12);
  EXPECT_NEAR(rep.E_sigma, 2.0, 1e-12);
  ASSERT_EQ(rep.excluded_windows.size(), 1u);
  EXPECT_EQ(rep.excluded_windows[0].second, 0.05);
}

TEST(AccuracyTest, PerfectTrackingScoresZeroAndUnity) {
  Vec times = Vec::LinSpaced(11, 0.0, 1.0);
  Mat states(11, 3);
  Vec sigma(11);
  for (int k = 0; k < 11; ++k) {
    states.row(k) = Vec::Constant(3, 0.1 * k).transpose();
    sigma(k) = 1.0 + 0.01 * k;
  }
  const AccuracyReport rep =
      accuracy_metrics(make_traj(times, states, sigma), states, sigma);
  EXPECT_NEAR(rep.E_x, 0.0, 1e-15);
  EXPECT_NEAR(rep.E_sigma, 1.0, 1e-15);
}

TEST(AccuracyTest, GridDisagreementRejected) {
  Vec times = Vec::LinSpaced(4, 0.0, 0.3);
  Mat states = Mat::Ones(4, 2);
  Vec sigma = Vec::Ones(4);
  const Trajectory traj = make_traj(times, states, sigma);
  EXPECT_THROW(accuracy_metrics(traj, Mat::Ones(3, 2), Vec::Ones(4)),
               LengthMismatch);
  EXPECT_THROW(accuracy_metrics(traj, Mat::Ones(4, 3), Vec::Ones(4)),
               LengthMismatch);
  EXPECT_THROW(accuracy_metrics(traj, Mat::Ones(4, 2), Vec::Ones(5)),
               LengthMismatch);
}

TEST(AccuracyTest, DegenerateSeriesRejected) {
  {
    Vec times(1);
    times << 0.0;
    const Trajectory traj = make_traj(times, Mat::Ones(1, 2), Vec::Ones(1));
    EXPECT_THROW(accuracy_metrics(traj, Mat::Ones(1, 2), Vec::Ones(1)),
                 EmptySeries);
  }
  {
    Vec times = Vec::LinSpaced(4, 0.0, 0.3);
    const Trajectory traj = make_traj(times, Mat::Ones(4, 2), Vec::Ones(4));
    const std::vector<std::pair<double, double>> all = {{-1.0, 1.0}};
    EXPECT_THROW(accuracy_metrics(traj, Mat::Ones(4, 2), Vec::Ones(4), all),
                 EmptySeries);
  }
  {
    Vec times = Vec::LinSpaced(4, 0.0, 0.3);
    const Trajectory traj = make_traj(times, Mat::Ones(4, 2), Vec::Ones(4));
    EXPECT_THROW(accuracy_metrics(traj, Mat::Ones(4, 2), Vec::Zero(4)),
                 ZeroReferenceCost);
  }
}

Mat ramp_rows(Eigen::Index n) {
  Mat m(n, 2);
  for (Eigen::Index k = 0; k < n; ++k) {
    m(k, 0) = static_cast<double>(k);
    m(k, 1) = 10.0 + static_cast<double>(k);
  }
  return m;
}

TEST(DelayTest, UnitRatioIsExactlyOneSampleHold) {
  const Eigen::Index L = 12;
  const Mat chi = ramp_rows(L);
  const Mat out =
      emulate_delayed(Vec::Constant(L, 1e-3), Vec::Constant(L, 1e-3), chi);
  EXPECT_EQ(out.row(0), chi.row(0));
  for (Eigen::Index v = 1; v < L; ++v) {
    EXPECT_EQ(out.row(v), chi.row(v - 1)) << "row " << v;
  }
}

TEST(DelayTest, TripleRatioHoldsEachDeliveryThreeSamples) {
  const Eigen::Index L = 8;
  const Mat chi = ramp_rows(L);
  const Mat out =
      emulate_delayed(Vec::Constant(L, 3.0), Vec::Constant(L, 1.0), chi);
  // Deliveries land at samples 3 (value from 0) and 6 (value from 3);
  // everything earlier holds the first computed value.
  for (Eigen::Index v = 0; v < 6; ++v) {
    EXPECT_EQ(out.row(v), chi.row(0)) << "row " << v;
  }
  EXPECT_EQ(out.row(6), chi.row(3));
  EXPECT_EQ(out.row(7), chi.row(3));
}

TEST(DelayTest, MixedDelaysFollowDeliverySchedule) {
  const Eigen::Index L = 6;
  const Mat chi = ramp_rows(L);
  Vec slow(L);
  slow << 2, 2, 1, 1, 1, 1;
  const Mat out = emulate_delayed(slow, Vec::Constant(L, 1.0), chi);
  EXPECT_EQ(out.row(0), chi.row(0));
  EXPECT_EQ(out.row(1), chi.row(0));
  EXPECT_EQ(out.row(2), chi.row(0));
  EXPECT_EQ(out.row(3), chi.row(2));
  EXPECT_EQ(out.row(4), chi.row(3));
  EXPECT_EQ(out.row(5), chi.row(4));
}

TEST(DelayTest, NothingDeliveredReturnsSeriesUnchanged) {
  const Eigen::Index L = 3;
  const Mat chi = ramp_rows(L);
  const Mat out =
      emulate_delayed(Vec::Constant(L, 5.0), Vec::Constant(L, 1.0), chi);
  EXPECT_EQ(out, chi);
}

TEST(DelayTest, BadInputsRejected) {
  const Mat chi = ramp_rows(4);
  EXPECT_THROW(emulate_delayed(Vec::Ones(3), Vec::Ones(4), chi),
               LengthMismatch);
  EXPECT_THROW(emulate_delayed(Vec::Ones(4), Vec::Ones(3), chi),
               LengthMismatch);
  EXPECT_THROW(emulate_delayed(Vec::Ones(0), Vec::Ones(0), Mat(0, 2)),
               EmptySeries);
  EXPECT_THROW(emulate_delayed(Vec::Ones(4), Vec::Zero(4), chi),
               NumericalError);
}

TEST(TrendTest, RecoversExactCubeLaw) {
  const std::vector<double> dims = {32, 64, 128, 256, 512};
  std::vector<double> times;
  for (double d : dims) {
    const double c = 0.01 * d + 0.5;
    times.push_back(c * c * c);
  }
  const TrendFit fit = fit_cube_trend(dims, times);
  EXPECT_NEAR(fit.p1, 0.01, 1e-12);
  EXPECT_NEAR(fit.p2, 0.5, 1e-9);
  EXPECT_GT(fit.r_squared, 1.0 - 1e-12);
}

TEST(TrendTest, NoisyDataStillScoresHighButBelowOne) {
  const std::vector<double> dims = {32, 64, 128, 256, 512};
  std::vector<double> times;
  int flip = 1;
  for (double d : dims) {
    const double c = 0.01 * d + 0.5;
    times.push_back(c * c * c * (1.0 + 0.02 * flip));
    flip = -flip;
  }
  const TrendFit fit = fit_cube_trend(dims, times);
  EXPECT_GT(fit.r_squared, 0.99);
  EXPECT_LT(fit.r_squared, 1.0);
}

TEST(TrendTest, DegenerateInputsRejected) {
  EXPECT_THROW(fit_cube_trend({1, 2}, {1, 8}), DegenerateFit);
  EXPECT_THROW(fit_cube_trend({1, 2, 3}, {1, 8, 0.0}), DegenerateFit);
  EXPECT_THROW(fit_cube_trend({2, 2, 2}, {1, 1, 1}), DegenerateFit);
  EXPECT_THROW(fit_cube_trend({1, 2, 3}, {1, 8}), LengthMismatch);
}

TEST(TimingTest, OddCountOrderStatistics) {
  Vec tau(5);
  tau << 3, 1, 5, 2, 4;  // order must not matter
  const TimingSummary s = timing_summary(tau);
  EXPECT_EQ(s.median, 3.0);
  EXPECT_EQ(s.q25, 2.0);
  EXPECT_EQ(s.q75, 4.0);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.max, 5.0);
  // Absolute deviations {2,1,0,1,2}: their median is 1.
  EXPECT_NEAR(s.mad_over_median, 1.0 / 3.0, 1e-15);
}

TEST(TimingTest, EvenCountInterpolatesQuantiles) {
  Vec tau(4);
  tau << 4, 1, 3, 2;
  const TimingSummary s = timing_summary(tau);
  EXPECT_NEAR(s.median, 2.5, 1e-15);
  EXPECT_NEAR(s.q25, 1.75, 1e-15);
  EXPECT_NEAR(s.q75, 3.25, 1e-15);
  // Deviations {1.5,0.5,0.5,1.5}: interpolated median 1.0.
  EXPECT_NEAR(s.mad_over_median, 1.0 / 2.5, 1e-15);
}

TEST(TimingTest, SingletonAndEmpty) {
  Vec one(1);
  one << 7.0;
  const TimingSummary s = timing_summary(one);
  EXPECT_EQ(s.median, 7.0);
  EXPECT_EQ(s.q25, 7.0);
  EXPECT_EQ(s.q75, 7.0);
  EXPECT_EQ(s.min, 7.0);
  EXPECT_EQ(s.max, 7.0);
  EXPECT_EQ(s.mad_over_median, 0.0);
  EXPECT_THROW(timing_summary(Vec()), EmptySeries);
}

}  // namespace
}  // namespace oed
