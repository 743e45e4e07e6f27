#include "oed/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace oed {

namespace {

bool in_any_window(double t,
                   const std::vector<std::pair<double, double>>& windows) {
  for (const auto& w : windows) {
    if (t >= w.first && t <= w.second) return true;
  }
  return false;
}

double interpolated_quantile(const std::vector<double>& sorted, double p) {
  const size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double pos = static_cast<double>(n - 1) * p;
  const size_t lo = static_cast<size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= n) return sorted[n - 1];
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

AccuracyReport accuracy_metrics(
    const Trajectory& traj, const Mat& ref_states, const Vec& ref_sigma,
    const std::vector<std::pair<double, double>>& exclude) {
  const Eigen::Index L = traj.times.size();
  if (ref_states.rows() != L || ref_states.cols() != traj.states.cols()) {
    throw LengthMismatch("reference states " +
                         std::to_string(ref_states.rows()) + "x" +
                         std::to_string(ref_states.cols()) + " vs trajectory " +
                         std::to_string(L) + "x" +
                         std::to_string(traj.states.cols()));
  }
  if (ref_sigma.size() != L) {
    throw LengthMismatch("reference costs " + std::to_string(ref_sigma.size()) +
                         " vs trajectory " + std::to_string(L));
  }
  if (L < 2) throw EmptySeries();

  const double d_x = static_cast<double>(traj.states.cols());
  double err_sum = 0.0;
  double cost_num = 0.0;
  double cost_den = 0.0;
  Eigen::Index included = 0;
  // Rectangle rule over the left endpoints; the uniform step cancels from
  // both the error average and the cost ratio.
  for (Eigen::Index k = 0; k + 1 < L; ++k) {
    if (in_any_window(traj.times(k), exclude)) continue;
    err_sum +=
        (traj.states.row(k) - ref_states.row(k)).cwiseAbs().sum() / d_x;
    cost_num += traj.sigma_values(k);
    cost_den += ref_sigma(k);
    ++included;
  }
  if (included == 0) throw EmptySeries();
  if (!(cost_den > 0.0)) throw ZeroReferenceCost();

  AccuracyReport rep;
  rep.E_x = err_sum / static_cast<double>(included);
  rep.E_sigma = cost_num / cost_den;
  rep.excluded_windows = exclude;
  return rep;
}

Mat emulate_delayed(const Vec& tau_slow, const Vec& tau_fast,
                    const Mat& chi_star) {
  const Eigen::Index L = chi_star.rows();
  if (tau_slow.size() != L || tau_fast.size() != L) {
    throw LengthMismatch("durations " + std::to_string(tau_slow.size()) + "," +
                         std::to_string(tau_fast.size()) + " vs states " +
                         std::to_string(L));
  }
  if (L == 0) throw EmptySeries();
  for (Eigen::Index i = 0; i < L; ++i) {
    if (!(tau_fast(i) > 0.0)) {
      throw NumericalError("fast durations must be positive");
    }
  }

  Mat out = chi_star;
  std::vector<bool> delivered(static_cast<size_t>(L), false);
  auto delay = [&](Eigen::Index n) {
    const double d = std::ceil(tau_slow(n) / tau_fast(n));
    return std::max<Eigen::Index>(1, static_cast<Eigen::Index>(d));
  };

  Eigen::Index n = 0;
  while (n < L) {
    const Eigen::Index n1 = n + delay(n);
    if (n1 >= L) {
      // Last computation never arrives; the sample keeps its own value
      // unless a delivery already wrote it.
      if (!delivered[static_cast<size_t>(n)]) out.row(n) = chi_star.row(n);
    } else {
      const Eigen::Index n2 = n1 + delay(n1);
      for (Eigen::Index v = n1; v <= std::min(n2, L - 1); ++v) {
        out.row(v) = chi_star.row(n);
        delivered[static_cast<size_t>(v)] = true;
      }
    }
    n = n1;
  }

  // Before the first delivery the consumer only has the value computed for
  // the first sample.
  auto first = std::find(delivered.begin(), delivered.end(), true);
  if (first != delivered.end()) {
    const Eigen::Index f =
        static_cast<Eigen::Index>(std::distance(delivered.begin(), first));
    for (Eigen::Index v = 0; v < f; ++v) out.row(v) = chi_star.row(0);
  }
  return out;
}

TrendFit fit_cube_trend(const std::vector<double>& dims,
                        const std::vector<double>& mean_times) {
  if (dims.size() != mean_times.size()) {
    throw LengthMismatch("dims " + std::to_string(dims.size()) + " vs times " +
                         std::to_string(mean_times.size()));
  }
  const size_t n = dims.size();
  if (n < 3) throw DegenerateFit("need at least 3 points");
  for (double t : mean_times) {
    if (!(t > 0.0)) throw DegenerateFit("times must be positive");
  }

  std::vector<double> y(n);
  for (size_t i = 0; i < n; ++i) y[i] = std::cbrt(mean_times[i]);

  double xm = 0.0, ym = 0.0;
  for (size_t i = 0; i < n; ++i) {
    xm += dims[i];
    ym += y[i];
  }
  xm /= static_cast<double>(n);
  ym /= static_cast<double>(n);

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = dims[i] - xm;
    const double dy = y[i] - ym;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw DegenerateFit("dims have zero variance");

  TrendFit fit;
  fit.p1 = sxy / sxx;
  fit.p2 = ym - fit.p1 * xm;
  if (syy > 0.0) {
    double ss_res = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double r = y[i] - (fit.p1 * dims[i] + fit.p2);
      ss_res += r * r;
    }
    fit.r_squared = 1.0 - ss_res / syy;
  } else {
    fit.r_squared = 0.0;
  }
  return fit;
}

TimingSummary timing_summary(const Vec& tau) {
  if (tau.size() == 0) throw EmptySeries();
  std::vector<double> sorted(tau.data(), tau.data() + tau.size());
  std::sort(sorted.begin(), sorted.end());

  TimingSummary s;
  s.median = interpolated_quantile(sorted, 0.5);
  s.q25 = interpolated_quantile(sorted, 0.25);
  s.q75 = interpolated_quantile(sorted, 0.75);
  s.min = sorted.front();
  s.max = sorted.back();

  std::vector<double> dev(sorted.size());
  for (size_t i = 0; i < sorted.size(); ++i) {
    dev[i] = std::fabs(sorted[i] - s.median);
  }
  std::sort(dev.begin(), dev.end());
  const double mad = interpolated_quantile(dev, 0.5);
  s.mad_over_median = s.median != 0.0 ? mad / s.median : 0.0;
  return s;
}

}  // namespace oed
