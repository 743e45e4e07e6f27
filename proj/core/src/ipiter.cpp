#include "oed/ipiter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>

namespace oed {

Vec ip_step(const ProblemDef& p, const BarrierConfig& cfg, double t,
            const Vec& chi) {
  const EvalBundle bundle = eval_bundle(p, t, chi);
  const AugmentedDerivatives aug = assemble_rR(bundle, cfg);
  return chi + eta(bundle, aug);
}

namespace {

double inf_norm(const Vec& v) {
  return v.size() > 0 ? v.cwiseAbs().maxCoeff() : 0.0;
}

/// One field evaluation: the direction, its max-norm, the output residual
/// max-norm, and the cost. Trial points may be unusable (non-finite
/// evaluations, lost factorizations); that surfaces as ok = false so the
/// caller rejects the trial instead of unwinding.
struct FieldPoint {
  Vec dir;
  double norm = 0.0;
  double feas = 0.0;
  double sigma = 0.0;
  bool ok = false;
};

FieldPoint field_from(const EvalBundle& b, const AugmentedDerivatives& aug) {
  FieldPoint out;
  out.dir = eta(b, aug);
  out.norm = inf_norm(out.dir);
  out.feas = inf_norm(b.ybar - b.h);
  out.sigma = b.sigma;
  out.ok = out.dir.allFinite() && std::isfinite(out.feas) &&
           std::isfinite(out.sigma);
  return out;
}

FieldPoint raw_field(const ProblemDef& p, const BarrierConfig& cfg, double t,
                     const Vec& x) {
  try {
    const EvalBundle b = eval_bundle(p, t, x);
    return field_from(b, assemble_rR(b, cfg));
  } catch (const NumericalError&) {
    return FieldPoint{};
  }
}

// Direction with the penalized row set pinned to `rows` regardless of the
// signs at x. On the region where the pinned set is the violated set this
// matches the raw direction exactly (the penalty scale is designed from the
// same rows); elsewhere it is that branch's smooth continuation.
FieldPoint frozen_field(const ProblemDef& p, const BarrierConfig& cfg,
                        double t, const Vec& x, const std::vector<int>& rows) {
  try {
    const EvalBundle b = eval_bundle(p, t, x);
    AugmentedDerivatives aug;
    if (rows.empty()) {
      aug.r = b.q;
      aug.R_factor = factor_spd(b.Q, b.diagonal_q);
      return field_from(b, aug);
    }
    const Vec g = b.G * b.x + b.c;
    Mat Gbar(static_cast<Eigen::Index>(rows.size()), b.G.cols());
    Vec gbar(static_cast<Eigen::Index>(rows.size()));
    for (size_t k = 0; k < rows.size(); ++k) {
      Gbar.row(static_cast<Eigen::Index>(k)) = b.G.row(rows[k]);
      gbar(static_cast<Eigen::Index>(k)) = g(rows[k]);
    }
    const double p2 = cfg.p2_mode == BarrierConfig::P2Mode::designed
                          ? design_p2(b.Q, Gbar, cfg.K_RQ)
                          : cfg.p2;
    const double p2sq = p2 * p2;
    aug.r = b.q + p2sq * Gbar.transpose() * gbar;
    aug.R_factor = factor_spd(Mat(b.Q + p2sq * Gbar.transpose() * Gbar));
    return field_from(b, aug);
  } catch (const NumericalError&) {
    return FieldPoint{};
  }
}

// Direction under the finite-sharpness penalty with every constraint row
// weighted, so the field is continuous across activation boundaries; the
// penalty scale is designed from the full row set for the same reason.
FieldPoint smooth_field(const ProblemDef& p, const BarrierConfig& cfg,
                        double t, const Vec& x) {
  try {
    const EvalBundle b = eval_bundle(p, t, x);
    AugmentedDerivatives aug;
    const bool penalized =
        b.G.rows() > 0 && b.G.cwiseAbs().maxCoeff() > 0.0;
    if (!penalized) {
      aug.r = b.q;
      aug.R_factor = factor_spd(b.Q, b.diagonal_q);
    } else {
      const double p2 = cfg.p2_mode == BarrierConfig::P2Mode::designed
                            ? design_p2(b.Q, b.G, cfg.K_RQ)
                            : cfg.p2;
      const double p2sq = p2 * p2;
      const double p1 = cfg.p1_ref;
      const Vec g = b.G * b.x + b.c;
      Vec w_grad(g.size());
      Vec w_curv(g.size());
      for (Eigen::Index i = 0; i < g.size(); ++i) {
        const double z = std::clamp(p1 * g(i), -500.0, 500.0);
        const double sig = 1.0 / (1.0 + std::exp(-z));
        const double slope = beta_ref(g(i), p1, 1.0);
        w_grad(i) = p2sq * slope * sig;
        w_curv(i) = p2sq * (sig * sig + slope * p1 * sig * (1.0 - sig));
      }
      aug.r = b.q + b.G.transpose() * w_grad;
      const Mat R = b.Q + b.G.transpose() * w_curv.asDiagonal() * b.G;
      aug.R_factor = factor_spd(R);
    }
    return field_from(b, aug);
  } catch (const NumericalError&) {
    return FieldPoint{};
  }
}

}  // namespace

SolveReport solve_instant(const ProblemDef& p, const BarrierConfig& cfg,
                          double t, const Vec& chi0, double tol,
                          int max_iter) {
  tol = std::max(tol, 1e-14);

  // The first evaluation throws on an unusable start point.
  const EvalBundle b0 = eval_bundle(p, t, chi0);
  FieldPoint cur = field_from(b0, assemble_rR(b0, cfg));

  const double ybar_scale = 1.0 + inf_norm(b0.ybar);
  const double feas_slack = 1e-2 * tol * ybar_scale;
  const double feas_gate = 1e-6 * ybar_scale;

  std::vector<Vec> history;
  history.push_back(chi0);
  Vec chi = chi0;
  int iters = 0;

  auto finish = [&](bool converged, double final_norm) {
    SolveReport rep;
    rep.chi_star = chi;
    rep.iterations = iters;
    rep.final_eta_norm = final_norm;
    rep.converged = converged;
    // Tail contraction ratios against the accepted iterate. Contraction is a
    // local statement, so only pairs inside a small window around the result
    // count; distances inside the noise floor carry no rate information and
    // are skipped.
    const double scale = 1.0 + inf_norm(chi);
    const double floor = 1e2 * tol * scale;
    const double window = 1e-3 * scale;
    std::vector<double> ratios;
    for (size_t k = 0; k + 1 < history.size(); ++k) {
      const double d0 = (history[k] - chi).norm();
      const double d1 = (history[k + 1] - chi).norm();
      if (d0 > floor && d1 > floor && d0 <= window && d1 <= window) {
        ratios.push_back(d1 / d0);
      }
    }
    const size_t keep = std::min<size_t>(ratios.size(), 5);
    rep.rate_samples.assign(ratios.end() - static_cast<long>(keep),
                            ratios.end());
    return rep;
  };

  // Full steps while they stay in the fast local regime: the direction norm
  // must contract by 10% and the output residual must at least halve, which
  // a genuine full step does to first order. The residual certificate is
  // what keeps a wildly long step from being mistaken for progress.
  while (iters < max_iter) {
    if (cur.norm <= tol) return finish(true, cur.norm);
    const Vec xt = chi + cur.dir;
    const FieldPoint trial = raw_field(p, cfg, t, xt);
    if (trial.ok && trial.norm < 0.9 * cur.norm &&
        trial.feas <= 0.5 * cur.feas + feas_slack) {
      chi = xt;
      cur = trial;
      history.push_back(chi);
      ++iters;
      continue;
    }
    break;
  }
  if (cur.norm <= tol) return finish(true, cur.norm);
  if (iters >= max_iter) return finish(false, cur.norm);

  // Damped Newton on the raw direction with a forward-difference Jacobian.
  // The budget is counted in field evaluations; accepted steps advance the
  // shared iteration count even when the attempt as a whole fails.
  const Eigen::Index dx = chi.size();
  struct PolishResult {
    Vec x;
    double norm;
    bool done;
  };
  auto polish = [&](Vec x, int budget, std::vector<Vec>& chain) {
    int used = 0;
    FieldPoint fx = raw_field(p, cfg, t, x);
    ++used;
    if (!fx.ok) {
      return PolishResult{x, std::numeric_limits<double>::infinity(), false};
    }
    // The raw direction jumps across activation boundaries (the curvature
    // weight lands all at once), so a root pinned to a boundary sits inside
    // a sliver thinner than a difference step and is invisible to the raw
    // Jacobian. Near such a point, refine on the branch frozen to the
    // entry's violated rows instead: that field is smooth through the
    // boundary and agrees with the raw one wherever the pinned set is the
    // violated set. The result only counts if the raw direction itself
    // vanishes there, and a leash keeps the branch continuation from
    // handing back some other basin's root.
    if (fx.norm <= 1e-3 * (1.0 + inf_norm(x))) {
      std::vector<int> rows;
      try {
        const EvalBundle be = eval_bundle(p, t, x);
        rows = active_set(be.G, be.c, x).indices;
        ++used;
      } catch (const NumericalError&) {
        rows.clear();
      }
      const double leash =
          std::min(1e3 * fx.norm, 0.05 * (1.0 + inf_norm(x)));
      Vec xf = x;
      FieldPoint ff = frozen_field(p, cfg, t, xf, rows);
      ++used;
      std::vector<Vec> chain_f;
      bool frozen_done = false;
      while (ff.ok && used < budget &&
             iters + static_cast<int>(chain_f.size()) < max_iter) {
        if (ff.norm <= tol) {
          frozen_done = true;
          break;
        }
        Mat J(dx, dx);
        bool jac_ok = true;
        for (Eigen::Index j = 0; j < dx; ++j) {
          const double step =
              std::sqrt(std::numeric_limits<double>::epsilon()) *
              std::max(1.0, std::fabs(xf(j)));
          Vec xs = xf;
          xs(j) += step;
          const FieldPoint fj = frozen_field(p, cfg, t, xs, rows);
          ++used;
          if (!fj.ok) {
            jac_ok = false;
            break;
          }
          J.col(j) = (fj.dir - ff.dir) / step;
        }
        if (!jac_ok) break;
        const Vec dn = Eigen::PartialPivLU<Mat>(J).solve(Vec(-ff.dir));
        if (!dn.allFinite()) break;
        double alpha = 1.0;
        bool accepted = false;
        while (alpha >= std::ldexp(1.0, -20)) {
          const Vec xt = xf + alpha * dn;
          const FieldPoint ft = frozen_field(p, cfg, t, xt, rows);
          ++used;
          if (ft.ok && ft.norm < (1.0 - 1e-4 * alpha) * ff.norm) {
            xf = xt;
            ff = ft;
            accepted = true;
            break;
          }
          alpha *= 0.5;
        }
        if (!accepted) break;
        chain_f.push_back(xf);
        if (inf_norm(Vec(xf - x)) > leash) break;
      }
      if (frozen_done && inf_norm(Vec(xf - x)) <= leash) {
        const FieldPoint fr = raw_field(p, cfg, t, xf);
        ++used;
        if (fr.ok && fr.norm <= tol) {
          chain.insert(chain.end(), chain_f.begin(), chain_f.end());
          iters += static_cast<int>(chain_f.size());
          return PolishResult{xf, fr.norm, true};
        }
      }
    }
    while (used < budget && iters < max_iter) {
      if (fx.norm <= tol) return PolishResult{x, fx.norm, true};
      Mat J(dx, dx);
      bool jac_ok = true;
      for (Eigen::Index j = 0; j < dx; ++j) {
        const double step =
            std::sqrt(std::numeric_limits<double>::epsilon()) *
            std::max(1.0, std::fabs(x(j)));
        Vec xs = x;
        xs(j) += step;
        const FieldPoint fj = raw_field(p, cfg, t, xs);
        ++used;
        if (!fj.ok) {
          jac_ok = false;
          break;
        }
        J.col(j) = (fj.dir - fx.dir) / step;
      }
      if (!jac_ok) return PolishResult{x, fx.norm, false};
      const Vec dn = Eigen::PartialPivLU<Mat>(J).solve(Vec(-fx.dir));
      if (!dn.allFinite()) return PolishResult{x, fx.norm, false};
      double alpha = 1.0;
      bool accepted = false;
      FieldPoint ft;
      Vec xt;
      while (alpha >= std::ldexp(1.0, -20)) {
        xt = x + alpha * dn;
        ft = raw_field(p, cfg, t, xt);
        ++used;
        if (ft.ok && ft.norm < (1.0 - 1e-4 * alpha) * fx.norm) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) return PolishResult{x, fx.norm, false};
      x = xt;
      fx = ft;
      chain.push_back(x);
      ++iters;
    }
    return PolishResult{x, fx.norm, fx.norm <= tol};
  };
  const int polish_budget = std::max(70, 10 * (static_cast<int>(dx) + 2));
  const int final_budget = std::max(150, 20 * (static_cast<int>(dx) + 2));

  int since_polish = 99;

  // A stall with the direction already small means the iterate sits beside
  // a root or a constraint-boundary rest point. Refine in place before any
  // global transport: a minimizer pinned to a boundary leaves a hairline
  // discontinuity the step schemes cannot cross, and walking away from it
  // would hand back a different basin's root. A refinement that stays small
  // but cannot reach tolerance gets one fresh-budget retry from its own
  // result; a genuine root converges on the retry, while failing twice in a
  // row is the signature of a discontinuity floor, and the floor point is
  // the answer (reported unconverged while above tolerance).
  if (cur.norm < 5e-2) {
    std::vector<Vec> chain;
    PolishResult pr = polish(chi, polish_budget, chain);
    since_polish = 0;
    if (!pr.done &&
        pr.norm <= std::max(1e3 * tol, 1e-4) * (1.0 + inf_norm(pr.x))) {
      pr = polish(pr.x, polish_budget, chain);
      if (!pr.done) {
        history.insert(history.end(), chain.begin(), chain.end());
        chi = pr.x;
        return finish(pr.norm <= tol, pr.norm);
      }
    }
    if (pr.done) {
      history.insert(history.end(), chain.begin(), chain.end());
      chi = pr.x;
      return finish(true, pr.norm);
    }
  }

  // Outside the local regime the iterate is transported along the flow of
  // the smoothed direction field. Step acceptance asks for what the exact
  // flow delivers: the output residual keeps at least half its exponential
  // decay rate, the cost does not climb once the residual is small, and
  // neither the endpoint direction nor the last stage blows up. A step of
  // the large-step map that moves nothing fails the residual test, so the
  // step size shrinks instead of stalling; at the floor a short nudge along
  // the field escapes and the step size restarts.
  double h = 0.2;
  FieldPoint fs = smooth_field(p, cfg, t, chi);
  while (iters < max_iter && fs.ok) {
    if (fs.norm < 5e-2 && since_polish >= 3) {
      std::vector<Vec> chain;
      const PolishResult pr = polish(chi, polish_budget, chain);
      since_polish = 0;
      if (pr.done) {
        history.insert(history.end(), chain.begin(), chain.end());
        chi = pr.x;
        return finish(true, pr.norm);
      }
    }
    const Vec& k1 = fs.dir;
    const FieldPoint f2 = smooth_field(p, cfg, t, Vec(chi + 0.5 * h * k1));
    const FieldPoint f3 =
        f2.ok ? smooth_field(p, cfg, t, Vec(chi + 0.5 * h * f2.dir)) : f2;
    const FieldPoint f4 =
        f3.ok ? smooth_field(p, cfg, t, Vec(chi + h * f3.dir)) : f3;
    bool accept = false;
    FieldPoint ft;
    Vec xt;
    if (f4.ok) {
      xt = chi + (h / 6.0) * (k1 + 2.0 * f2.dir + 2.0 * f3.dir + f4.dir);
      ft = smooth_field(p, cfg, t, xt);
      const double cap = 8.0 * std::max(fs.norm, 0.1);
      const bool ok_grow = ft.norm <= cap && f4.norm <= cap;
      const bool ok_feas =
          ft.feas <= fs.feas * std::exp(-0.5 * h) + feas_slack;
      const bool ok_sigma =
          fs.feas > feas_gate ||
          ft.sigma <=
              fs.sigma + 1e-8 * (1.0 + std::fabs(fs.sigma)) + 0.1 * fs.feas;
      accept = ft.ok && ok_grow && ok_feas && ok_sigma;
    }
    if (!accept) {
      h *= 0.5;
      if (h < 1e-3) {
        chi += 1e-3 * fs.dir;
        fs = smooth_field(p, cfg, t, chi);
        if (!fs.ok) break;
        h = 0.05;
        history.push_back(chi);
        ++iters;
      }
      continue;
    }
    chi = xt;
    fs = ft;
    h = std::min(0.5, 1.25 * h);
    history.push_back(chi);
    ++iters;
    ++since_polish;
  }

  std::vector<Vec> chain;
  const PolishResult pr = polish(chi, final_budget, chain);
  history.insert(history.end(), chain.begin(), chain.end());
  chi = pr.x;
  return finish(pr.done, pr.norm);
}

LagrangeMultiplier lagrange_multiplier(const ProblemDef& p,
                                       const BarrierConfig& cfg, double t,
                                       const Vec& chi) {
  const EvalBundle bundle = eval_bundle(p, t, chi);
  const AugmentedDerivatives aug = assemble_rR(bundle, cfg);
  const WeightedPinvFactor F = wpinv_build(bundle.H, aug.R_factor);
  const Vec Rinv_r = solve_spd(aug.R_factor, aug.r);
  LagrangeMultiplier mult;
  mult.zeta = solve_spd(F.S, Vec(bundle.ybar - bundle.h + bundle.H * Rinv_r));
  return mult;
}

double kkt_residual(const ProblemDef& p, const BarrierConfig& cfg, double t,
                    const Vec& chi, const LagrangeMultiplier& mult) {
  const EvalBundle bundle = eval_bundle(p, t, chi);
  const AugmentedDerivatives aug = assemble_rR(bundle, cfg);
  const Vec stationarity = aug.r - bundle.H.transpose() * mult.zeta;
  const Vec feasibility = bundle.ybar - bundle.h;
  return std::max(stationarity.cwiseAbs().maxCoeff(),
                  feasibility.cwiseAbs().maxCoeff());
}

Vec stacked_ip_step(const ProblemDef& p, const BarrierConfig& cfg,
                    const std::vector<double>& sample_times, const Vec& phi) {
  const Eigen::Index N = static_cast<Eigen::Index>(sample_times.size());
  if (N < 1) throw EmptySeries();
  if (phi.size() != N * p.d_x) {
    throw DimensionMismatch("stacked vector length " +
                            std::to_string(phi.size()) + ", expected " +
                            std::to_string(N * p.d_x));
  }
  Vec out(phi.size());
  for (Eigen::Index k = 0; k < N; ++k) {
    out.segment(k * p.d_x, p.d_x) =
        ip_step(p, cfg, sample_times[static_cast<size_t>(k)],
                Vec(phi.segment(k * p.d_x, p.d_x)));
  }
  return out;
}

RefTrajectory reference_trajectory(const ProblemDef& p,
                                   const BarrierConfig& cfg,
                                   const std::vector<double>& times,
                                   const Vec& chi_init, double tol,
                                   int max_iter) {
  RefTrajectory traj;
  traj.points.reserve(times.size());
  Vec warm = chi_init;
  for (double t : times) {
    const SolveReport rep = solve_instant(p, cfg, t, warm, tol, max_iter);
    RefPoint pt;
    pt.t = t;
    pt.chi = rep.chi_star;
    pt.iterations = rep.iterations;
    pt.converged = rep.converged;
    traj.points.push_back(std::move(pt));
    warm = traj.points.back().chi;
  }

  if (traj.points.size() < 2) return traj;
  std::vector<double> steps(traj.points.size() - 1);
  for (size_t n = 1; n < traj.points.size(); ++n) {
    steps[n - 1] = (traj.points[n].chi - traj.points[n - 1].chi).norm();
  }
  std::vector<double> sorted = steps;
  std::sort(sorted.begin(), sorted.end());
  const size_t m = sorted.size();
  traj.median_step = m % 2 == 1
                         ? sorted[m / 2]
                         : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);

  for (size_t n = 1; n < traj.points.size(); ++n) {
    const double floor =
        1e-9 * (1.0 + traj.points[n].chi.cwiseAbs().maxCoeff());
    if (steps[n - 1] > 10.0 * traj.median_step && steps[n - 1] > floor) {
      traj.points[n].jump = true;
      traj.exclusion_windows.emplace_back(traj.points[n].t - 0.05,
                                          traj.points[n].t + 0.05);
    }
  }
  return traj;
}

Vec tracking_control_from_solution(const EvalBundle& bundle,
                                   const Vec& chi_star, double K_chi) {
  return oed_control(bundle, Vec(chi_star - bundle.x), K_chi);
}

}  // namespace oed
