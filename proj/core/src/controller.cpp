#include "oed/controller.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/LU>

namespace oed {

AugmentedDerivatives assemble_rR(const EvalBundle& bundle,
                                 const BarrierConfig& cfg) {
  AugmentedDerivatives aug;
  aug.active = active_set(bundle.G, bundle.c, bundle.x);
  if (aug.active.empty()) {
    aug.r = bundle.q;
    aug.p2_used = 0.0;
    aug.R_factor = factor_spd(bundle.Q, bundle.diagonal_q);
    return aug;
  }
  const double p2 = cfg.p2_mode == BarrierConfig::P2Mode::designed
                        ? design_p2(bundle.Q, aug.active.Gbar, cfg.K_RQ)
                        : cfg.p2;
  const double p2sq = p2 * p2;
  aug.p2_used = p2;
  aug.r = bundle.q + p2sq * aug.active.Gbar.transpose() * aug.active.gbar;
  const Mat R =
      bundle.Q + p2sq * aug.active.Gbar.transpose() * aug.active.Gbar;
  aug.R_factor = factor_spd(R);
  return aug;
}

Vec eta(const EvalBundle& bundle, const AugmentedDerivatives& aug) {
  const WeightedPinvFactor F = wpinv_build(bundle.H, aug.R_factor);
  const Vec eta_A = wpinv_apply(F, Vec(bundle.ybar - bundle.h));
  const Vec eta_B = null_project(F, solve_spd(aug.R_factor, aug.r));
  return eta_A - eta_B;
}

Vec oed_control(const EvalBundle& bundle, const Vec& eta_val, double K_x) {
  const Vec rhs = -bundle.f_A + K_x * eta_val;
  Eigen::PartialPivLU<Mat> lu(bundle.B);
  const Vec u = lu.solve(rhs);
  if (!u.allFinite()) throw SingularInputMatrix();
  const double resid = (bundle.B * u - rhs).cwiseAbs().maxCoeff();
  if (resid > 1e-8 * (1.0 + rhs.cwiseAbs().maxCoeff())) {
    throw SingularInputMatrix();
  }
  return u;
}

Vec oed_control_eval(const ProblemDef& p, const BarrierConfig& cfg, double t,
                     const Vec& x, double K_x, ControlDiagnostics* diag) {
  const auto start = std::chrono::steady_clock::now();
  const EvalBundle bundle = eval_bundle(p, t, x);
  const AugmentedDerivatives aug = assemble_rR(bundle, cfg);
  const Vec e = eta(bundle, aug);
  const Vec u = oed_control(bundle, e, K_x);
  const auto stop = std::chrono::steady_clock::now();
  if (diag != nullptr) {
    diag->active_count = static_cast<int>(aug.active.indices.size());
    diag->eta_norm = e.size() > 0 ? e.cwiseAbs().maxCoeff() : 0.0;
    diag->p2_used = aug.p2_used;
    diag->duration_seconds =
        std::chrono::duration<double>(stop - start).count();
    diag->krq_warning = cfg.p2_mode == BarrierConfig::P2Mode::designed &&
                        cfg.K_RQ < 1000.0 && !aug.active.empty();
  }
  return u;
}

ConstrainedSystemTerms constrained_system_terms(const EvalBundle& bundle,
                                                const BarrierConfig& cfg) {
  (void)cfg;
  const Eigen::Index n = bundle.x.size();
  Mat I = Mat::Identity(n, n);
  SpdFactor W = factor_spd(I, true);

  const ActiveSet active = active_set(bundle.G, bundle.c, bundle.x);
  const WeightedPinvFactor FH = wpinv_build(bundle.H, W);

  ConstrainedSystemTerms terms;
  if (active.empty()) {
    terms.omega_A = -wpinv_apply(FH, bundle.h);
    terms.Omega_B = I - FH.Z * solve_spd(FH.S, bundle.H);
    return terms;
  }
  // z solves Gbar z = gbar with minimum norm; Gbar^T Gbar is singular for
  // fewer violated rows than states, so the right pseudoinverse is used.
  const WeightedPinvFactor FG = wpinv_build(active.Gbar, W);
  const Vec z = wpinv_apply(FG, active.gbar);
  const Vec Hh = wpinv_apply(FH, bundle.h);
  terms.omega_A = -Hh - null_project(FH, z);

  Mat stacked(active.Gbar.rows() + bundle.H.rows(), n);
  stacked.topRows(active.Gbar.rows()) = active.Gbar;
  stacked.bottomRows(bundle.H.rows()) = bundle.H;
  const WeightedPinvFactor FS = wpinv_build(stacked, W);
  terms.Omega_B = I - FS.Z * solve_spd(FS.S, stacked);
  return terms;
}

}  // namespace oed
