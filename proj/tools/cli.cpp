#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oed/examples.hpp"
#include "oed/metrics.hpp"
#include "oed/sim.hpp"

namespace oedcli {

namespace {

using nlohmann::json;
using namespace oed;

// Shortest decimal that round-trips to the same double.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

struct ProblemChoice {
  std::string example = "m1";
  int d_x = 32;
  uint64_t seed = 1;
  std::string qmode = "spd";
};

QMode parse_qmode(const std::string& name) {
  if (name == "identity") return QMode::identity;
  if (name == "diagonal") return QMode::diagonal;
  if (name == "spd") return QMode::dense_spd;
  throw CLI::ValidationError("--qmode", "expected identity, diagonal, or spd");
}

ProblemDef build_problem(const ProblemChoice& pc) {
  if (pc.example == "m1") return m1();
  if (pc.example == "synthetic") {
    return synthetic_family(pc.d_x, pc.seed, parse_qmode(pc.qmode));
  }
  if (pc.example == "portfolio") return portfolio_synthetic(pc.d_x, pc.seed);
  throw CLI::ValidationError("--example",
                             "expected m1, synthetic, or portfolio");
}

void add_problem_flags(CLI::App* cmd, ProblemChoice* pc) {
  cmd->add_option("--example", pc->example,
                  "problem to build: m1 | synthetic | portfolio");
  cmd->add_option("--dx", pc->d_x, "state dimension for synthetic problems");
  cmd->add_option("--seed", pc->seed, "generator seed for synthetic problems");
  cmd->add_option("--qmode", pc->qmode,
                  "synthetic cost curvature: identity | diagonal | spd");
}

int cmd_run(const ProblemChoice& pc, double kx, double dt, double t0,
            double t_final, const std::string& x0_text, bool zoh,
            const std::string& out_path) {
  const ProblemDef p = build_problem(pc);
  Vec x0 = Vec::Zero(p.d_x);
  if (!x0_text.empty()) {
    const auto vals = parse_list(x0_text);
    if (static_cast<int>(vals.size()) != p.d_x) {
      throw NumericalError("--x0 needs " + std::to_string(p.d_x) +
                           " comma-separated values");
    }
    for (int i = 0; i < p.d_x; ++i) x0(i) = vals[static_cast<size_t>(i)];
  }

  SimConfig cfg;
  cfg.t0 = t0;
  cfg.t_final = t_final;
  cfg.dt = dt;
  cfg.K_x = kx;
  cfg.zero_order_hold = zoh;
  BarrierConfig barrier;
  const Trajectory traj = simulate_closed_loop(p, cfg, barrier, x0);

  std::ofstream f(out_path);
  if (!f) throw NumericalError("cannot open " + out_path);
  f << "t";
  for (int i = 1; i <= p.d_x; ++i) f << ",x" << i;
  for (int i = 1; i <= p.d_y; ++i) f << ",y" << i;
  f << ",sigma,tau_c\n";
  for (Eigen::Index n = 0; n < traj.times.size(); ++n) {
    f << fmt(traj.times(n));
    for (int i = 0; i < p.d_x; ++i) f << ',' << fmt(traj.states(n, i));
    for (int i = 0; i < p.d_y; ++i) f << ',' << fmt(traj.outputs(n, i));
    f << ',' << fmt(traj.sigma_values(n));
    f << ',' << fmt(n < traj.tau_c.size() ? traj.tau_c(n) : 0.0);
    f << '\n';
  }
  if (!traj.completed) {
    json rec;
    rec["error"] = traj.error;
    std::cerr << rec.dump() << '\n';
    return 2;
  }
  return 0;
}

int cmd_solve(const ProblemChoice& pc, double t0, double t_final, double rate,
              const std::string& chi0_text, double tol, int max_iter,
              const std::string& out_path) {
  const ProblemDef p = build_problem(pc);
  Vec chi0 = Vec::Zero(p.d_x);
  if (!chi0_text.empty()) {
    const auto vals = parse_list(chi0_text);
    if (static_cast<int>(vals.size()) != p.d_x) {
      throw NumericalError("--chi0 needs " + std::to_string(p.d_x) +
                           " comma-separated values");
    }
    for (int i = 0; i < p.d_x; ++i) chi0(i) = vals[static_cast<size_t>(i)];
  }

  const long long N = std::llround((t_final - t0) * rate);
  if (N < 1) throw NumericalError("empty sample grid");
  std::vector<double> times(static_cast<size_t>(N) + 1);
  for (long long k = 0; k <= N; ++k) {
    times[static_cast<size_t>(k)] = t0 + static_cast<double>(k) / rate;
  }

  BarrierConfig barrier;
  const RefTrajectory ref =
      reference_trajectory(p, barrier, times, chi0, tol, max_iter);

  std::ofstream f(out_path);
  if (!f) throw NumericalError("cannot open " + out_path);
  f << "t";
  for (int i = 1; i <= p.d_x; ++i) f << ",chi" << i;
  f << ",iterations,jump_flag\n";
  for (const RefPoint& pt : ref.points) {
    f << fmt(pt.t);
    for (int i = 0; i < p.d_x; ++i) f << ',' << fmt(pt.chi(i));
    f << ',' << pt.iterations << ',' << (pt.jump ? 1 : 0) << '\n';
  }
  return 0;
}

int cmd_bench(const std::string& dims_text, const std::string& mode,
              uint64_t seed, int steps, const std::string& out_path) {
  const auto dims_d = parse_list(dims_text);
  if (dims_d.size() < 3) {
    throw NumericalError("--dims needs at least 3 comma-separated sizes");
  }

  json out;
  out["mode"] = mode;
  out["dims"] = json::array();
  out["per_dim"] = json::array();
  std::vector<double> dims, means;

  // Timed runs execute strictly one after another; nothing else runs in
  // the process while tau_c is being collected.
  for (double dd : dims_d) {
    const int d = static_cast<int>(dd);
    out["dims"].push_back(d);
    const ProblemDef p = synthetic_family(d, seed, parse_qmode(mode));

    SimConfig cfg;
    cfg.t0 = 0.0;
    cfg.dt = 1.0 / 2000.0;
    cfg.t_final = static_cast<double>(steps) * cfg.dt;
    cfg.K_x = 500.0;
    cfg.zero_order_hold = true;  // timing target is the stage-1 evaluation
    BarrierConfig barrier;

    // Warm-up run touches every allocation path before timing.
    {
      SimConfig warm = cfg;
      warm.t_final = 4.0 * warm.dt;
      simulate_closed_loop(p, warm, barrier, Vec::Zero(d));
    }
    const Trajectory traj =
        simulate_closed_loop(p, cfg, barrier, Vec::Zero(d));
    const TimingSummary s = timing_summary(traj.tau_c);

    json row;
    row["d_x"] = d;
    row["median"] = s.median;
    row["q25"] = s.q25;
    row["q75"] = s.q75;
    row["min"] = s.min;
    row["max"] = s.max;
    row["mad_over_median"] = s.mad_over_median;
    out["per_dim"].push_back(row);

    dims.push_back(static_cast<double>(d));
    means.push_back(traj.tau_c.mean());
  }

  const TrendFit fit = fit_cube_trend(dims, means);
  out["trend"] = {{"p1", fit.p1}, {"p2", fit.p2}, {"r_squared", fit.r_squared}};

  std::ofstream f(out_path);
  if (!f) throw NumericalError("cannot open " + out_path);
  f << out.dump(2) << '\n';
  return 0;
}

int cmd_sclqr(const std::string& x0_text, double t_final, double dt,
              const std::string& out_path) {
  const SclqrModel m = sclqr_paper();
  Vec x0(3);
  x0 << 1.0, 1.0, 1.0;
  if (!x0_text.empty()) {
    const auto vals = parse_list(x0_text);
    if (vals.size() != 3) throw NumericalError("--x0 needs 3 values");
    for (int i = 0; i < 3; ++i) x0(i) = vals[static_cast<size_t>(i)];
  }

  const TransformedLq lq = transformed_lq(m);
  const RiccatiSolution sol = riccati_backward(lq);

  const long long N = std::llround(t_final / dt);
  Vec x = x0;
  double cost = 0.0;
  std::ofstream f;
  if (!out_path.empty()) {
    f.open(out_path);
    if (!f) throw NumericalError("cannot open " + out_path);
    f << "t,x1,x2,x3,hx\n";
  }
  auto field = [&](double, const Vec& xs) -> Vec {
    const Vec u = sclqr_control(m, sol, xs);
    return Vec(m.A * xs + m.B * u);
  };
  for (long long n = 0; n <= N; ++n) {
    const double t = static_cast<double>(n) * dt;
    if (f.is_open()) {
      f << fmt(t);
      for (int i = 0; i < 3; ++i) f << ',' << fmt(x(i));
      f << ',' << fmt((m.H * x)(0)) << '\n';
    }
    if (n == N) break;
    const Vec u = sclqr_control(m, sol, x);
    cost += dt * (x.dot(m.Q_xx * x) + u.dot(m.Q_uu * u));
    x = rk4_step(field, t, x, dt);
  }

  json rec;
  rec["settled"] = sol.settled;
  rec["settle_time"] = sol.settle_time;
  rec["regularization_eps"] = sol.regularization_eps;
  rec["cost"] = cost;
  std::cout << rec.dump(2) << '\n';
  return 0;
}

// ---- verify: fast property sweep over every module ----

struct Check {
  std::string name;
  std::function<bool()> fn;
};

ProblemDef quadratic_linear_problem(int d_x, int d_y, uint64_t seed) {
  SplitMix64 rng(seed);
  Mat Araw(d_x, d_x);
  for (int i = 0; i < d_x; ++i) {
    for (int j = 0; j < d_x; ++j) Araw(i, j) = 2.0 * rng.uniform() - 1.0;
  }
  auto M = std::make_shared<Mat>(Araw.transpose() * Araw +
                                 Mat::Identity(d_x, d_x));
  auto a = std::make_shared<Vec>(d_x);
  for (int i = 0; i < d_x; ++i) (*a)(i) = 2.0 * rng.uniform() - 1.0;
  auto C = std::make_shared<Mat>(d_y, d_x);
  for (int i = 0; i < d_y; ++i) {
    for (int j = 0; j < d_x; ++j) (*C)(i, j) = 2.0 * rng.uniform() - 1.0;
  }
  auto b = std::make_shared<Vec>(d_y);
  for (int i = 0; i < d_y; ++i) (*b)(i) = 2.0 * rng.uniform() - 1.0;

  ProblemDef p;
  p.d_x = d_x;
  p.d_y = d_y;
  p.d_c = 0;
  p.f_A = [d_x](double, const Vec&) { return Vec(Vec::Zero(d_x)); };
  p.B = [d_x](double, const Vec&) { return Mat(Mat::Identity(d_x, d_x)); };
  p.h = [C](double, const Vec& x) { return Vec(*C * x); };
  p.H = [C](double, const Vec&) { return *C; };
  p.ybar = [b](double) { return *b; };
  p.sigma = [M, a](double, const Vec& x) {
    return 0.5 * (x - *a).dot(*M * (x - *a));
  };
  p.q = [M, a](double, const Vec& x) { return Vec(*M * (x - *a)); };
  p.Q = [M](double, const Vec&) { return *M; };
  p.G = [d_x](double) { return Mat(Mat::Zero(0, d_x)); };
  p.c = [](double) { return Vec(Vec::Zero(0)); };
  return p;
}

// Equality-constrained quadratic minimizer by a dense saddle solve.
Vec kkt_minimizer(const ProblemDef& p, double t) {
  const Vec x0 = Vec::Zero(p.d_x);
  const Mat M = p.Q(t, x0);
  const Mat C = p.H(t, x0);
  const Vec q0 = p.q(t, x0);
  const Vec h0 = p.h(t, x0);
  const Vec b = p.ybar(t);
  const Eigen::Index n = M.rows(), k = C.rows();
  Mat S(n + k, n + k);
  S.setZero();
  S.topLeftCorner(n, n) = M;
  S.topRightCorner(n, k) = C.transpose();
  S.bottomLeftCorner(k, n) = C;
  Vec rhs(n + k);
  rhs.head(n) = M * x0 - q0;
  rhs.tail(k) = b - h0 + C * x0;
  return Eigen::FullPivLU<Mat>(S).solve(rhs).head(n);
}

std::vector<Check> verify_checks() {
  std::vector<Check> checks;
  auto add = [&checks](const std::string& name, std::function<bool()> fn) {
    checks.push_back({name, std::move(fn)});
  };

  add("spd factor round trip", [] {
    SplitMix64 rng(11);
    Mat A(16, 16);
    for (int i = 0; i < 16; ++i) {
      for (int j = 0; j < 16; ++j) A(i, j) = 2.0 * rng.uniform() - 1.0;
    }
    const Mat M = A.transpose() * A + Mat::Identity(16, 16);
    const SpdFactor F = factor_spd(M);
    Vec f(16);
    for (int i = 0; i < 16; ++i) f(i) = rng.uniform();
    return (M * solve_spd(F, f) - f).cwiseAbs().maxCoeff() <= 1e-9;
  });

  add("diagonal and dense weights agree", [] {
    Vec d(6);
    d << 1.0, 2.0, 0.5, 4.0, 1.5, 3.0;
    const Mat D = d.asDiagonal();
    const SpdFactor Fd = factor_spd(D, true);
    const SpdFactor Fx = factor_spd(D, false);
    Vec f(6);
    f << 1, -2, 3, -4, 5, -6;
    return (solve_spd(Fd, f) - solve_spd(Fx, f)).cwiseAbs().maxCoeff() <=
           1e-12;
  });

  add("weighted pseudoinverse is a right inverse", [] {
    SplitMix64 rng(7);
    Mat H(3, 8), A(8, 8);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 8; ++j) H(i, j) = 2.0 * rng.uniform() - 1.0;
    }
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) A(i, j) = 2.0 * rng.uniform() - 1.0;
    }
    const SpdFactor W = factor_spd(
        Mat(A.transpose() * A + Mat::Identity(8, 8)));
    const WeightedPinvFactor F = wpinv_build(H, W);
    Mat HHs(3, 3);
    for (int c = 0; c < 3; ++c) {
      HHs.col(c) = H * wpinv_apply(F, Vec(Mat::Identity(3, 3).col(c)));
    }
    return (HHs - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-9;
  });

  add("null projector annihilates and is idempotent", [] {
    SplitMix64 rng(13);
    Mat H(2, 6);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 6; ++j) H(i, j) = 2.0 * rng.uniform() - 1.0;
    }
    const SpdFactor W = factor_spd(Mat(Mat::Identity(6, 6)), true);
    const WeightedPinvFactor F = wpinv_build(H, W);
    Vec v(6);
    for (int i = 0; i < 6; ++i) v(i) = 2.0 * rng.uniform() - 1.0;
    const Vec Pv = null_project(F, v);
    const Vec PPv = null_project(F, Pv);
    return (H * Pv).cwiseAbs().maxCoeff() <= 1e-9 &&
           (PPv - Pv).cwiseAbs().maxCoeff() <= 1e-9;
  });

  add("penalty weight satisfies the design equation", [] {
    Mat Q = Mat::Identity(2, 2);
    Mat Gbar(1, 2);
    Gbar << 1.0, 0.0;
    const double p2 = design_p2(Q, Gbar, 1001.0);
    const Mat GtG = Gbar.transpose() * Gbar;
    const double gnorm = GtG.cwiseAbs().rowwise().sum().maxCoeff();
    const double qnorm = Q.cwiseAbs().rowwise().sum().maxCoeff();
    return std::fabs(p2 * p2 * gnorm / qnorm - 1000.0) <= 1e-9 * 1000.0;
  });

  add("sharp-limit penalty slopes and curvatures", [] {
    const double p2 = 3.0;
    const bool slopes = xi_limit(2.0, p2) == p2 * p2 * 2.0 &&
                        xi_limit(-1.0, p2) == 0.0 && xi_limit(0.0, p2) == 0.0;
    const double at0 = Xi_limit(0.0, p2);
    const bool curv = Xi_limit(1.0, p2) == p2 * p2 &&
                      Xi_limit(-2.0, p2) == 0.0 &&
                      std::fabs(at0 - 0.25 * (std::log(2.0) + 1.0) * p2 * p2) <=
                          1e-12;
    return slopes && curv;
  });

  add("two-state example passes derivative checks", [] {
    const ProblemDef p = m1();
    SplitMix64 rng(3);
    for (int k = 0; k < 5; ++k) {
      Vec x(2);
      x << 2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0;
      const DerivCheckReport rep = check_derivatives(p, 2.0 * rng.uniform(), x);
      if (rep.q_error > 1e-4 || rep.Q_error > 1e-4 || rep.H_error > 1e-4) {
        return false;
      }
    }
    return true;
  });

  add("one minimizing step solves quadratic problems", [] {
    const ProblemDef p = quadratic_linear_problem(8, 3, 21);
    const Vec target = kkt_minimizer(p, 0.0);
    SplitMix64 rng(5);
    Vec x0(8);
    for (int i = 0; i < 8; ++i) x0(i) = 2.0 * rng.uniform() - 1.0;
    const Vec x1 = ip_step(p, BarrierConfig{}, 0.0, x0);
    return (x1 - target).cwiseAbs().maxCoeff() <= 1e-8;
  });

  add("minimizing direction vanishes at the minimizer", [] {
    const ProblemDef p = m1();
    BarrierConfig cfg;
    const SolveReport rep =
        solve_instant(p, cfg, 0.0, Vec(Vec::Constant(2, 0.9)), 1e-12, 200);
    if (!rep.converged) return false;
    const EvalBundle bundle = eval_bundle(p, 0.0, rep.chi_star);
    const AugmentedDerivatives aug = assemble_rR(bundle, cfg);
    return eta(bundle, aug).cwiseAbs().maxCoeff() <= 1e-9;
  });

  add("stacked step equals independent instant steps", [] {
    const ProblemDef p = m1();
    BarrierConfig cfg;
    const std::vector<double> times = {0.0, 0.7, 1.9, 3.3};
    SplitMix64 rng(17);
    Vec phi(8);
    for (int i = 0; i < 8; ++i) phi(i) = 2.0 * rng.uniform() - 1.0;
    const Vec stacked = stacked_ip_step(p, cfg, times, phi);
    for (int k = 0; k < 4; ++k) {
      const Vec single =
          ip_step(p, cfg, times[static_cast<size_t>(k)],
                  Vec(phi.segment(2 * k, 2)));
      if ((stacked.segment(2 * k, 2) - single).cwiseAbs().maxCoeff() > 1e-12) {
        return false;
      }
    }
    return true;
  });

  add("control realizes the closed-loop identity", [] {
    const ProblemDef p = m1();
    BarrierConfig cfg;
    Vec x(2);
    x << 0.5, 0.5;
    const EvalBundle bundle = eval_bundle(p, 0.0, x);
    const AugmentedDerivatives aug = assemble_rR(bundle, cfg);
    const Vec e = eta(bundle, aug);
    const Vec u = oed_control(bundle, e, 100.0);
    return (bundle.B * u + bundle.f_A - 100.0 * e).cwiseAbs().maxCoeff() <=
           1e-10;
  });

  add("constrained-system projector annihilates the output map", [] {
    const ProblemDef p = m1();
    Vec x(2);
    x << 0.3, -0.2;
    const EvalBundle bundle = eval_bundle(p, 1.0, x);
    const ConstrainedSystemTerms terms =
        constrained_system_terms(bundle, BarrierConfig{});
    const Mat P2 = terms.Omega_B * terms.Omega_B;
    return (bundle.H * terms.Omega_B).cwiseAbs().maxCoeff() <= 1e-9 &&
           (P2 - terms.Omega_B).cwiseAbs().maxCoeff() <= 1e-9;
  });

  add("equal solver speeds emulate a one-sample hold", [] {
    Mat chi(6, 1);
    chi << 0, 1, 2, 3, 4, 5;
    const Vec tau = Vec::Ones(6);
    const Mat out = emulate_delayed(tau, tau, chi);
    Mat want(6, 1);
    want << 0, 0, 1, 2, 3, 4;
    return (out - want).cwiseAbs().maxCoeff() == 0.0;
  });

  add("cubic trendline recovers exact cubes", [] {
    const std::vector<double> dims = {8, 16, 32, 64};
    std::vector<double> times;
    for (double d : dims) times.push_back(std::pow(2.0 * d, 3.0));
    const TrendFit fit = fit_cube_trend(dims, times);
    return std::fabs(fit.p1 - 2.0) <= 1e-9 && std::fabs(fit.p2) <= 1e-7 &&
           std::fabs(fit.r_squared - 1.0) <= 1e-12;
  });

  add("quantiles interpolate order statistics", [] {
    Vec tau(5);
    tau << 1, 2, 3, 4, 5;
    const TimingSummary s = timing_summary(tau);
    return s.median == 3.0 && s.q25 == 2.0 && s.q75 == 4.0 && s.min == 1.0 &&
           s.max == 5.0;
  });

  add("output-nulling projectors for the 3-D model", [] {
    const SclqrModel m = sclqr_paper();
    const SclqrProjectors pr = build_projectors(m);
    const NullParam np = null_param(m.H);
    if (!np.leading_identity) return false;
    const bool row_ok = std::fabs(np.psi(2, 0) - 0.4795) <= 5e-4 &&
                        std::fabs(np.psi(2, 1) + 0.1642) <= 5e-4;
    return row_ok &&
           (pr.Omega_B * m.H.transpose()).cwiseAbs().maxCoeff() <= 1e-9 &&
           (m.H * np.psi).cwiseAbs().maxCoeff() <= 1e-10;
  });

  add("integrator matches the exponential flow", [] {
    auto f = [](double, const Vec& x) { return Vec(-x); };
    Vec x(1);
    x << 1.0;
    const Vec next = rk4_step(f, 0.0, x, 0.01);
    return std::fabs(next(0) - std::exp(-0.01)) <= 1e-10;
  });

  return checks;
}

int cmd_verify() {
  // Worker cap for phases that may parallelize; the sweep below is
  // sequential, which respects any cap.
  if (const char* env = std::getenv("OEDCTL_THREADS")) {
    (void)env;
  }
  const auto checks = verify_checks();
  size_t failed = 0;
  for (const Check& c : checks) {
    bool ok = false;
    try {
      ok = c.fn();
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok) ++failed;
    std::cout << (ok ? "PASS  " : "FAIL  ") << c.name << '\n';
  }
  std::cout << (checks.size() - failed) << "/" << checks.size()
            << " properties hold\n";
  return failed == 0 ? 0 : 2;
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"optimal tracking controller toolkit"};
  app.require_subcommand(1);

  ProblemChoice run_pc;
  double run_kx = 100.0, run_dt = 1.0 / 2000.0, run_t0 = 0.0,
         run_tfinal = 1.0;
  std::string run_x0, run_out = "traj.csv";
  bool run_zoh = false;
  auto* run = app.add_subcommand(
      "run", "integrate the closed loop and write the trajectory CSV");
  add_problem_flags(run, &run_pc);
  run->add_option("--kx", run_kx, "tracking gain");
  run->add_option("--dt", run_dt, "integration step");
  run->add_option("--t0", run_t0, "start time");
  run->add_option("--t-final", run_tfinal, "end time")->required();
  run->add_option("--x0", run_x0, "initial state, comma separated");
  run->add_flag("--zoh", run_zoh, "hold the control over each step");
  run->add_option("--out", run_out, "output CSV path");

  ProblemChoice solve_pc;
  double solve_t0 = 0.0, solve_tfinal = 1.0, solve_rate = 2000.0,
         solve_tol = 1e-10;
  int solve_maxiter = 200;
  std::string solve_chi0, solve_out = "reference.csv";
  auto* solve = app.add_subcommand(
      "solve", "sample the instant minimizer and write the reference CSV");
  add_problem_flags(solve, &solve_pc);
  solve->add_option("--t0", solve_t0, "start time");
  solve->add_option("--t-final", solve_tfinal, "end time")->required();
  solve->add_option("--rate", solve_rate, "samples per time unit");
  solve->add_option("--chi0", solve_chi0, "initial guess, comma separated");
  solve->add_option("--tol", solve_tol, "convergence tolerance");
  solve->add_option("--max-iter", solve_maxiter, "iteration cap per sample");
  solve->add_option("--out", solve_out, "output CSV path");

  std::string bench_dims = "32,64,128,256", bench_mode = "spd",
              bench_out = "bench.json";
  uint64_t bench_seed = 1;
  int bench_steps = 48;
  auto* bench = app.add_subcommand(
      "bench", "time control evaluations across dimensions");
  bench->add_option("--dims", bench_dims, "comma-separated state dimensions");
  bench->add_option("--mode", bench_mode,
                    "cost curvature: identity | diagonal | spd");
  bench->add_option("--seed", bench_seed, "generator seed");
  bench->add_option("--steps", bench_steps, "timed steps per dimension");
  bench->add_option("--out", bench_out, "output JSON path");

  std::string sclqr_x0, sclqr_out;
  double sclqr_tfinal = 0.5, sclqr_dt = 1e-4;
  auto* sclqr = app.add_subcommand(
      "sclqr", "run the 3-D constrained regulator example");
  sclqr->add_option("--x0", sclqr_x0, "initial state, comma separated");
  sclqr->add_option("--t-final", sclqr_tfinal, "end time");
  sclqr->add_option("--dt", sclqr_dt, "integration step");
  sclqr->add_option("--out", sclqr_out, "optional output CSV path");

  app.add_subcommand("verify", "run the property suite and report pass/fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (run->parsed()) {
      return cmd_run(run_pc, run_kx, run_dt, run_t0, run_tfinal, run_x0,
                     run_zoh, run_out);
    }
    if (solve->parsed()) {
      return cmd_solve(solve_pc, solve_t0, solve_tfinal, solve_rate,
                       solve_chi0, solve_tol, solve_maxiter, solve_out);
    }
    if (bench->parsed()) {
      return cmd_bench(bench_dims, bench_mode, bench_seed, bench_steps,
                       bench_out);
    }
    if (sclqr->parsed()) {
      return cmd_sclqr(sclqr_x0, sclqr_tfinal, sclqr_dt, sclqr_out);
    }
    return cmd_verify();
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    json rec;
    rec["error"] = e.what();
    std::cerr << rec.dump() << '\n';
    return 2;
  }
}

}  // namespace oedcli
