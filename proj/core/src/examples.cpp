#include "oed/examples.hpp"

#include <cmath>
#include <memory>

namespace oed {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Cost-shape matrix of the two-state example.
Mat m1_P(double t) {
  const double a = std::sin(kPi * t / 100.0);
  const double c4 = std::cos(4.0 * kPi * kPi * a);
  const double s4 = std::sin(4.0 * kPi * kPi * a);
  const double s2 = std::sin(2.0 * kPi * kPi * a);
  Mat P(2, 2);
  P(0, 0) = (9.0 * t + 9.0 * t * c4 + 40.0) / (18.0 * t + 40.0);
  P(0, 1) = 9.0 * t * s4 / (18.0 * t + 40.0);
  P(1, 0) = P(0, 1);
  P(1, 1) = (9.0 * t * s2 * s2 + 20.0) / (9.0 * t + 20.0);
  return P;
}

// Moving cost minimum of the two-state example.
Vec m1_p(double t) {
  Vec p(2);
  p(0) = -2.0 * std::sin(kPi * t / 5.0) / 3.0 -
         10.0 * std::sin(3.0 * kPi * t / 10.0) / 27.0;
  p(1) = 2.0 * std::cos(kPi * t / 5.0) / 3.0 -
         10.0 * std::cos(3.0 * kPi * t / 10.0) / 27.0;
  return p;
}

}  // namespace

ProblemDef m1() {
  ProblemDef p;
  p.d_x = 2;
  p.d_y = 1;
  p.d_c = 8;

  p.f_A = [](double, const Vec& x) {
    const double v = 1.0 / (x.squaredNorm() + 0.001);
    return Vec(Vec::Constant(2, v));
  };
  p.B = [](double, const Vec& x) {
    return Mat((x.squaredNorm() + 1.0) * Mat::Identity(2, 2));
  };

  p.h = [](double t, const Vec& x) {
    const double a = 5.0 * x(0) + 25.0 * x(1) * x(1) - 7.0;
    const double b = 25.0 * x(0) * x(0) + 5.0 * x(1) - 11.0;
    Vec y(1);
    y(0) = -6.0 * t + a * a + b * b - 1.0;
    return y;
  };
  // dh/dx1 = 10 a + 100 b x1, dh/dx2 = 100 a x2 + 10 b
  // with a = 5 x1 + 25 x2^2 - 7 and b = 25 x1^2 + 5 x2 - 11.
  p.H = [](double, const Vec& x) {
    const double a = 5.0 * x(0) + 25.0 * x(1) * x(1) - 7.0;
    const double b = 25.0 * x(0) * x(0) + 5.0 * x(1) - 11.0;
    Mat H(1, 2);
    H(0, 0) = 10.0 * a + 100.0 * b * x(0);
    H(0, 1) = 100.0 * a * x(1) + 10.0 * b;
    return H;
  };
  p.ybar = [](double) { return Vec(Vec::Zero(1)); };

  p.sigma = [](double t, const Vec& x) {
    const Vec w = x - m1_p(t);
    const Mat P = m1_P(t);
    return std::sqrt(w.dot(P * w) + 0.001) + 0.001 * w.squaredNorm();
  };
  // With w = x - p, m = w^T P w + 0.001, s = sqrt(m):
  // grad sigma = P w / s + 0.002 w,
  // hess sigma = P/s - (P w)(P w)^T / s^3 + 0.002 I.
  p.q = [](double t, const Vec& x) {
    const Vec w = x - m1_p(t);
    const Mat P = m1_P(t);
    const double s = std::sqrt(w.dot(P * w) + 0.001);
    return Vec(P * w / s + 0.002 * w);
  };
  p.Q = [](double t, const Vec& x) {
    const Vec w = x - m1_p(t);
    const Mat P = m1_P(t);
    const Vec Pw = P * w;
    const double s = std::sqrt(w.dot(Pw) + 0.001);
    return Mat(P / s - Pw * Pw.transpose() / (s * s * s) +
               0.002 * Mat::Identity(2, 2));
  };

  p.G = [](double t) {
    const double sn = std::sin(kPi * t / 10.0);
    Mat G(8, 2);
    G << 1.0, 0.0,
        -1.0, 0.0,
        0.0, 1.0,
        0.0, -1.0,
        209.0 / (100.0 * sn - 143.0), 1.0,
        sn / 2.0 + 73.0 / 75.0, 1.0,
        77.0 / (8.0 * (5.0 * sn + 7.0)), -1.0,
        15.0 * sn / 38.0 - 67.0 / 152.0, -1.0;
    return G;
  };
  p.c = [](double t) {
    const double sn = std::sin(kPi * t / 10.0);
    Vec c(8);
    c << -19.0 / 20.0,
        -19.0 / 20.0,
        -19.0 / 20.0,
        -19.0 / 20.0,
        -209.0 * (3.0 * sn - 10.0) / (10.0 * (100.0 * sn - 143.0)),
        -3.0 * sn / 10.0 - 1.0,
        -77.0 * (sn + 5.0) / (40.0 * (5.0 * sn + 7.0)),
        3.0 * sn / 10.0 - 1.0;
    return c;
  };
  return p;
}

namespace {

// Frozen randomized data behind the synthetic constructors; lambdas share it
// so copying a ProblemDef stays cheap.
struct SyntheticData {
  Mat Q;
  Mat Hc;      // constant part of H(t)
  Mat Homega;  // entrywise frequencies
  Mat Hphi;    // entrywise phases
  Vec bc, bomega, bphi;
  Vec yc, yomega, yphi;
  int d_x = 0;
  int d_y = 0;
};

}  // namespace

ProblemDef synthetic_family(int d_x, uint64_t seed, QMode mode) {
  if (d_x < 4 || d_x % 2 != 0) {
    throw DimensionMismatch("synthetic_family needs even d_x >= 4");
  }
  const int d_y = 6;
  SplitMix64 rng(seed);
  auto data = std::make_shared<SyntheticData>();
  data->d_x = d_x;
  data->d_y = d_y;

  switch (mode) {
    case QMode::identity:
      data->Q = Mat::Identity(d_x, d_x);
      break;
    case QMode::diagonal: {
      data->Q = Mat::Zero(d_x, d_x);
      for (int i = 0; i < d_x; ++i) {
        data->Q(i, i) = 0.5 + 1.5 * rng.uniform();
      }
      break;
    }
    case QMode::dense_spd: {
      Mat A(d_x, d_x);
      for (int i = 0; i < d_x; ++i) {
        for (int j = 0; j < d_x; ++j) {
          A(i, j) = 2.0 * rng.uniform() - 1.0;
        }
      }
      data->Q = A.transpose() * A + Mat::Identity(d_x, d_x);
      break;
    }
  }

  data->Hc.resize(d_y, d_x);
  data->Homega.resize(d_y, d_x);
  data->Hphi.resize(d_y, d_x);
  for (int i = 0; i < d_y; ++i) {
    for (int j = 0; j < d_x; ++j) {
      data->Hc(i, j) = 2.0 * rng.uniform() - 1.0;
      data->Homega(i, j) = 1.0 + 2.0 * rng.uniform();
      data->Hphi(i, j) = 6.25 * rng.uniform();
    }
  }
  data->bc.resize(d_y);
  data->bomega.resize(d_y);
  data->bphi.resize(d_y);
  data->yc.resize(d_y);
  data->yomega.resize(d_y);
  data->yphi.resize(d_y);
  for (int i = 0; i < d_y; ++i) {
    data->bc(i) = 2.0 * rng.uniform() - 1.0;
    data->bomega(i) = 1.0 + 2.0 * rng.uniform();
    data->bphi(i) = 6.25 * rng.uniform();
    data->yc(i) = 2.0 * rng.uniform() - 1.0;
    data->yomega(i) = 1.0 + 2.0 * rng.uniform();
    data->yphi(i) = 6.25 * rng.uniform();
  }

  ProblemDef p;
  p.d_x = d_x;
  p.d_y = d_y;
  p.d_c = 2 * d_x;
  p.diagonal_q = mode != QMode::dense_spd;

  p.f_A = [](double, const Vec& x) { return Vec(-100.0 * x); };
  p.B = [d_x](double, const Vec&) {
    return Mat(100.0 * Mat::Identity(d_x, d_x));
  };

  auto H_of = [data](double t) {
    Mat H(data->d_y, data->d_x);
    for (int i = 0; i < data->d_y; ++i) {
      for (int j = 0; j < data->d_x; ++j) {
        H(i, j) = data->Hc(i, j) +
                  0.2 * std::sin(data->Homega(i, j) * t + data->Hphi(i, j));
      }
    }
    return H;
  };
  auto b_of = [data](double t) {
    Vec b(data->d_y);
    for (int i = 0; i < data->d_y; ++i) {
      b(i) = data->bc(i) + 0.5 * std::sin(data->bomega(i) * t + data->bphi(i));
    }
    return b;
  };

  p.h = [H_of, b_of](double t, const Vec& x) {
    return Vec(H_of(t) * x + b_of(t));
  };
  p.H = [H_of](double t, const Vec&) { return H_of(t); };
  p.ybar = [data](double t) {
    Vec y(data->d_y);
    for (int i = 0; i < data->d_y; ++i) {
      y(i) = data->yc(i) + 0.5 * std::sin(data->yomega(i) * t + data->yphi(i));
    }
    return y;
  };

  p.sigma = [data](double, const Vec& x) { return 0.5 * x.dot(data->Q * x); };
  p.q = [data](double, const Vec& x) { return Vec(data->Q * x); };
  p.Q = [data](double, const Vec&) { return data->Q; };

  Mat G(2 * d_x, d_x);
  G.topRows(d_x) = Mat::Identity(d_x, d_x);
  G.bottomRows(d_x) = -Mat::Identity(d_x, d_x);
  p.G = [G](double) { return G; };
  p.c = [d_x](double) { return Vec(Vec::Constant(2 * d_x, -1.0)); };
  return p;
}

namespace {

struct PortfolioData {
  Vec pc;      // baseline expected returns
  Vec pamp;    // seasonal amplitudes
  Mat Q0, Q1;  // constant and oscillating parts of the risk matrix
  int d_x = 0;
};

Vec portfolio_returns(const std::shared_ptr<const PortfolioData>& d,
                      double t) {
  Vec r(d->d_x);
  for (int i = 0; i < d->d_x; ++i) {
    r(i) = d->pc(i) + d->pamp(i) * std::sin(2.0 * kPi * t / 10.0);
  }
  return r;
}

Mat portfolio_Q(const std::shared_ptr<const PortfolioData>& d, double t) {
  return d->Q0 + 0.25 * std::sin(2.0 * kPi * t / 5.0) * d->Q1;
}

}  // namespace

ProblemDef portfolio_synthetic(int d_x, uint64_t seed) {
  if (d_x < 4) {
    throw DimensionMismatch("portfolio_synthetic needs d_x >= 4");
  }
  SplitMix64 rng(seed);
  auto data = std::make_shared<PortfolioData>();
  data->d_x = d_x;
  data->pc.resize(d_x);
  data->pamp.resize(d_x);
  for (int i = 0; i < d_x; ++i) {
    data->pc(i) = -0.01 + 0.025 * rng.uniform();
    data->pamp(i) = 0.02 + 0.02 * rng.uniform();
  }
  Mat A(d_x, d_x), C(d_x, d_x);
  for (int i = 0; i < d_x; ++i) {
    for (int j = 0; j < d_x; ++j) A(i, j) = 2.0 * rng.uniform() - 1.0;
  }
  for (int i = 0; i < d_x; ++i) {
    for (int j = 0; j < d_x; ++j) C(i, j) = 2.0 * rng.uniform() - 1.0;
  }
  // Q0 - 0.25 Q1 stays positive definite: Q0 >= I while the largest
  // eigenvalue of Q1 = C^T C / d_x is well below 4 for entries in [-1, 1].
  data->Q0 = A.transpose() * A / static_cast<double>(d_x) +
             Mat::Identity(d_x, d_x);
  data->Q1 = C.transpose() * C / static_cast<double>(d_x);

  std::shared_ptr<const PortfolioData> cdata = data;
  ProblemDef p;
  p.d_x = d_x;
  p.d_y = 2;
  p.d_c = 2 * d_x;

  p.f_A = [](double, const Vec& x) { return Vec(-100.0 * x); };
  p.B = [d_x](double, const Vec&) {
    return Mat(100.0 * Mat::Identity(d_x, d_x));
  };

  p.h = [cdata](double t, const Vec& x) {
    Vec y(2);
    y(0) = portfolio_returns(cdata, t).dot(x);
    y(1) = x.sum();
    return y;
  };
  p.H = [cdata, d_x](double t, const Vec&) {
    Mat H(2, d_x);
    H.row(0) = portfolio_returns(cdata, t).transpose();
    H.row(1) = Vec::Ones(d_x).transpose();
    return H;
  };
  // Target the mean of the positive expected returns at full allocation;
  // with no positive return the target portfolio is empty.
  p.ybar = [cdata](double t) {
    const Vec r = portfolio_returns(cdata, t);
    double sum = 0.0;
    int count = 0;
    for (int i = 0; i < r.size(); ++i) {
      if (r(i) > 0.0) {
        sum += r(i);
        ++count;
      }
    }
    Vec y(2);
    if (count == 0) {
      y << 0.0, 0.0;
    } else {
      y << sum / static_cast<double>(count), 1.0;
    }
    return y;
  };

  p.sigma = [cdata](double t, const Vec& x) {
    return x.dot(portfolio_Q(cdata, t) * x);
  };
  p.q = [cdata](double t, const Vec& x) {
    return Vec(2.0 * portfolio_Q(cdata, t) * x);
  };
  p.Q = [cdata](double t, const Vec&) {
    return Mat(2.0 * portfolio_Q(cdata, t));
  };

  Mat G(2 * d_x, d_x);
  G.topRows(d_x) = Mat::Identity(d_x, d_x);
  G.bottomRows(d_x) = -Mat::Identity(d_x, d_x);
  Vec c(2 * d_x);
  c.head(d_x) = Vec::Constant(d_x, -1.0);
  c.tail(d_x) = Vec::Zero(d_x);
  p.G = [G](double) { return G; };
  p.c = [c](double) { return c; };
  return p;
}

SclqrModel sclqr_paper() {
  SclqrModel m;
  m.Q_xx.resize(3, 3);
  m.Q_xx << 1.04, -0.01695, 0.2303,
      -0.01695, 0.7284, 0.2473,
      0.2303, 0.2473, 1.898;
  m.Q_uu.resize(3, 3);
  m.Q_uu << 7.331, 0.1877, 2.067,
      0.1877, 2.328, -0.6628,
      2.067, -0.6628, 3.956;
  m.Q_uu *= 1e-5;
  m.A.resize(3, 3);
  m.A << 0.1086, -0.2032, -0.02073,
      0.1763, 0.6136, 0.5626,
      -0.5076, -0.3963, -0.1000;
  m.B.resize(3, 3);
  m.B << 0.6665, 0.9614, -0.8088,
      0.3533, 0.1329, -0.875,
      -0.8267, -0.5846, -0.9484;
  m.H.resize(1, 3);
  m.H << -0.3317, 0.1136, 0.6919;
  m.K_x = 500.0;
  return m;
}

}  // namespace oed
