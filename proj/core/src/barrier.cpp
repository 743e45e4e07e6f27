#include "oed/barrier.hpp"

#include <cmath>
#include <cstring>
#include <mutex>
#include <string>
#include <vector>

namespace oed {

double beta_ref(double s, double p1, double p2) {
  // softplus(p1 s) scaled by p2/p1, stabilized: log(1+e^z) = max(z,0) + log1p(e^{-|z|})
  const double z = p1 * s;
  const double stable = std::fmax(z, 0.0) + std::log1p(std::exp(-std::fabs(z)));
  return (p2 / p1) * stable;
}

double xi_limit(double s, double p2) { return s > 0.0 ? p2 * p2 * s : 0.0; }

double Xi_limit(double s, double p2) {
  if (s > 0.0) return p2 * p2;
  if (s == 0.0) return 0.25 * (std::log(2.0) + 1.0) * p2 * p2;
  return 0.0;
}

namespace {

double max_row_sum_norm(const Mat& M) {
  return M.cwiseAbs().rowwise().sum().maxCoeff();
}

struct P2CacheEntry {
  std::vector<unsigned char> key;
  double value = 0.0;
};

// Serialize (Q, Gbar, K_RQ) bytewise; bitwise-equal inputs hit the cache.
std::vector<unsigned char> p2_cache_key(const Mat& Q, const Mat& Gbar,
                                        double K_RQ) {
  std::vector<unsigned char> key;
  auto put = [&key](const void* p, size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    key.insert(key.end(), b, b + n);
  };
  const Eigen::Index qr = Q.rows(), qc = Q.cols(), gr = Gbar.rows(),
                     gc = Gbar.cols();
  put(&qr, sizeof qr);
  put(&qc, sizeof qc);
  put(&gr, sizeof gr);
  put(&gc, sizeof gc);
  put(&K_RQ, sizeof K_RQ);
  if (Q.size() > 0) put(Q.data(), sizeof(double) * Q.size());
  if (Gbar.size() > 0) put(Gbar.data(), sizeof(double) * Gbar.size());
  return key;
}

}  // namespace

double design_p2(const Mat& Q, const Mat& Gbar, double K_RQ) {
  if (Gbar.rows() == 0) throw EmptyActiveSet();
  if (Gbar.cols() != Q.cols() || Q.rows() != Q.cols()) {
    throw DimensionMismatch("design_p2 got Q " + std::to_string(Q.rows()) +
                            "x" + std::to_string(Q.cols()) + ", Gbar " +
                            std::to_string(Gbar.rows()) + "x" +
                            std::to_string(Gbar.cols()));
  }

  static std::mutex cache_mutex;
  static P2CacheEntry cache;
  const auto key = p2_cache_key(Q, Gbar, K_RQ);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    if (cache.key == key) return cache.value;
  }

  const Mat GtG = Gbar.transpose() * Gbar;
  const double denom = max_row_sum_norm(GtG);
  if (!(denom > 0.0)) throw EmptyActiveSet();
  const double p2 = std::sqrt((K_RQ - 1.0) * max_row_sum_norm(Q) / denom);

  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.key = key;
    cache.value = p2;
  }
  return p2;
}

ActiveSet active_set(const Mat& G, const Vec& c, const Vec& x) {
  if (G.rows() != c.size()) {
    throw DimensionMismatch("active_set G rows " + std::to_string(G.rows()) +
                            " vs c length " + std::to_string(c.size()));
  }
  if (G.cols() != x.size()) {
    throw DimensionMismatch("active_set G cols " + std::to_string(G.cols()) +
                            " vs x length " + std::to_string(x.size()));
  }
  const Vec g = G * x + c;
  ActiveSet A;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (g(i) > 0.0) A.indices.push_back(static_cast<int>(i));
  }
  const Eigen::Index m = static_cast<Eigen::Index>(A.indices.size());
  A.Gbar.resize(m, G.cols());
  A.gbar.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    A.Gbar.row(k) = G.row(A.indices[static_cast<size_t>(k)]);
    A.gbar(k) = g(A.indices[static_cast<size_t>(k)]);
  }
  return A;
}

}  // namespace oed
