//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Brute-force reference computations used as test oracles. They share no
// code with the library beyond the Eigen types.

#ifndef AEROBENCH_TESTS_ORACLES_HPP
#define AEROBENCH_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline double se_kernel(const Vec &a, const Vec &b, const Vec &ell, double sf2) {
  double r2 = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j)
    r2 += (a[j] - b[j]) * (a[j] - b[j]) / (ell[j] * ell[j]);
  return sf2 * std::exp(-0.5 * r2);
}

inline double matern52_kernel(const Vec &a, const Vec &b, const Vec &ell,
                              double sf2) {
  double r2 = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j)
    r2 += (a[j] - b[j]) * (a[j] - b[j]) / (ell[j] * ell[j]);
  const double r = std::sqrt(r2);
  return sf2 * (1.0 + std::sqrt(5.0) * r + 5.0 / 3.0 * r2)
         * std::exp(-std::sqrt(5.0) * r);
}

/// Posterior moments from the explicitly inverted covariance matrix.
template <class Kernel>
void dense_posterior(Kernel k, const Mat &X, const Vec &y, double noise,
                     const Vec &x, double &mean, double &var) {
  const Eigen::Index n = X.rows();
  Mat K(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      K(i, j) = k(X.row(i).transpose(), X.row(j).transpose());
  K += noise * Mat::Identity(n, n);
  const Mat Kinv = K.fullPivLu().inverse();
  Vec ks(n);
  for (Eigen::Index i = 0; i < n; ++i)
    ks[i] = k(X.row(i).transpose(), x);
  mean = ks.dot(Kinv * y);
  var = k(x, x) - ks.dot(Kinv * ks);
}

struct McImprovement {
  double ei = 0.0, pi = 0.0;
};

/// Monte Carlo estimate of E[max(0, xi - Y)] and P(Y < xi), Y ~ N(mu, s^2).
inline McImprovement monte_carlo_improvement(const std::vector<double> &z,
                                             double mu, double sigma,
                                             double xi) {
  McImprovement out;
  for (double zi: z) {
    const double y = mu + sigma * zi;
    out.ei += std::max(0.0, xi - y);
    out.pi += y < xi ? 1.0 : 0.0;
  }
  out.ei /= static_cast<double>(z.size());
  out.pi /= static_cast<double>(z.size());
  return out;
}

inline std::vector<double> normal_draws(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<double> z(n);
  for (auto &v: z)
    v = nd(gen);
  return z;
}

/// Inverse-Hessian approximation by explicit dense BFGS updates from
/// H0 = gamma I, applied to q.
inline Vec dense_bfgs_apply(const std::vector<Vec> &s, const std::vector<Vec> &y,
                            const Vec &q, double gamma) {
  const Eigen::Index d = q.size();
  Mat H = gamma * Mat::Identity(d, d);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double rho = 1.0 / y[i].dot(s[i]);
    const Mat V = Mat::Identity(d, d) - rho * y[i] * s[i].transpose();
    H = V.transpose() * H * V + rho * s[i] * s[i].transpose();
  }
  return H * q;
}

/// Maximum of a function on [0, 1] sampled on a uniform grid.
template <class Fn> double grid_max(Fn &&fn, int n) {
  double best = -1e300;
  for (int i = 0; i <= n; ++i)
    best = std::max(best, fn(static_cast<double>(i) / n));
  return best;
}

/// Hicks-Henne bump sin(pi s^(ln 0.5 / ln peak))^t.
inline double bump(double s, double peak, double t) {
  if (s <= 0.0 || s >= 1.0)
    return 0.0;
  return std::pow(std::sin(M_PI * std::pow(s, std::log(0.5) / std::log(peak))), t);
}

/// Minimum of a linear program over the vertices of a small polytope,
/// found by enumerating every choice of d active constraints.
inline bool lp_by_enumeration(const Vec &c, const Mat &A, const Vec &b,
                              const Vec &lo, const Vec &hi, double &best) {
  const Eigen::Index d = c.size();
  Mat G(A.rows() + 2 * d, d);
  Vec h(A.rows() + 2 * d);
  G.topRows(A.rows()) = A;
  h.head(A.rows()) = b;
  for (Eigen::Index j = 0; j < d; ++j) {
    G.row(A.rows() + 2 * j).setZero();
    G(A.rows() + 2 * j, j) = 1.0;
    h[A.rows() + 2 * j] = hi[j];
    G.row(A.rows() + 2 * j + 1).setZero();
    G(A.rows() + 2 * j + 1, j) = -1.0;
    h[A.rows() + 2 * j + 1] = -lo[j];
  }
  const int m = static_cast<int>(G.rows());
  std::vector<int> pick(d);
  bool found = false;
  best = 1e300;
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == d) {
      Mat M(d, d);
      Vec r(d);
      for (Eigen::Index k = 0; k < d; ++k) {
        M.row(k) = G.row(pick[k]);
        r[k] = h[pick[k]];
      }
      Eigen::FullPivLU<Mat> lu(M);
      if (!lu.isInvertible())
        return;
      const Vec x = lu.solve(r);
      if (((G * x - h).array() <= 1e-9).all()) {
        found = true;
        best = std::min(best, c.dot(x));
      }
      return;
    }
    for (int i = start; i < m; ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return found;
}

}  // namespace oracle

#endif  // AEROBENCH_TESTS_ORACLES_HPP
