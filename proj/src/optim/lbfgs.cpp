//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "aerobench/optim/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aerobench::optim {

Vec two_loop(const std::vector<Vec> &s, const std::vector<Vec> &y,
             const Vec &q_in, double gamma) {
  const int m = static_cast<int>(s.size());
  Vec q = q_in;
  std::vector<double> a(m), rho(m);
  for (int i = m - 1; i >= 0; --i) {
    rho[i] = 1.0 / y[i].dot(s[i]);
    a[i] = rho[i] * s[i].dot(q);
    q -= a[i] * y[i];
  }
  Vec r = gamma * q;
  for (int i = 0; i < m; ++i) {
    const double b = rho[i] * y[i].dot(r);
    r += (a[i] - b) * s[i];
  }
  return r;
}

bool CurvatureMemory::push(const Vec &s, const Vec &y) {
  const double sy = s.dot(y);
  if (!(sy > 1e-12 * s.norm() * y.norm()) || !(sy > 0.0))
    return false;
  if (static_cast<int>(s_.size()) == m_) {
    s_.erase(s_.begin());
    y_.erase(y_.begin());
  }
  s_.push_back(s);
  y_.push_back(y);
  return true;
}

double CurvatureMemory::gamma() const {
  if (s_.empty())
    return 1.0;
  return s_.back().dot(y_.back()) / y_.back().squaredNorm();
}

Vec CurvatureMemory::apply(const Vec &q) const {
  return two_loop(s_, y_, q, gamma());
}

Vec project(const Vec &x, const Vec &lo, const Vec &hi) {
  return clamp_to(x, lo, hi);
}

Vec projected_gradient(const Vec &x, const Vec &g, const Vec &lo,
                       const Vec &hi) {
  return project(x - g, lo, hi) - x;
}

LbfgsResult minimize_box(const LbfgsCallbacks &fn, Vec x0, const Vec &lo,
                         const Vec &hi, const LbfgsOptions &opt) {
  const int d = static_cast<int>(x0.size());
  LbfgsResult res;
  Vec x = project(x0, lo, hi);
  double f = fn.value(x);
  if (!std::isfinite(f)) {
    res.x = x;
    res.f = f;
    res.status = "initial-evaluation-failure";
    return res;
  }
  auto g_opt = fn.gradient(x);
  if (!g_opt) {
    res.x = x;
    res.f = f;
    res.status = "gradient-failure";
    return res;
  }
  Vec g = *g_opt;

  CurvatureMemory mem(opt.memory);
  auto finish = [&](std::string status, int k) {
    res.x = x;
    res.f = f;
    res.g = g;
    res.iterations = k;
    res.status = std::move(status);
    return res;
  };

  for (int k = 0;; ++k) {
    const double pg = projected_gradient(x, g, lo, hi).cwiseAbs().maxCoeff();
    if (fn.on_iterate)
      fn.on_iterate({ k, x, f, g, 0.0, Vec::Zero(d), pg });
    if (pg < opt.gtol)
      return finish("gtol", k);
    if (k >= opt.maxiter)
      return finish("maxiter", k);

    // Coordinates pinned at a bound with the gradient pushing outward are
    // held fixed; the quasi-Newton direction acts on the rest.
    std::vector<bool> fixed(d);
    Vec gf = g;
    for (int i = 0; i < d; ++i) {
      fixed[i] = (x[i] <= lo[i] && g[i] > 0.0) || (x[i] >= hi[i] && g[i] < 0.0);
      if (fixed[i])
        gf[i] = 0.0;
    }
    Vec p = -mem.apply(gf);
    for (int i = 0; i < d; ++i)
      if (fixed[i])
        p[i] = 0.0;
    if (!(gf.dot(p) < 0.0)) {
      mem.clear();
      p = -gf;
    }
    if (mem.size() == 0) {
      // Without curvature information, keep the first trial step inside a
      // box-sized neighbourhood.
      const double span = (hi - lo).maxCoeff();
      const double pn = p.cwiseAbs().maxCoeff();
      if (pn > 0.0 && std::isfinite(span))
        p *= std::min(1.0, 0.25 * span / pn);
    }

    double alpha = 1.0;
    bool accepted = false;
    Vec x_new;
    double f_new = 0.0;
    for (int t = 0; t < opt.max_trials; ++t, alpha *= opt.backtrack) {
      x_new = project(x + alpha * p, lo, hi);
      const double decrease = g.dot(x_new - x);
      if (!(decrease < 0.0))
        continue;
      f_new = fn.value(x_new);
      if (std::isfinite(f_new) && f_new <= f + opt.c1 * decrease) {
        accepted = true;
        break;
      }
    }
    if (!accepted)
      return finish("line-search-failure", k);

    if (fn.on_step)
      fn.on_step({ k, x, f, g, alpha, (x_new - x) / alpha, pg });

    auto g_new = fn.gradient(x_new);
    const double f_old = f;
    const Vec x_old = x;
    x = x_new;
    f = f_new;
    if (!g_new) {
      // Keep the accepted point; without a gradient there is no way on.
      res.x = x;
      res.f = f;
      res.g = g;
      res.iterations = k + 1;
      res.status = "gradient-failure";
      return res;
    }
    mem.push(x - x_old, *g_new - g);
    g = *g_new;

    if (std::abs(f_old - f) / std::max(std::abs(f), 1.0) < opt.ftol) {
      if (fn.on_iterate)
        fn.on_iterate({ k + 1, x, f, g, 0.0, Vec::Zero(d),
                        projected_gradient(x, g, lo, hi).cwiseAbs().maxCoeff() });
      return finish("ftol", k + 1);
    }
  }
}

}  // namespace aerobench::optim
