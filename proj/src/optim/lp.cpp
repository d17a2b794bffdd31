//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "aerobench/optim/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace aerobench::optim {
namespace {
  constexpr double kPivotTol = 1e-11;

  // Tableau over equality-form rows T[:, :n] z = T[:, n], z >= 0, with the
  // objective row stored separately as reduced costs.
  struct Tableau {
    Mat T;
    std::vector<int> basis;
    int n;  // structural + slack + artificial columns

    void pivot(int r, int col) {
      T.row(r) /= T(r, col);
      for (int i = 0; i < T.rows(); ++i) {
        if (i != r && T(i, col) != 0.0)
          T.row(i) -= T(i, col) * T.row(r);
      }
      basis[r] = col;
    }

    // Minimizes cost'z over the current basis; `allowed[j]` gates entering
    // columns. Returns false when unbounded.
    bool optimize(const Vec &cost, const std::vector<bool> &allowed) {
      const int m = static_cast<int>(T.rows());
      for (int iter = 0; iter < 50 * (m + n) + 1000; ++iter) {
        // Reduced costs r_j = c_j - c_B' B^-1 a_j.
        int enter = -1;
        for (int j = 0; j < n; ++j) {
          if (!allowed[j])
            continue;
          double rj = cost[j];
          for (int i = 0; i < m; ++i)
            rj -= cost[basis[i]] * T(i, j);
          if (rj < -1e-10) {
            enter = j;
            break;
          }
        }
        if (enter < 0)
          return true;
        int leave = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
          if (T(i, enter) > kPivotTol) {
            const double ratio = T(i, n) / T(i, enter);
            if (ratio < best - 1e-14
                || (std::abs(ratio - best) <= 1e-14 && leave >= 0
                    && basis[i] < basis[leave])) {
              best = ratio;
              leave = i;
            }
          }
        }
        if (leave < 0)
          return false;
        pivot(leave, enter);
      }
      return true;
    }
  };
}  // namespace

LpResult solve_lp(const Vec &c, const Mat &A, const Vec &b, const Vec &lo,
                  const Vec &hi) {
  const int nv = static_cast<int>(c.size());
  require(A.cols() == nv && A.rows() == b.size(), "solve_lp: shape mismatch");
  require(lo.size() == nv && hi.size() == nv, "solve_lp: bound size mismatch");
  require((lo.array() <= hi.array()).all() && lo.allFinite() && hi.allFinite(),
          "solve_lp: bounds must be finite with lo <= hi");

  // Shift z = x - lo so z >= 0; upper bounds become rows z <= hi - lo.
  const int mg = static_cast<int>(A.rows());
  const int m = mg + nv;
  Mat rows(m, nv);
  Vec rhs(m);
  rows.topRows(mg) = A;
  rhs.head(mg) = b - A * lo;
  rows.bottomRows(nv).setIdentity();
  rhs.tail(nv) = hi - lo;

  // Columns: nv structural, m slacks, m artificials.
  Tableau tab;
  tab.n = nv + 2 * m;
  tab.T = Mat::Zero(m, tab.n + 1);
  tab.basis.assign(m, 0);
  for (int i = 0; i < m; ++i) {
    const double sgn = rhs[i] < 0.0 ? -1.0 : 1.0;
    tab.T.row(i).head(nv) = sgn * rows.row(i);
    tab.T(i, nv + i) = sgn;
    tab.T(i, nv + m + i) = 1.0;
    tab.T(i, tab.n) = sgn * rhs[i];
    tab.basis[i] = nv + m + i;
  }

  std::vector<bool> allowed(tab.n, true);
  Vec phase1 = Vec::Zero(tab.n);
  phase1.tail(m).setOnes();
  tab.optimize(phase1, allowed);

  double infeas = 0.0;
  for (int i = 0; i < m; ++i)
    if (tab.basis[i] >= nv + m)
      infeas += tab.T(i, tab.n);
  LpResult res;
  if (infeas > 1e-9 * (1.0 + rhs.cwiseAbs().maxCoeff())) {
    res.status = LpStatus::infeasible;
    return res;
  }

  // Drive remaining (zero-level) artificials out of the basis.
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] < nv + m)
      continue;
    for (int j = 0; j < nv + m; ++j) {
      if (std::abs(tab.T(i, j)) > kPivotTol) {
        tab.pivot(i, j);
        break;
      }
    }
  }
  for (int j = nv + m; j < tab.n; ++j)
    allowed[j] = false;

  Vec phase2 = Vec::Zero(tab.n);
  phase2.head(nv) = c;
  if (!tab.optimize(phase2, allowed)) {
    res.status = LpStatus::unbounded;
    return res;
  }

  Vec z = Vec::Zero(nv);
  for (int i = 0; i < m; ++i)
    if (tab.basis[i] < nv)
      z[tab.basis[i]] = tab.T(i, tab.n);
  res.status = LpStatus::optimal;
  res.x = clamp_to(lo + z, lo, hi);
  res.value = c.dot(res.x);
  return res;
}

}  // namespace aerobench::optim
