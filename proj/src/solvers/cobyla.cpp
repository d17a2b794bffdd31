//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <limits>

#include "aerobench/optim/lp.hpp"
#include "aerobench/solvers/solvers.hpp"

namespace aerobench::solvers {
namespace {
  constexpr double kInf = std::numeric_limits<double>::infinity();

  struct Vertex {
    Vec x;
    bool ok = false;
    double f = kInf;
    Vec c;
    double viol = kInf;  // banded violation used by the merit function
  };

  // Linearized violation rows: each row r gives viol_r(s) = a_r's + b_r,
  // and the violation is max(0, max_r viol_r(s)).
  struct ViolationRows {
    Mat A;
    Vec b;

    double at(const Vec &s) const {
      if (A.rows() == 0)
        return 0.0;
      return std::max(0.0, (A * s + b).maxCoeff());
    }
  };
}  // namespace

LinearModel fit_linear_model(const Mat &vertices, const Vec &values) {
  const int d = static_cast<int>(vertices.cols());
  require(vertices.rows() == d + 1 && values.size() == d + 1,
          "fit_linear_model: need d+1 vertices and values");
  Mat D(d, d);
  Vec r(d);
  for (int j = 0; j < d; ++j) {
    D.row(j) = vertices.row(j + 1) - vertices.row(0);
    r[j] = values[j + 1] - values[0];
  }
  Eigen::FullPivLU<Mat> lu(D);
  if (!lu.isInvertible())
    throw NumericalFailure("fit_linear_model: affinely dependent vertices",
                           {});
  return { values[0], lu.solve(r) };
}

RunRecord cobyla_run(const problems::Problem &problem, const Vec &x0,
                     const SolverConfig &config, EvalLedger &ledger) {
  config.validate();
  const int d = problem.dim();
  const int m = problem.num_constraints();
  require(x0.size() == d && inside_unit_box(x0),
          "cobyla_run: x0 must lie in the unit box");
  const auto &eqs = problem.equality_indices();
  std::vector<bool> is_eq(m, false);
  for (int i: eqs)
    is_eq[i] = true;

  RunRecord rec;
  rec.solver = to_string(SolverKind::cobyla);
  rec.problem = problem.catalog_id().empty() ? problem.name()
                                             : problem.catalog_id();
  Evaluator ev(problem, ledger);

  auto banded = [&](const Vec &c) {
    double v = 0.0;
    for (int i = 0; i < m; ++i)
      v = std::max(v, is_eq[i] ? std::abs(c[i]) - config.eq_band : -c[i]);
    return std::max(0.0, v);
  };
  auto evaluate = [&](const Vec &x) {
    Vertex v;
    v.x = x;
    auto r = ev.objective(x);
    if (r.ok()) {
      v.ok = true;
      v.f = r.f;
      v.c = r.c;
      v.viol = banded(r.c);
    }
    return v;
  };

  double mu = 0.0;
  auto merit = [&](const Vertex &v) {
    return v.ok ? v.f + mu * v.viol : kInf;
  };

  double rho = config.rho_init;
  std::vector<Vertex> simplex;
  int best = 0;
  auto pick_best = [&] {
    best = 0;
    for (int j = 1; j <= d; ++j) {
      const double a = merit(simplex[j]), b = merit(simplex[best]);
      if (a < b || (a == b && simplex[j].viol < simplex[best].viol))
        best = j;
    }
  };
  auto axis_point = [&](const Vec &base, int j, double step) {
    Vec x = base;
    x[j] = base[j] + step <= 1.0 ? base[j] + step : base[j] - step;
    return clamp_unit(x);
  };
  auto record_row = [&](int k) {
    const Vertex &v = simplex[best];
    RunRow row;
    row.iter = k;
    row.ledger = ledger.counts();
    row.x = v.x;
    if (v.ok) {
      row.f = v.f;
      row.mcv = problems::max_constraint_violation(problem, v.c);
    } else {
      row.status = "failed";
    }
    if (ev.incumbent())
      row.best_feasible = ev.incumbent()->f;
    rec.rows.push_back(row);
    ledger.snapshot();
    IterateState it;
    it.k = k;
    it.x = v.x;
    it.f = v.f;
    rec.iterates.push_back(std::move(it));
  };

  // Offsets of the other vertices from the best one, as rows.
  auto offsets = [&] {
    Mat D(d, d);
    int r = 0;
    for (int j = 0; j <= d; ++j)
      if (j != best)
        D.row(r++) = (simplex[j].x - simplex[best].x).transpose();
    return D;
  };
  auto other_index = [&](int r) { return r < best ? r : r + 1; };

  try {
    simplex.push_back(evaluate(x0));
    for (int j = 0; j < d; ++j)
      simplex.push_back(evaluate(axis_point(x0, j, rho)));
    pick_best();
    record_row(0);

    double last_merit_drop = kInf;
    for (int k = 1;; ++k) {
      if (k > config.maxiter) {
        rec.termination = "maxiter";
        break;
      }
      pick_best();
      const int b0 = best;
      const Vertex &v0 = simplex[b0];

      // Geometry: a vertex far outside the current radius, or a
      // degenerate simplex, is replaced by an axis step from the best.
      Mat D = offsets();
      Eigen::FullPivLU<Mat> lu(D);
      int far = -1;
      double far_dist = 2.0 * rho;
      for (int r = 0; r < d; ++r) {
        const double dist = D.row(r).cwiseAbs().maxCoeff();
        if (dist > far_dist) {
          far_dist = dist;
          far = r;
        }
      }
      const bool degenerate =
          !lu.isInvertible()
          || std::abs(lu.determinant()) < 1e-14 * std::pow(rho, d);
      bool any_failed = false;
      for (const auto &v: simplex)
        any_failed = any_failed || !v.ok;
      if (degenerate || any_failed) {
        // Rebuild the whole simplex around the best vertex.
        const Vertex keep = v0;
        std::vector<Vertex> fresh{ keep };
        for (int j = 0; j < d; ++j)
          fresh.push_back(evaluate(axis_point(keep.x, j, rho)));
        simplex = std::move(fresh);
        pick_best();
        record_row(k);
        continue;
      }
      if (far >= 0) {
        const Mat Dinv = lu.inverse();
        int axis = 0;
        Dinv.col(far).cwiseAbs().maxCoeff(&axis);
        simplex[other_index(far)] = evaluate(axis_point(v0.x, axis, rho));
        pick_best();
        record_row(k);
        continue;
      }

      // Linear models about the best vertex.
      Vec df(d);
      Mat dc(d, m);
      for (int r = 0; r < d; ++r) {
        const Vertex &vr = simplex[other_index(r)];
        df[r] = vr.f - v0.f;
        for (int i = 0; i < m; ++i)
          dc(r, i) = vr.c[i] - v0.c[i];
      }
      const Vec g = lu.solve(df);
      const Mat G = m > 0 ? Mat(lu.solve(dc)) : Mat(d, 0);

      // While any vertex violates the constraints, the penalty must at
      // least price a unit of violation like the objective change over a
      // unit of constraint change; otherwise a zero penalty lets the merit
      // ignore infeasibility whenever the linear models are optimistic.
      if (m > 0) {
        bool infeasible = false;
        for (const auto &v: simplex)
          infeasible = infeasible || v.viol > 0.0;
        double cslope = 0.0;
        for (int i = 0; i < m; ++i)
          cslope = std::max(cslope, G.col(i).cwiseAbs().maxCoeff());
        if (infeasible && cslope > 0.0) {
          const double floor = 2.0 * g.cwiseAbs().maxCoeff() / cslope;
          if (floor > mu) {
            mu = floor;
            pick_best();
            if (best != b0)
              continue;
          }
        }
      }

      ViolationRows rows;
      {
        const int nr = m + static_cast<int>(eqs.size());
        rows.A.resize(nr, d);
        rows.b.resize(nr);
        int r = 0;
        for (int i = 0; i < m; ++i) {
          rows.A.row(r) = -G.col(i).transpose();
          rows.b[r++] = -v0.c[i] - (is_eq[i] ? config.eq_band : 0.0);
          if (is_eq[i]) {
            rows.A.row(r) = G.col(i).transpose();
            rows.b[r++] = v0.c[i] - config.eq_band;
          }
        }
      }

      Vec lo = (-v0.x.array()).max(-rho).matrix();
      Vec hi = (1.0 - v0.x.array()).min(rho).matrix();
      Vec step = Vec::Zero(d);
      double t_star = 0.0;
      if (rows.A.rows() > 0) {
        // Least achievable linearized violation, then the best objective
        // subject to not exceeding it.
        const int nr = static_cast<int>(rows.A.rows());
        Vec c1 = Vec::Zero(d + 1);
        c1[d] = 1.0;
        Mat A1(nr, d + 1);
        A1.leftCols(d) = rows.A;
        A1.col(d).setConstant(-1.0);
        Vec lo1(d + 1), hi1(d + 1);
        lo1.head(d) = lo;
        hi1.head(d) = hi;
        lo1[d] = 0.0;
        hi1[d] = std::max(0.0, rows.b.maxCoeff())
                 + rho * rows.A.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
        auto p1 = optim::solve_lp(c1, A1, -rows.b, lo1, hi1);
        if (p1.status == optim::LpStatus::optimal)
          t_star = p1.x[d];
      }
      {
        const Vec rhs = Vec::Constant(rows.A.rows(),
                                      t_star + 1e-12 * (1.0 + t_star))
                        - rows.b;
        auto p2 = optim::solve_lp(g, rows.A, rhs, lo, hi);
        if (p2.status == optim::LpStatus::optimal)
          step = p2.x;
      }

      const double viol_lin0 = rows.at(Vec::Zero(d));
      const double viol_lins = rows.at(step);
      const double df_pred = -g.dot(step);
      if (viol_lins < viol_lin0 - 1e-14) {
        // Penalty large enough that the step predicts a merit decrease.
        const double needed = 2.0 * std::max(0.0, -df_pred)
                              / (viol_lin0 - viol_lins);
        if (needed > mu) {
          mu = std::max(needed, 2.0 * mu);
          pick_best();
          if (best != b0)
            continue;
        }
      }
      const double pred = df_pred + mu * (viol_lin0 - viol_lins);
      const double step_len = step.cwiseAbs().maxCoeff();

      if (step_len < 0.1 * rho || pred <= 0.0) {
        if (rho <= config.rho_final) {
          rec.termination = "rho";
          break;
        }
        rho = std::max(0.5 * rho, config.rho_final);
        record_row(k);
        continue;
      }

      const double phi0 = merit(v0);
      Vertex trial = evaluate(clamp_unit(v0.x + step));
      const double phit = merit(trial);
      const double ratio = (phi0 - phit) / pred;

      // Barycentric weights of the trial point decide which vertex it
      // replaces: the largest weight keeps the volume largest.
      const Vec lam = D.transpose().fullPivLu().solve(Vec(trial.x - v0.x));
      int rep = 0;
      lam.cwiseAbs().maxCoeff(&rep);
      const bool improved = trial.ok && phit < phi0;
      if (improved || std::abs(lam[rep]) > 1.0)
        simplex[other_index(rep)] = trial;
      if (improved) {
        last_merit_drop = phi0 - phit;
        if (last_merit_drop < config.tol && pred < config.tol) {
          pick_best();
          record_row(k);
          rec.termination = "tol";
          break;
        }
      }
      if (ratio < 0.1) {
        if (rho <= config.rho_final) {
          pick_best();
          record_row(k);
          rec.termination = "rho";
          break;
        }
        rho = std::max(0.5 * rho, config.rho_final);
      }
      pick_best();
      record_row(k);
    }
  } catch (const BudgetExhausted &) {
    rec.termination = "budget";
    if (!simplex.empty()) {
      while (static_cast<int>(simplex.size()) < d + 1)
        simplex.push_back(Vertex{});
      pick_best();
      if (rec.rows.empty() || rec.rows.back().ledger != ledger.counts())
        record_row(rec.rows.empty() ? 0 : rec.rows.back().iter + 1);
    }
  }
  rec.message = "penalty " + std::to_string(mu) + ", radius "
                + std::to_string(rho);
  rec.final_ledger = ledger.counts();
  rec.evaluations = ev.take_log();
  return rec;
}

}  // namespace aerobench::solvers
