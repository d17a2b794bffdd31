//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "aerobench/solvers/solvers.hpp"

namespace aerobench::solvers {
namespace {
  constexpr double kInf = std::numeric_limits<double>::infinity();

  double simplex_volume(const std::vector<Vec> &v) {
    const int d = static_cast<int>(v.size()) - 1;
    Mat D(d, d);
    for (int j = 0; j < d; ++j)
      D.col(j) = v[j + 1] - v[0];
    double fact = 1.0;
    for (int k = 2; k <= d; ++k)
      fact *= k;
    return std::abs(D.determinant()) / fact;
  }
}  // namespace

const char *to_string(SolverKind k) {
  switch (k) {
  case SolverKind::nelder_mead:
    return "nelder-mead";
  case SolverKind::cobyla:
    return "cobyla";
  case SolverKind::lbfgsb:
    return "lbfgsb";
  }
  return "?";
}

SolverKind solver_kind_from_string(const std::string &s) {
  if (s == "nelder-mead" || s == "nm")
    return SolverKind::nelder_mead;
  if (s == "cobyla")
    return SolverKind::cobyla;
  if (s == "lbfgsb" || s == "l-bfgs-b" || s == "quasi-newton")
    return SolverKind::lbfgsb;
  throw std::invalid_argument("unknown solver '" + s + "'");
}

void SolverConfig::validate() const {
  require(gtol > 0.0 && fatol > 0.0 && ftol > 0.0 && tol > 0.0,
          "solver tolerances must be positive");
  require(maxiter >= 1, "maxiter must be at least 1");
  require(memory >= 1, "quasi-Newton memory must be at least 1");
  require(rho_init > 0.0 && rho_final > 0.0 && rho_final <= rho_init,
          "trust radii must satisfy 0 < rho_final <= rho_init");
  require(eq_band >= 0.0, "equality band must be non-negative");
}

RunRecord nelder_mead(const problems::Problem &problem, const Vec &x0,
                      const SolverConfig &config, EvalLedger &ledger) {
  config.validate();
  require(!problem.constrained(),
          "nelder_mead: the simplex method handles unconstrained problems");
  require(config.initial_step > 0.0,
          "nelder_mead: degenerate initial simplex (zero edge)");
  const int d = problem.dim();
  require(x0.size() == d && inside_unit_box(x0),
          "nelder_mead: x0 must lie in the unit box");

  RunRecord rec;
  rec.solver = to_string(SolverKind::nelder_mead);
  rec.problem = problem.catalog_id().empty() ? problem.name()
                                             : problem.catalog_id();
  Evaluator ev(problem, ledger);
  auto eval = [&](const Vec &x) {
    auto r = ev.objective(x);
    return r.ok() ? r.f : kInf;
  };

  std::vector<Vec> v(d + 1, x0);
  for (int j = 0; j < d; ++j) {
    const double h = config.initial_step;
    v[j + 1][j] = x0[j] + h <= 1.0 ? x0[j] + h : x0[j] - h;
  }
  std::vector<double> fv(d + 1, kInf);
  std::vector<int> idx(d + 1);

  auto record_row = [&](int k) {
    const Vec &xb = v[idx[0]];
    RunRow row;
    row.iter = k;
    row.ledger = ledger.counts();
    row.x = xb;
    if (std::isfinite(fv[idx[0]])) {
      row.f = fv[idx[0]];
      row.mcv = 0.0;
    } else {
      row.status = "failed";
    }
    if (ev.incumbent())
      row.best_feasible = ev.incumbent()->f;
    rec.rows.push_back(row);
    ledger.snapshot();
    IterateState it;
    it.k = k;
    it.x = xb;
    it.f = fv[idx[0]];
    it.simplex_volume = simplex_volume(v);
    rec.iterates.push_back(std::move(it));
  };
  auto order = [&] {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return fv[a] < fv[b]; });
  };

  try {
    for (int j = 0; j <= d; ++j)
      fv[j] = eval(v[j]);
    order();
    record_row(0);
    for (int k = 1;; ++k) {
      const double spread = fv[idx[d]] - fv[idx[0]];
      if (std::isfinite(spread) && spread < config.fatol) {
        rec.termination = "fatol";
        break;
      }
      if (k > config.maxiter) {
        rec.termination = "maxiter";
        break;
      }
      const int w = idx[d];
      Vec c = Vec::Zero(d);
      for (int i = 0; i < d; ++i)
        c += v[idx[i]];
      c /= d;

      const Vec xr = clamp_unit(c + (c - v[w]));
      const double fr = eval(xr);
      if (fr < fv[idx[0]]) {
        const Vec xe = clamp_unit(c + 2.0 * (c - v[w]));
        const double fe = eval(xe);
        if (fe < fr)
          v[w] = xe, fv[w] = fe;
        else
          v[w] = xr, fv[w] = fr;
      } else if (fr < fv[idx[d - 1]]) {
        v[w] = xr, fv[w] = fr;
      } else {
        bool shrink = false;
        if (fr < fv[w]) {
          const Vec xc = clamp_unit(c + 0.5 * (xr - c));
          const double fc = eval(xc);
          if (fc <= fr)
            v[w] = xc, fv[w] = fc;
          else
            shrink = true;
        } else {
          const Vec xc = clamp_unit(c + 0.5 * (v[w] - c));
          const double fc = eval(xc);
          if (fc < fv[w])
            v[w] = xc, fv[w] = fc;
          else
            shrink = true;
        }
        if (shrink) {
          const Vec xb = v[idx[0]];
          for (int i = 1; i <= d; ++i) {
            const int j = idx[i];
            v[j] = xb + 0.5 * (v[j] - xb);
            fv[j] = eval(v[j]);
          }
        }
      }
      order();
      record_row(k);
    }
  } catch (const BudgetExhausted &) {
    rec.termination = "budget";
    if (rec.rows.empty() || rec.rows.back().ledger != ledger.counts()) {
      order();
      record_row(rec.rows.empty() ? 0 : rec.rows.back().iter + 1);
    }
  }
  rec.final_ledger = ledger.counts();
  rec.evaluations = ev.take_log();
  return rec;
}

}  // namespace aerobench::solvers
