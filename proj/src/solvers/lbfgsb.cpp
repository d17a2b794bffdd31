//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <limits>

#include "aerobench/optim/lbfgs.hpp"
#include "aerobench/solvers/solvers.hpp"

namespace aerobench::solvers {

RunRecord lbfgsb_run(const problems::Problem &problem, const Vec &x0,
                     const SolverConfig &config,
                     const GradientProvider &gradients, EvalLedger &ledger) {
  config.validate();
  require(!problem.constrained(),
          "lbfgsb_run: the quasi-Newton method handles bound constraints only");
  const int d = problem.dim();
  require(x0.size() == d && inside_unit_box(x0),
          "lbfgsb_run: x0 must lie in the unit box");

  RunRecord rec;
  rec.solver = to_string(SolverKind::lbfgsb);
  rec.problem = problem.catalog_id().empty() ? problem.name()
                                             : problem.catalog_id();
  Evaluator ev(problem, ledger);

  optim::LbfgsCallbacks cb;
  cb.value = [&](const Vec &x) {
    auto r = ev.objective(x);
    return r.ok() ? r.f : std::numeric_limits<double>::quiet_NaN();
  };
  cb.gradient = [&](const Vec &x) { return ev.gradient(x, gradients); };
  cb.on_iterate = [&](const optim::LbfgsStep &s) {
    IterateState it;
    it.k = s.k;
    it.x = s.x;
    it.f = s.f;
    it.g = s.g;
    it.pg_norm = s.pg_norm;
    rec.iterates.push_back(std::move(it));

    RunRow row;
    row.iter = s.k;
    row.ledger = ledger.counts();
    row.x = s.x;
    row.f = s.f;
    row.mcv = 0.0;
    row.grad_inf_norm = s.g.cwiseAbs().maxCoeff();
    if (ev.incumbent())
      row.best_feasible = ev.incumbent()->f;
    rec.rows.push_back(row);
    ledger.snapshot();
  };
  cb.on_step = [&](const optim::LbfgsStep &s) {
    rec.iterates.back().alpha = s.alpha;
    rec.iterates.back().p = s.p;
  };

  optim::LbfgsOptions opt;
  opt.memory = config.memory;
  opt.gtol = config.gtol;
  opt.ftol = config.ftol;
  opt.maxiter = config.maxiter;

  try {
    const auto r = optim::minimize_box(cb, x0, Vec::Zero(d), Vec::Ones(d), opt);
    rec.termination = r.status;
  } catch (const BudgetExhausted &) {
    rec.termination = "budget";
  }
  if (rec.rows.empty()) {
    // Nothing completed (failed start or no budget): report the start.
    RunRow row;
    row.ledger = ledger.counts();
    row.x = x0;
    row.status = "failed";
    if (!ev.log().empty() && ev.log().front().ok()) {
      row.status = "ok";
      row.f = ev.log().front().f;
      row.mcv = 0.0;
    }
    rec.rows.push_back(row);
  } else if (rec.rows.back().ledger != ledger.counts()) {
    // Evaluations spent after the last accepted iterate (a failed line
    // search or an interrupted one) still show up on the cost axis.
    RunRow row = rec.rows.back();
    row.iter += 1;
    row.ledger = ledger.counts();
    if (ev.incumbent())
      row.best_feasible = ev.incumbent()->f;
    rec.rows.push_back(row);
  }
  rec.final_ledger = ledger.counts();
  rec.evaluations = ev.take_log();
  return rec;
}

}  // namespace aerobench::solvers
