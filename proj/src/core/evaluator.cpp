//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "aerobench/core/evaluator.hpp"

#include <algorithm>
#include <cmath>

namespace aerobench {

const char *to_string(GradientMode mode) {
  switch (mode) {
  case GradientMode::analytic:
    return "analytic";
  case GradientMode::forward_difference:
    return "forward";
  case GradientMode::central_difference:
    return "central";
  }
  return "?";
}

GradientMode gradient_mode_from_string(const std::string &s) {
  if (s == "analytic")
    return GradientMode::analytic;
  if (s == "forward")
    return GradientMode::forward_difference;
  if (s == "central")
    return GradientMode::central_difference;
  throw std::invalid_argument("unknown gradient mode '" + s + "'");
}

double GradientProvider::step_for(const Vec &x) const {
  if (fd_step > 0.0)
    return fd_step;
  return std::max(1e-6, 1e-7 * x.cwiseAbs().maxCoeff());
}

problems::EvaluationResult Evaluator::objective(const Vec &u) {
  ledger_->ensure_affordable(1);
  auto r = problem_->evaluate(u, false);
  ledger_->charge_objective(!r.ok());

  EvalEntry e;
  e.index = static_cast<long>(log_.size());
  e.u = u;
  e.status = r.status;
  if (r.ok()) {
    e.f = r.f;
    e.c = r.c;
    e.mcv = problems::max_constraint_violation(*problem_, r.c);
    if (e.feasible() && (!incumbent_ || r.f < incumbent_->f))
      incumbent_ = Incumbent{ u, r.f };
  }
  log_.push_back(std::move(e));
  return r;
}

std::optional<Vec> Evaluator::gradient(const Vec &u,
                                       const GradientProvider &provider) {
  if (provider.mode == GradientMode::analytic
      && problem_->has_analytic_gradient()) {
    ledger_->ensure_affordable(1);
    auto r = problem_->evaluate(u, true);
    ledger_->charge_analytic_gradient();
    if (!r.ok() || !r.grad_f)
      return std::nullopt;
    return *r.grad_f;
  }
  GradientProvider fd = provider;
  if (fd.mode == GradientMode::analytic)
    fd.mode = GradientMode::central_difference;
  ledger_->ensure_affordable(1);
  return finite_difference_gradient(*problem_, u, fd, *ledger_);
}

std::optional<Vec> finite_difference_gradient(const problems::Problem &problem,
                                              const Vec &u,
                                              const GradientProvider &provider,
                                              EvalLedger &ledger) {
  const int d = problem.dim();
  require(u.size() == d, "finite difference: dimension mismatch");
  const double h = provider.step_for(u);
  const bool central = provider.mode != GradientMode::forward_difference;

  long calls = 0;
  bool failed = false;
  auto eval = [&](const Vec &p) -> double {
    ++calls;
    auto r = problem.evaluate(p, false);
    if (!r.ok()) {
      failed = true;
      return 0.0;
    }
    return r.f;
  };

  Vec g(d);
  std::optional<double> f0;
  auto center = [&]() {
    if (!f0)
      f0 = eval(u);
    return *f0;
  };

  for (int i = 0; i < d && !failed; ++i) {
    const bool room_up = u[i] + h <= 1.0, room_down = u[i] - h >= 0.0;
    Vec p = u;
    if (central && room_up && room_down) {
      p[i] = u[i] + h;
      const double fp = eval(p);
      p[i] = u[i] - h;
      const double fm = eval(p);
      g[i] = (fp - fm) / (2.0 * h);
    } else if (room_up) {
      p[i] = u[i] + h;
      g[i] = (eval(p) - center()) / h;
    } else {
      p[i] = u[i] - h;
      g[i] = (center() - eval(p)) / h;
    }
  }

  ledger.charge_fd_gradient(calls);
  if (failed)
    return std::nullopt;
  return g;
}

std::optional<double> grad_inf_norm(const problems::Problem &problem,
                                    const Vec &u,
                                    const GradientProvider &provider,
                                    EvalLedger &ledger) {
  std::optional<Vec> g;
  if (provider.mode == GradientMode::analytic
      && problem.has_analytic_gradient()) {
    auto r = problem.evaluate(u, true);
    ledger.charge_analytic_gradient();
    if (r.ok() && r.grad_f)
      g = *r.grad_f;
  } else {
    GradientProvider fd = provider;
    if (fd.mode == GradientMode::analytic)
      fd.mode = GradientMode::central_difference;
    g = finite_difference_gradient(problem, u, fd, ledger);
  }
  if (!g)
    return std::nullopt;
  return g->cwiseAbs().maxCoeff();
}

}  // namespace aerobench
