//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_CORE_EVALUATOR_HPP
#define AEROBENCH_CORE_EVALUATOR_HPP

#include <optional>
#include <string>
#include <vector>

#include "aerobench/core/ledger.hpp"
#include "aerobench/core/record.hpp"
#include "aerobench/problems/problem.hpp"

namespace aerobench {

enum class GradientMode { analytic, forward_difference, central_difference };

const char *to_string(GradientMode mode);
GradientMode gradient_mode_from_string(const std::string &s);

struct GradientProvider {
  GradientMode mode = GradientMode::central_difference;
  double fd_step = 0.0;  // 0 selects max(1e-6, 1e-7 * |x|_inf)

  double step_for(const Vec &x) const;
};

/// The only path through which solvers touch a problem. Every call is
/// charged to the ledger; a call that would exceed the budget throws
/// BudgetExhausted before the problem is touched. Objective calls are
/// logged, which also maintains the best feasible incumbent.
class Evaluator {
public:
  Evaluator(const problems::Problem &problem, EvalLedger &ledger)
      : problem_(&problem), ledger_(&ledger) { }

  const problems::Problem &problem() const noexcept { return *problem_; }
  EvalLedger &ledger() noexcept { return *ledger_; }
  const EvalLedger &ledger() const noexcept { return *ledger_; }

  problems::EvaluationResult objective(const Vec &u);

  /// Gradient of the objective at `u`. Analytic mode falls back to central
  /// differences when the problem has no analytic gradient. Returns nullopt
  /// when any required evaluation fails.
  std::optional<Vec> gradient(const Vec &u, const GradientProvider &provider);

  const std::vector<EvalEntry> &log() const noexcept { return log_; }
  std::vector<EvalEntry> take_log() { return std::move(log_); }
  const std::optional<Incumbent> &incumbent() const noexcept {
    return incumbent_;
  }

private:
  const problems::Problem *problem_;
  EvalLedger *ledger_;
  std::vector<EvalEntry> log_;
  std::optional<Incumbent> incumbent_;
};

/// Finite-difference objective gradient in normalized coordinates. Central
/// stencils where the box allows; one-sided stencils on coordinates within
/// one step of a face. Charged as one gradient plus the stencil calls made.
std::optional<Vec> finite_difference_gradient(const problems::Problem &problem,
                                              const Vec &u,
                                              const GradientProvider &provider,
                                              EvalLedger &ledger);

/// Objective gradient infinity norm, charged to `ledger` (analytic when the
/// problem provides it and the provider asks for it).
std::optional<double> grad_inf_norm(const problems::Problem &problem,
                                    const Vec &u,
                                    const GradientProvider &provider,
                                    EvalLedger &ledger);

}  // namespace aerobench

#endif  // AEROBENCH_CORE_EVALUATOR_HPP
