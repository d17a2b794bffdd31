//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_CORE_LEDGER_HPP
#define AEROBENCH_CORE_LEDGER_HPP

#include <optional>
#include <stdexcept>
#include <vector>


namespace aerobench {

/// Evaluation counts at one instant.
///
/// `cost()` is the equal-cost convention: one objective evaluation and one
/// gradient evaluation cost the same, whatever produced the gradient.
/// `true_cost()` counts what was actually run: objective calls, every
/// finite-difference stencil call, and analytic gradients.
struct LedgerSnapshot {
  long n_obj = 0;
  long n_grad = 0;
  long n_grad_analytic = 0;
  long n_stencil = 0;
  long n_failed = 0;

  long cost() const noexcept { return n_obj + n_grad; }
  long true_cost() const noexcept {
    return n_obj + n_stencil + n_grad_analytic;
  }

  friend bool operator==(const LedgerSnapshot &,
                         const LedgerSnapshot &) = default;
};

/// Thrown by the evaluator when the next charge would exceed the budget.
/// Solvers catch it and terminate with their best iterate.
class BudgetExhausted : public std::runtime_error {
public:
  BudgetExhausted(): std::runtime_error("evaluation budget exhausted") { }
};

class EvalLedger {
public:
  EvalLedger() = default;
  explicit EvalLedger(std::optional<long> budget): budget_(budget) { }

  const LedgerSnapshot &counts() const noexcept { return counts_; }
  std::optional<long> budget() const noexcept { return budget_; }

  bool can_afford(long extra_cost) const noexcept {
    return !budget_ || counts_.cost() + extra_cost <= *budget_;
  }
  void ensure_affordable(long extra_cost) const {
    if (!can_afford(extra_cost))
      throw BudgetExhausted();
  }

  void charge_objective(bool failed) {
    ++counts_.n_obj;
    if (failed)
      ++counts_.n_failed;
  }
  void charge_analytic_gradient() {
    ++counts_.n_grad;
    ++counts_.n_grad_analytic;
  }
  void charge_fd_gradient(long stencil_calls) {
    ++counts_.n_grad;
    counts_.n_stencil += stencil_calls;
  }

  /// Records the current counts as the next per-iteration snapshot.
  const LedgerSnapshot &snapshot() {
    snapshots_.push_back(counts_);
    return snapshots_.back();
  }
  const std::vector<LedgerSnapshot> &snapshots() const noexcept {
    return snapshots_;
  }

private:
  std::optional<long> budget_;
  LedgerSnapshot counts_;
  std::vector<LedgerSnapshot> snapshots_;
};

}  // namespace aerobench

#endif  // AEROBENCH_CORE_LEDGER_HPP
