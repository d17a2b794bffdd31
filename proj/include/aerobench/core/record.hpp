//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_CORE_RECORD_HPP
#define AEROBENCH_CORE_RECORD_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aerobench/common.hpp"
#include "aerobench/core/ledger.hpp"
#include "aerobench/problems/problem.hpp"

namespace aerobench {

// A point counts as feasible when its maximum constraint violation is at
// most this, in the units of the internal constraint values.
inline constexpr double kFeasibilityTol = 1e-6;

/// One charged objective evaluation, in call order.
struct EvalEntry {
  long index = 0;
  Vec u;
  problems::EvalStatus status = problems::EvalStatus::failed;
  double f = 0.0;
  Vec c;
  std::optional<double> mcv;  // empty for failed evaluations

  bool ok() const noexcept { return status == problems::EvalStatus::ok; }
  bool feasible() const noexcept { return mcv && *mcv <= kFeasibilityTol; }
};

struct Incumbent {
  Vec u;
  double f;
};

/// Smallest objective among the first `upto` entries that are feasible;
/// nullopt when none is.
std::optional<Incumbent> best_feasible(const std::vector<EvalEntry> &entries,
                                       std::size_t upto);

/// One row of a convergence history. Missing metrics stay empty.
struct RunRow {
  int iter = 0;
  LedgerSnapshot ledger;
  std::optional<double> f;
  std::optional<double> best_feasible;
  std::optional<double> mcv;
  std::optional<double> grad_inf_norm;
  std::string status = "ok";
  Vec x;  // site the row describes (normalized)
};

/// Quasi-Newton trajectory entry: the iterate, its gradient, and the step
/// that produced the next iterate.
struct IterateState {
  int k = 0;
  Vec x;
  double f = 0.0;
  std::optional<Vec> g;
  double alpha = 0.0;
  Vec p;
  std::optional<double> pg_norm;         // projected-gradient inf-norm
  std::optional<double> simplex_volume;  // simplex methods
};

struct RunRecord {
  std::string solver;
  std::string problem;
  std::uint64_t seed = 0;
  int seed_offset = 0;  // n_seed for BO, 0 otherwise
  std::vector<RunRow> rows;
  std::vector<EvalEntry> evaluations;
  std::vector<IterateState> iterates;
  std::string termination;
  std::string message;
  LedgerSnapshot final_ledger;
  LedgerSnapshot audit_ledger;  // out-of-band gradient-norm stencils

  // BO diagnostics, one entry per acquisition: objective GP training-set
  // size and trust-region edge length (0 when no trust region is used).
  std::vector<int> objective_model_sizes;
  std::vector<double> trust_region_lengths;

  std::optional<double> final_best_feasible() const;
};

}  // namespace aerobench

#endif  // AEROBENCH_CORE_RECORD_HPP
