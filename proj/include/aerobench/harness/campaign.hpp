//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_HARNESS_CAMPAIGN_HPP
#define AEROBENCH_HARNESS_CAMPAIGN_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aerobench/core/evaluator.hpp"
#include "aerobench/core/record.hpp"
#include "aerobench/problems/problem.hpp"

namespace aerobench::harness {

/// Solver ids accepted by a campaign: "bo" (default acquisition for the
/// problem), "bo-ei", "bo-pi", "bo-ts", "nelder-mead", "cobyla", "lbfgsb".
std::vector<std::string> list_solver_ids();
bool is_bo_solver(const std::string &id);
/// Canonical spelling of a solver id; throws std::invalid_argument.
std::string canonical_solver_id(const std::string &id);

struct CampaignPlan {
  std::vector<std::string> problems;  // catalog ids or problem-file paths
  std::vector<std::string> solvers;
  long budget = 0;
  int repetitions = 1;
  std::uint64_t seed = 0;
  int n_seed = 0;  // 0: default for the dimension
  std::string evaluator;  // external command line; empty for in-process
  double evaluator_timeout_s = 30.0;
  int workers = 1;
  GradientMode gradient_mode = GradientMode::central_difference;
  // Out-of-band gradient norms for derivative-free solvers, charged to a
  // separate audit ledger.
  bool audit_gradients = true;

  void validate() const;
};

/// Seed of repetition `rep` (0-based); shared by every solver and problem.
std::uint64_t repetition_seed(std::uint64_t campaign_seed, int rep);

/// The seed design of one (problem, repetition), evaluated once on its own
/// ledger. `x0` is the best feasible member, else the least-violating one,
/// else the first point.
struct SeedPool {
  Mat points;
  std::vector<EvalEntry> entries;
  LedgerSnapshot ledger;
  Vec x0;
  int x0_index = 0;
};

SeedPool draw_seed_pool(const problems::Problem &problem, int n_seed,
                        std::uint64_t rep_seed);

struct CellResult {
  std::string problem;  // as given in the plan
  std::string solver;
  int repetition = 0;
  RunRecord record;
  bool failed = false;  // the solver threw; record holds what was known
  std::string error;
};

using ProblemFactory = std::function<problems::Problem(const std::string &)>;

/// Resolves plan entries to problems: catalog ids or .json problem files,
/// with the plan's external evaluator substituted when one is given.
ProblemFactory default_problem_factory(const CampaignPlan &plan);

/// Runs every (problem, solver, repetition) cell. Cells are independent and
/// run on up to `plan.workers` threads; results come back in plan order
/// (problem-major, then repetition, then solver).
std::vector<CellResult> run_campaign(const CampaignPlan &plan);
std::vector<CellResult> run_campaign(const CampaignPlan &plan,
                                     const ProblemFactory &factory);

/// Runs one cell against an already drawn seed pool.
RunRecord run_cell(const problems::Problem &problem, const std::string &solver,
                   const CampaignPlan &plan, const SeedPool &pool,
                   std::uint64_t rep_seed);

}  // namespace aerobench::harness

#endif  // AEROBENCH_HARNESS_CAMPAIGN_HPP
