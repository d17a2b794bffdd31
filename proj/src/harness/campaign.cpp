//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "aerobench/harness/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "aerobench/bo/bo.hpp"
#include "aerobench/problems/external.hpp"
#include "aerobench/problems/problem_file.hpp"
#include "aerobench/solvers/solvers.hpp"

namespace aerobench::harness {
namespace {
  using problems::Problem;

  std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  // Stable across platforms, unlike std::hash.
  std::uint64_t fnv1a(const std::string &s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch: s)
      h = (h ^ ch) * 0x100000001b3ULL;
    return h;
  }

  template <class Fn> void parallel_for(std::size_t n, int workers, Fn fn) {
    const int w = std::max(1, std::min<int>(workers, static_cast<int>(n)));
    if (w <= 1) {
      for (std::size_t i = 0; i < n; ++i)
        fn(i);
      return;
    }
    std::atomic<std::size_t> next{ 0 };
    std::vector<std::thread> pool;
    for (int t = 0; t < w; ++t)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;)
          fn(i);
      });
    for (auto &th: pool)
      th.join();
  }

  bool derivative_free(const std::string &solver) {
    return solver != "lbfgsb";
  }

  void audit_gradient_norms(RunRecord &rec, const Problem &problem,
                            const GradientProvider &provider) {
    EvalLedger audit;
    const Vec *last_x = nullptr;
    std::optional<double> last;
    for (auto &row: rec.rows) {
      if (row.status != "ok" || row.x.size() != problem.dim())
        continue;
      if (!last_x || *last_x != row.x) {
        last = grad_inf_norm(problem, row.x, provider, audit);
        last_x = &row.x;
      }
      row.grad_inf_norm = last;
    }
    rec.audit_ledger = audit.counts();
  }
}  // namespace

std::vector<std::string> list_solver_ids() {
  return { "bo", "bo-ei", "bo-pi", "bo-ts", "nelder-mead", "cobyla", "lbfgsb" };
}

bool is_bo_solver(const std::string &id) {
  return id.rfind("bo", 0) == 0;
}

std::string canonical_solver_id(const std::string &id) {
  if (id == "bo" || id == "bo-ei" || id == "bo-pi" || id == "bo-ts")
    return id;
  return solvers::to_string(solvers::solver_kind_from_string(id));
}

void CampaignPlan::validate() const {
  require(!problems.empty(), "campaign: no problems");
  require(!solvers.empty(), "campaign: no solvers");
  require(budget > 0, "campaign: budget must be positive");
  require(repetitions >= 1, "campaign: repetitions must be at least 1");
  require(n_seed == 0 || n_seed >= 2, "campaign: n_seed must be 0 or >= 2");
  require(workers >= 1, "campaign: workers must be at least 1");
  require(evaluator_timeout_s > 0.0, "campaign: timeout must be positive");
  for (const auto &s: solvers)
    canonical_solver_id(s);
}

std::uint64_t repetition_seed(std::uint64_t campaign_seed, int rep) {
  return splitmix64(campaign_seed * 0x100000001b3ULL
                    + static_cast<std::uint64_t>(rep));
}

SeedPool draw_seed_pool(const Problem &problem, int n_seed,
                        std::uint64_t rep_seed) {
  const int d = problem.dim();
  SeedPool pool;
  Rng rng(splitmix64(rep_seed ^ 0x5eedULL));
  pool.points = bo::seed_design(n_seed > 0 ? n_seed : bo::default_n_seed(d),
                                d, rng);
  EvalLedger ledger;
  Evaluator ev(problem, ledger);
  for (Eigen::Index i = 0; i < pool.points.rows(); ++i)
    ev.objective(pool.points.row(i).transpose());
  pool.entries = ev.take_log();
  pool.ledger = ledger.counts();

  int best = -1;
  for (int i = 0; i < static_cast<int>(pool.entries.size()); ++i) {
    const auto &e = pool.entries[i];
    if (!e.ok())
      continue;
    if (best < 0) {
      best = i;
      continue;
    }
    const auto &b = pool.entries[best];
    if (e.feasible() != b.feasible()) {
      if (e.feasible())
        best = i;
    } else if (e.feasible() ? e.f < b.f : *e.mcv < *b.mcv) {
      best = i;
    }
  }
  pool.x0_index = std::max(best, 0);
  pool.x0 = pool.points.row(pool.x0_index).transpose();
  return pool;
}

ProblemFactory default_problem_factory(const CampaignPlan &plan) {
  const std::string cmd = plan.evaluator;
  const double timeout = plan.evaluator_timeout_s;
  return [cmd, timeout](const std::string &id) {
    Problem p = problems::resolve_problem(id);
    if (!cmd.empty())
      p = problems::with_external_evaluator(p, problems::split_command(cmd),
                                            timeout);
    return p;
  };
}

RunRecord run_cell(const Problem &problem, const std::string &solver_id,
                   const CampaignPlan &plan, const SeedPool &pool,
                   std::uint64_t rep_seed) {
  const std::string solver = canonical_solver_id(solver_id);
  GradientProvider provider;
  provider.mode = plan.gradient_mode;
  EvalLedger ledger(plan.budget);
  RunRecord rec;

  if (is_bo_solver(solver)) {
    bo::BoConfig cfg;
    cfg.n_seed = static_cast<int>(pool.points.rows());
    cfg.budget = plan.budget;
    cfg.repetition_seed = rep_seed;
    cfg.seed_points = pool.points;
    if (solver == "bo-ei")
      cfg.acquisition = acquisition::AcquisitionKind::ei;
    else if (solver == "bo-pi")
      cfg.acquisition = acquisition::AcquisitionKind::pi;
    else if (solver == "bo-ts")
      cfg.acquisition = acquisition::AcquisitionKind::constrained_ts;
    Rng rng(splitmix64(rep_seed ^ fnv1a(solver)));
    rec = bo::run_bo(problem, cfg, rng, ledger);
  } else {
    solvers::SolverConfig cfg;
    cfg.kind = solvers::solver_kind_from_string(solver);
    switch (cfg.kind) {
    case solvers::SolverKind::nelder_mead:
      rec = solvers::nelder_mead(problem, pool.x0, cfg, ledger);
      break;
    case solvers::SolverKind::cobyla:
      rec = solvers::cobyla_run(problem, pool.x0, cfg, ledger);
      break;
    case solvers::SolverKind::lbfgsb:
      rec = solvers::lbfgsb_run(problem, pool.x0, cfg, provider, ledger);
      break;
    }
  }
  rec.solver = solver;
  rec.seed = rep_seed;
  if (plan.audit_gradients && derivative_free(solver))
    audit_gradient_norms(rec, problem, provider);
  return rec;
}

std::vector<CellResult> run_campaign(const CampaignPlan &plan) {
  return run_campaign(plan, default_problem_factory(plan));
}

std::vector<CellResult> run_campaign(const CampaignPlan &plan,
                                     const ProblemFactory &factory) {
  plan.validate();
  const std::size_t np = plan.problems.size();
  const std::size_t nr = static_cast<std::size_t>(plan.repetitions);
  const std::size_t ns = plan.solvers.size();

  // Resolve everything up front so that a bad id is a plan error rather
  // than a cell failure. Evaluator processes start lazily, so this is cheap.
  for (const auto &id: plan.problems)
    factory(id);

  std::vector<SeedPool> pools(np * nr);
  parallel_for(pools.size(), plan.workers, [&](std::size_t k) {
    const Problem p = factory(plan.problems[k / nr]);
    pools[k] = draw_seed_pool(p, plan.n_seed,
                              repetition_seed(plan.seed, static_cast<int>(k % nr)));
  });

  std::vector<CellResult> cells(np * nr * ns);
  parallel_for(cells.size(), plan.workers, [&](std::size_t k) {
    const std::size_t pi = k / (nr * ns), ri = (k / ns) % nr, si = k % ns;
    CellResult &cell = cells[k];
    cell.problem = plan.problems[pi];
    cell.solver = canonical_solver_id(plan.solvers[si]);
    cell.repetition = static_cast<int>(ri);
    const std::uint64_t seed = repetition_seed(plan.seed, cell.repetition);
    try {
      // Each cell owns its problem instance, hence its evaluator process.
      const Problem p = factory(cell.problem);
      cell.record = run_cell(p, cell.solver, plan, pools[pi * nr + ri], seed);
    } catch (const std::exception &e) {
      cell.failed = true;
      cell.error = e.what();
      cell.record.solver = cell.solver;
      cell.record.problem = cell.problem;
      cell.record.seed = seed;
      cell.record.termination = "error";
      cell.record.message = e.what();
    }
  });
  return cells;
}

}  // namespace aerobench::harness
