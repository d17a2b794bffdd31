//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "doctest.h"

#include "aerobench/bo/bo.hpp"
#include "aerobench/problems/catalog.hpp"

using namespace aerobench;
using namespace aerobench::bo;

namespace {

/// A problem that fails on the right half of the box.
problems::Problem half_failing() {
  const auto base = problems::make_problem("quadratic1d");
  return base.with_backend(
      [b = base.backend()](const Vec &u, bool g) {
        if (u[0] > 0.5)
          return problems::EvaluationResult::failure("injected");
        return b(u, g);
      },
      false);
}

}  // namespace

TEST_CASE("default seed size") {
  CHECK(default_n_seed(1) == 10);
  CHECK(default_n_seed(5) == 10);
  CHECK(default_n_seed(8) == 16);
}

TEST_CASE("Latin hypercube seed designs stratify every axis") {
  Rng rng(21);
  const Mat S = seed_design(12, 3, rng);
  REQUIRE(S.rows() == 12);
  for (int j = 0; j < 3; ++j) {
    std::vector<int> bins(12, 0);
    for (int i = 0; i < 12; ++i) {
      REQUIRE(S(i, j) >= 0.0);
      REQUIRE(S(i, j) <= 1.0);
      ++bins[std::min(11, static_cast<int>(S(i, j) * 12))];
    }
    for (int b: bins)
      CHECK(b == 1);
  }
}

TEST_CASE("BO spends exactly its budget on objective evaluations only") {
  const auto p = problems::make_problem("quadratic1d");
  BoConfig cfg;
  cfg.budget = 20;
  cfg.n_seed = 6;
  Rng rng(22);
  EvalLedger ledger(cfg.budget);
  const auto rec = run_bo(p, cfg, rng, ledger);
  CHECK(ledger.counts().n_obj == 20);
  CHECK(ledger.counts().n_grad == 0);
  CHECK(rec.final_ledger.cost() == 20);
  CHECK(rec.evaluations.size() == 20);
  CHECK(rec.seed_offset == 6);
  CHECK(*rec.final_best_feasible() <= 1e-3);
}

TEST_CASE("shared seed points are evaluated first and in order") {
  const auto p = problems::make_problem("sphere2");
  Mat pool(4, 2);
  pool << 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8;
  BoConfig cfg;
  cfg.budget = 8;
  cfg.seed_points = pool;
  Rng rng(23);
  const auto rec = run_bo(p, cfg, rng);
  REQUIRE(rec.evaluations.size() == 8);
  CHECK(rec.seed_offset == 4);
  for (int i = 0; i < 4; ++i)
    CHECK((rec.evaluations[i].u - pool.row(i).transpose()).norm() == 0.0);
}

TEST_CASE("failed evaluations are charged but kept out of the objective model") {
  const auto p = half_failing();
  BoConfig cfg;
  cfg.budget = 16;
  cfg.n_seed = 6;
  Rng rng(24);
  const auto rec = run_bo(p, cfg, rng);
  CHECK(rec.final_ledger.n_obj == 16);
  long failed = 0;
  for (const auto &e: rec.evaluations)
    failed += e.ok() ? 0 : 1;
  CHECK(failed > 0);
  CHECK(rec.final_ledger.n_failed == failed);
  // Before each acquisition the model holds exactly the successful points.
  REQUIRE(rec.objective_model_sizes.size() == 10);
  for (std::size_t k = 0; k < rec.objective_model_sizes.size(); ++k) {
    int ok = 0;
    for (std::size_t i = 0; i < 6 + k; ++i)
      ok += rec.evaluations[i].ok() ? 1 : 0;
    CHECK(rec.objective_model_sizes[k] == ok);
  }
  bool saw_failed_row = false;
  for (const auto &r: rec.rows)
    saw_failed_row = saw_failed_row || r.status == "failed";
  CHECK(saw_failed_row);
}

TEST_CASE("constrained BO uses the trust region and respects the budget") {
  const auto p = problems::make_problem("circle-lp");
  BoConfig cfg;
  cfg.budget = 25;
  Rng rng(25);
  const auto rec = run_bo(p, cfg, rng);
  CHECK(rec.final_ledger.cost() == 25);
  CHECK(!rec.trust_region_lengths.empty());
  for (double l: rec.trust_region_lengths)
    CHECK(l > 0.0);
  REQUIRE(rec.final_best_feasible().has_value());
}

TEST_CASE("BO runs are reproducible from the seed") {
  const auto p = problems::make_problem("sphere2");
  BoConfig cfg;
  cfg.budget = 14;
  Rng a(26), b(26);
  const auto ra = run_bo(p, cfg, a), rb = run_bo(p, cfg, b);
  REQUIRE(ra.evaluations.size() == rb.evaluations.size());
  for (std::size_t i = 0; i < ra.evaluations.size(); ++i)
    CHECK(ra.evaluations[i].u == rb.evaluations[i].u);
}

TEST_CASE("budgets smaller than the seed design are rejected") {
  const auto p = problems::make_problem("sphere2");
  BoConfig cfg;
  cfg.budget = 5;
  Rng rng(27);
  CHECK_THROWS_AS(run_bo(p, cfg, rng), std::invalid_argument);
}
