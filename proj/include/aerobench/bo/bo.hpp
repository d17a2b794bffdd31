//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_BO_BO_HPP
#define AEROBENCH_BO_BO_HPP

#include <cstdint>
#include <optional>

#include "aerobench/acquisition/acquisition.hpp"
#include "aerobench/core/evaluator.hpp"
#include "aerobench/core/record.hpp"
#include "aerobench/gp/kernel.hpp"
#include "aerobench/problems/problem.hpp"

namespace aerobench::bo {

int default_n_seed(int d);

/// Latin hypercube sample of n points in [0,1]^d: each coordinate hits
/// every one of the n strata exactly once.
Mat seed_design(int n_seed, int d, Rng &rng);

struct BoConfig {
  int n_seed = 0;  // 0: default_n_seed(d)
  long budget = 0;
  // Unconstrained problems default to EI, constrained ones to Thompson
  // sampling in a trust region.
  std::optional<acquisition::AcquisitionKind> acquisition;
  std::uint64_t repetition_seed = 0;
  gp::KernelFamily kernel = gp::KernelFamily::matern52;
  int fit_starts = 8;
  int fit_iter = 40;
  acquisition::MaximizeOptions maximize;
  acquisition::TsOptions thompson;
  double eq_band = 1e-3;
  // Shared seed pool; overrides the Latin hypercube draw when set.
  std::optional<Mat> seed_points;
};

/// Algorithm 1 with refits after every evaluation. Consumes exactly
/// `budget` objective evaluations (seeds included) and no gradients.
/// Row 0 describes the state after seeding; row i the i-th acquisition.
RunRecord run_bo(const problems::Problem &problem, const BoConfig &config,
                 Rng &rng);

/// Same, charging an existing ledger (whose budget, if any, must allow the
/// run).
RunRecord run_bo(const problems::Problem &problem, const BoConfig &config,
                 Rng &rng, EvalLedger &ledger);

}  // namespace aerobench::bo

#endif  // AEROBENCH_BO_BO_HPP
