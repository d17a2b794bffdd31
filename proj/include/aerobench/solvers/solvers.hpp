//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_SOLVERS_SOLVERS_HPP
#define AEROBENCH_SOLVERS_SOLVERS_HPP

#include <string>

#include "aerobench/core/evaluator.hpp"
#include "aerobench/core/ledger.hpp"
#include "aerobench/core/record.hpp"
#include "aerobench/problems/problem.hpp"

namespace aerobench::solvers {

enum class SolverKind { nelder_mead, cobyla, lbfgsb };

const char *to_string(SolverKind k);
SolverKind solver_kind_from_string(const std::string &s);

struct SolverConfig {
  SolverKind kind = SolverKind::lbfgsb;
  double gtol = 1e-4;
  double fatol = 1e-4;
  double ftol = 1e-9;
  int maxiter = 500;
  int memory = 10;
  // Linear-approximation method: trust radii, merit-change tolerance and
  // the equality band (|c| <= eq_band is treated as satisfied).
  double rho_init = 0.25;
  double rho_final = 1e-6;
  double tol = 1e-9;
  double eq_band = 0.0;
  // Nelder-Mead initial simplex edge (normalized units).
  double initial_step = 0.05;

  void validate() const;
};

/// Simplex search on an unconstrained problem; reflected points are
/// projected into the box. Throws std::invalid_argument for constrained
/// problems or a zero initial step.
RunRecord nelder_mead(const problems::Problem &problem, const Vec &x0,
                      const SolverConfig &config, EvalLedger &ledger);

/// Affine interpolant through d+1 points: value at vertices.row(0) and
/// gradient. Throws NumericalFailure when the points are affinely
/// dependent.
struct LinearModel {
  double value = 0.0;
  Vec gradient;
};
LinearModel fit_linear_model(const Mat &vertices, const Vec &values);

/// Linear-approximation trust-region method with a merit function
/// f + mu * (constraint violation).
RunRecord cobyla_run(const problems::Problem &problem, const Vec &x0,
                     const SolverConfig &config, EvalLedger &ledger);

/// Projected limited-memory quasi-Newton with Armijo backtracking.
RunRecord lbfgsb_run(const problems::Problem &problem, const Vec &x0,
                     const SolverConfig &config,
                     const GradientProvider &gradients, EvalLedger &ledger);

}  // namespace aerobench::solvers

#endif  // AEROBENCH_SOLVERS_SOLVERS_HPP
