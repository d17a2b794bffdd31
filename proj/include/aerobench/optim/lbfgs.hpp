//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_OPTIM_LBFGS_HPP
#define AEROBENCH_OPTIM_LBFGS_HPP

#include <deque>
#include <functional>
#include <optional>
#include <string>

#include "aerobench/common.hpp"

namespace aerobench::optim {

/// Inverse-Hessian approximation applied to `q` by the two-loop recursion
/// over pairs (s_i, y_i), oldest first, with initial matrix gamma * I.
Vec two_loop(const std::vector<Vec> &s, const std::vector<Vec> &y,
             const Vec &q, double gamma);

/// Limited memory of curvature pairs; pairs with non-positive s'y are
/// rejected so the implied inverse Hessian stays positive definite.
class CurvatureMemory {
public:
  explicit CurvatureMemory(int m): m_(m) { }

  bool push(const Vec &s, const Vec &y);
  void clear() { s_.clear(), y_.clear(); }
  int size() const noexcept { return static_cast<int>(s_.size()); }
  double gamma() const;
  Vec apply(const Vec &q) const;

private:
  int m_;
  std::vector<Vec> s_, y_;
};

Vec project(const Vec &x, const Vec &lo, const Vec &hi);

/// P(x - g) - x: zero exactly at first-order stationary points of the box
/// problem.
Vec projected_gradient(const Vec &x, const Vec &g, const Vec &lo,
                       const Vec &hi);

struct LbfgsOptions {
  int memory = 10;
  double gtol = 1e-5;
  double ftol = 1e-12;
  int maxiter = 200;
  double c1 = 1e-4;
  double backtrack = 0.5;
  int max_trials = 20;
};

/// One accepted iterate: x_k and f_k with its gradient, plus the step
/// (alpha_k, p_k) that left it; alpha = 0 for the final iterate.
struct LbfgsStep {
  int k = 0;
  Vec x;
  double f = 0.0;
  Vec g;
  double alpha = 0.0;
  Vec p;
  double pg_norm = 0.0;
};

struct LbfgsCallbacks {
  // Objective value; a non-finite return marks a failed evaluation, which
  // the line search treats as a rejected trial.
  std::function<double(const Vec &)> value;
  std::function<std::optional<Vec>(const Vec &)> gradient;
  // Called once per iterate x_k as soon as f_k and g_k are known (alpha and
  // p unset), and again through on_step once the step leaving x_k has been
  // accepted.
  std::function<void(const LbfgsStep &)> on_iterate;
  std::function<void(const LbfgsStep &)> on_step;
};

struct LbfgsResult {
  Vec x;
  double f = 0.0;
  Vec g;
  int iterations = 0;
  std::string status;  // gtol, ftol, maxiter, line-search-failure, ...
};

/// Projected limited-memory BFGS with Armijo backtracking along the
/// projected path. Exceptions thrown by the callbacks propagate.
LbfgsResult minimize_box(const LbfgsCallbacks &fn, Vec x0, const Vec &lo,
                         const Vec &hi, const LbfgsOptions &opt);

}  // namespace aerobench::optim

#endif  // AEROBENCH_OPTIM_LBFGS_HPP
