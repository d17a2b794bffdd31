//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_OPTIM_LP_HPP
#define AEROBENCH_OPTIM_LP_HPP

#include "aerobench/common.hpp"

namespace aerobench::optim {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Vec x;
  double value = 0.0;
};

/// Dense two-phase simplex (Bland's rule) for
///   minimize c'x  subject to  A x <= b,  lo <= x <= hi.
/// Meant for the small subproblems of the linear-approximation solver; all
/// bounds must be finite.
LpResult solve_lp(const Vec &c, const Mat &A, const Vec &b, const Vec &lo,
                  const Vec &hi);

}  // namespace aerobench::optim

#endif  // AEROBENCH_OPTIM_LP_HPP
