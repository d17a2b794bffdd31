//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_HARNESS_METRICS_HPP
#define AEROBENCH_HARNESS_METRICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "aerobench/core/record.hpp"
#include "aerobench/problems/problem.hpp"

namespace aerobench::harness {

enum class Metric { objective, best_feasible, mcv, gradnorm };
enum class Axis { iteration, cost };

const char *to_string(Metric m);
const char *to_string(Axis a);
Metric metric_from_string(const std::string &s);
Axis axis_from_string(const std::string &s);

/// Maximum constraint violation at `u`; nullopt when the evaluation fails.
std::optional<double> mcv(const problems::Problem &problem, const Vec &u);

std::optional<double> row_metric(const RunRow &row, Metric m);

/// Position of a row on the chosen axis. BO histories are shifted right by
/// their seed-design size on the iteration axis only.
double row_position(const RunRecord &rec, const RunRow &row, Axis a);

struct Series {
  std::vector<double> x;
  std::vector<double> y;
};

/// Defined (x, y) points of one run.
Series run_series(const RunRecord &rec, Metric m, Axis a);

/// Pointwise statistics over repetitions on the union of their abscissae.
/// Each repetition contributes its most recent value at or before x (a
/// step function); positions before some repetition's first defined point
/// are omitted.
struct AggregateBand {
  std::vector<double> x, min, max, mean;
  int repetitions = 0;

  std::size_t size() const noexcept { return x.size(); }
};

AggregateBand aggregate(const std::vector<const RunRecord *> &reps, Metric m,
                        Axis a);

}  // namespace aerobench::harness

#endif  // AEROBENCH_HARNESS_METRICS_HPP
