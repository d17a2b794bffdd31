//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "aerobench/harness/metrics.hpp"

#include <algorithm>
#include <limits>

namespace aerobench::harness {

const char *to_string(Metric m) {
  switch (m) {
  case Metric::objective: return "objective";
  case Metric::best_feasible: return "best_feasible";
  case Metric::mcv: return "mcv";
  case Metric::gradnorm: return "gradnorm";
  }
  return "?";
}

const char *to_string(Axis a) {
  return a == Axis::iteration ? "iteration" : "cost";
}

Metric metric_from_string(const std::string &s) {
  for (auto m: { Metric::objective, Metric::best_feasible, Metric::mcv,
                 Metric::gradnorm })
    if (s == to_string(m))
      return m;
  throw std::invalid_argument("unknown metric '" + s
                              + "' (objective, best_feasible, mcv, gradnorm)");
}

Axis axis_from_string(const std::string &s) {
  if (s == "iteration")
    return Axis::iteration;
  if (s == "cost")
    return Axis::cost;
  throw std::invalid_argument("unknown axis '" + s + "' (iteration, cost)");
}

std::optional<double> mcv(const problems::Problem &problem, const Vec &u) {
  const auto r = problem.evaluate(u);
  if (!r.ok())
    return std::nullopt;
  return problems::max_constraint_violation(problem, r.c);
}

std::optional<double> row_metric(const RunRow &row, Metric m) {
  switch (m) {
  case Metric::objective: return row.f;
  case Metric::best_feasible: return row.best_feasible;
  case Metric::mcv: return row.mcv;
  case Metric::gradnorm: return row.grad_inf_norm;
  }
  return std::nullopt;
}

double row_position(const RunRecord &rec, const RunRow &row, Axis a) {
  if (a == Axis::cost)
    return static_cast<double>(row.ledger.cost());
  return static_cast<double>(row.iter + rec.seed_offset);
}

Series run_series(const RunRecord &rec, Metric m, Axis a) {
  Series s;
  for (const auto &row: rec.rows) {
    const auto v = row_metric(row, m);
    if (!v)
      continue;
    const double x = row_position(rec, row, a);
    if (!s.x.empty() && x == s.x.back()) {
      s.y.back() = *v;  // several rows at one cost: keep the latest
      continue;
    }
    s.x.push_back(x);
    s.y.push_back(*v);
  }
  return s;
}

AggregateBand aggregate(const std::vector<const RunRecord *> &reps, Metric m,
                        Axis a) {
  AggregateBand band;
  band.repetitions = static_cast<int>(reps.size());
  if (reps.empty())
    return band;
  std::vector<Series> series;
  std::vector<double> grid;
  for (const auto *r: reps) {
    series.push_back(run_series(*r, m, a));
    grid.insert(grid.end(), series.back().x.begin(), series.back().x.end());
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<std::size_t> cursor(series.size(), 0);
  for (double x: grid) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo, sum = 0.0;
    bool all = true;
    for (std::size_t i = 0; i < series.size(); ++i) {
      const auto &s = series[i];
      while (cursor[i] < s.x.size() && s.x[cursor[i]] <= x)
        ++cursor[i];
      if (cursor[i] == 0) {
        all = false;
        continue;
      }
      const double v = s.y[cursor[i] - 1];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    if (!all)
      continue;
    // The mean of finitely many reals lies in [min, max] mathematically;
    // clamp away the last-bit rounding of the summation.
    const double mean = std::clamp(sum / series.size(), lo, hi);
    band.x.push_back(x);
    band.min.push_back(lo);
    band.max.push_back(hi);
    band.mean.push_back(mean);
  }
  return band;
}

}  // namespace aerobench::harness
