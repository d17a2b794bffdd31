//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_HARNESS_PLOT_HPP
#define AEROBENCH_HARNESS_PLOT_HPP

#include <string>
#include <vector>

#include "aerobench/harness/campaign.hpp"
#include "aerobench/harness/metrics.hpp"

namespace aerobench::harness {

struct PlotCurve {
  std::string solver;
  AggregateBand band;  // mean line; min/max shaded when repetitions > 1
  bool shaded() const noexcept { return band.repetitions > 1; }
};

struct PlotData {
  std::string problem;
  Metric metric = Metric::objective;
  Axis axis = Axis::iteration;
  bool log_y = false;
  std::vector<PlotCurve> curves;  // one per solver, in first-seen order
};

/// Curves of one problem: repetitions of a solver are aggregated.
PlotData plot_data(const std::string &problem,
                   const std::vector<const RunRecord *> &records, Metric metric,
                   Axis axis);

std::string render_svg(const PlotData &data);

/// Writes one SVG per problem of the campaign into `dir` and returns the
/// paths written. Failed cells are skipped.
std::vector<std::string> plot_campaign(const std::vector<CellResult> &cells,
                                       Metric metric, Axis axis,
                                       const std::string &dir);

}  // namespace aerobench::harness

#endif  // AEROBENCH_HARNESS_PLOT_HPP
