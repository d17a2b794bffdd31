//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "aerobench/core/record.hpp"

#include <algorithm>

namespace aerobench {

std::optional<Incumbent> best_feasible(const std::vector<EvalEntry> &entries,
                                       std::size_t upto) {
  require(upto <= entries.size(), "best_feasible: upto beyond history");
  std::optional<Incumbent> best;
  for (std::size_t i = 0; i < upto; ++i) {
    const auto &e = entries[i];
    if (e.feasible() && (!best || e.f < best->f))
      best = Incumbent{ e.u, e.f };
  }
  return best;
}

std::optional<double> RunRecord::final_best_feasible() const {
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (it->best_feasible)
      return it->best_feasible;
  }
  return std::nullopt;
}

}  // namespace aerobench
