//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_HARNESS_EXPORT_HPP
#define AEROBENCH_HARNESS_EXPORT_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "aerobench/harness/campaign.hpp"

namespace aerobench::harness {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Header of the per-run tables, in column order.
inline constexpr const char *kRunColumns =
    "iter,n_obj,n_grad,cost,f,best_feasible,mcv,grad_inf_norm,status";

/// Per-run table: one line per history row, missing metrics as empty fields
/// and reals in shortest round-trip form.
std::string run_table_csv(const RunRecord &rec);
std::vector<RunRow> parse_run_table(const std::string &csv);

/// Companion tables: full ledger counts per row (including the true stencil
/// cost) and the raw evaluation log.
std::string ledger_table_csv(const RunRecord &rec);
std::string evaluations_csv(const RunRecord &rec);

std::string plan_to_json(const CampaignPlan &plan);
CampaignPlan plan_from_json(const std::string &text);

/// File stem of a cell ("rae2822-c-8__cobyla__r0").
std::string cell_stem(const CellResult &cell);

/// Writes every table under `dir/runs` and then `dir/manifest.json`
/// (atomically, via a temporary file). Throws IoError before writing
/// anything when `dir` is not writable.
void export_campaign(const std::string &dir, const CampaignPlan &plan,
                     const std::vector<CellResult> &cells);

struct LoadedCampaign {
  CampaignPlan plan;
  std::vector<CellResult> cells;  // rows and ledgers only; no evaluation log
};

LoadedCampaign load_campaign(const std::string &dir);

}  // namespace aerobench::harness

#endif  // AEROBENCH_HARNESS_EXPORT_HPP
