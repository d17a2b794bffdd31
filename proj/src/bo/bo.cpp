//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "aerobench/bo/bo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aerobench/gp/fit.hpp"

namespace aerobench::bo {
namespace {
  using acquisition::AcquisitionKind;
  using problems::Problem;

  Vec random_point(const Vec &lo, const Vec &hi, Rng &rng) {
    Vec u(lo.size());
    for (Eigen::Index j = 0; j < u.size(); ++j)
      u[j] = lo[j] + uniform01(rng) * (hi[j] - lo[j]);
    return u;
  }

  // Best feasible entry, else the least-violating one; -1 if every
  // evaluation failed.
  int current_best(const std::vector<EvalEntry> &log) {
    int best = -1;
    for (int i = 0; i < static_cast<int>(log.size()); ++i) {
      const auto &e = log[i];
      if (!e.ok())
        continue;
      if (best < 0) {
        best = i;
        continue;
      }
      const auto &b = log[best];
      if (e.feasible() != b.feasible()) {
        if (e.feasible())
          best = i;
      } else if (e.feasible() ? e.f < b.f : *e.mcv < *b.mcv) {
        best = i;
      }
    }
    return best;
  }

  bool improves(const EvalEntry &cand, const EvalEntry *inc) {
    if (!cand.ok())
      return false;
    if (!inc)
      return true;
    if (cand.feasible() && !inc->feasible())
      return true;
    if (!cand.feasible() && inc->feasible())
      return false;
    if (cand.feasible())
      return cand.f < inc->f - 1e-3 * std::abs(inc->f);
    return *cand.mcv < *inc->mcv;
  }

  struct ModelSlot {
    std::optional<gp::Hyperparameters> warm;
  };

  std::optional<gp::Surrogate> fit_model(const Mat &X, const Vec &y,
                                         const BoConfig &cfg, ModelSlot &slot,
                                         std::uint64_t seed) {
    if (X.rows() < 2)
      return std::nullopt;
    gp::FitOptions fo;
    fo.family = cfg.kernel;
    fo.n_starts = cfg.fit_starts;
    fo.max_iter = cfg.fit_iter;
    fo.seed = seed;
    fo.warm_start = slot.warm;
    auto sf = gp::fit_surrogate(X, y, fo);
    slot.warm = sf.fit.hyper;
    return std::move(sf.surrogate);
  }

  RunRow make_row(int iter, const Evaluator &ev, const EvalEntry *site) {
    RunRow row;
    row.iter = iter;
    row.ledger = ev.ledger().counts();
    if (ev.incumbent())
      row.best_feasible = ev.incumbent()->f;
    if (site) {
      row.x = site->u;
      if (site->ok()) {
        row.f = site->f;
        row.mcv = site->mcv;
      } else {
        row.status = "failed";
      }
    }
    return row;
  }
}  // namespace

int default_n_seed(int d) { return std::max(2 * d, 10); }

Mat seed_design(int n_seed, int d, Rng &rng) {
  require(n_seed >= 2, "seed_design: need at least two seed points");
  require(d >= 1, "seed_design: dimension must be positive");
  Mat X(n_seed, d);
  std::vector<int> perm(n_seed);
  for (int j = 0; j < d; ++j) {
    std::iota(perm.begin(), perm.end(), 0);
    // Fisher-Yates with the portable uniform draw.
    for (int i = n_seed - 1; i > 0; --i) {
      const int k = static_cast<int>(uniform01(rng) * (i + 1));
      std::swap(perm[i], perm[std::min(k, i)]);
    }
    for (int i = 0; i < n_seed; ++i)
      X(i, j) = (perm[i] + uniform01(rng)) / n_seed;
  }
  return X;
}

RunRecord run_bo(const Problem &problem, const BoConfig &config, Rng &rng) {
  EvalLedger ledger(config.budget);
  return run_bo(problem, config, rng, ledger);
}

RunRecord run_bo(const Problem &problem, const BoConfig &config, Rng &rng,
                 EvalLedger &ledger) {
  const int d = problem.dim();
  const AcquisitionKind kind =
      config.acquisition.value_or(problem.constrained()
                                      ? AcquisitionKind::constrained_ts
                                      : AcquisitionKind::ei);
  require(kind == AcquisitionKind::constrained_ts || !problem.constrained(),
          "run_bo: constrained problems need the constrained-ts acquisition");

  Mat seeds;
  if (config.seed_points) {
    seeds = *config.seed_points;
    require(seeds.cols() == d, "run_bo: seed pool dimension mismatch");
    require(seeds.rows() >= 1, "run_bo: empty seed pool");
  } else {
    seeds = seed_design(config.n_seed > 0 ? config.n_seed : default_n_seed(d),
                        d, rng);
  }
  const int n_seed = static_cast<int>(seeds.rows());
  require(config.budget >= n_seed + 1,
          "run_bo: budget must exceed the number of seed points");

  RunRecord rec;
  rec.solver = "bo";
  rec.problem = problem.catalog_id().empty() ? problem.name()
                                             : problem.catalog_id();
  rec.seed = config.repetition_seed;
  rec.seed_offset = n_seed;

  const long start_cost = ledger.counts().cost();
  const long end_cost = start_cost + config.budget;
  Evaluator ev(problem, ledger);
  auto affordable = [&] {
    return ledger.counts().cost() < end_cost && ledger.can_afford(1);
  };

  try {
    for (int i = 0; i < n_seed; ++i)
      ev.objective(seeds.row(i).transpose());
  } catch (const BudgetExhausted &) {
    rec.termination = "budget";
  }
  {
    const int b = current_best(ev.log());
    rec.rows.push_back(make_row(0, ev, b >= 0 ? &ev.log()[b] : nullptr));
    ledger.snapshot();
  }

  const int m = problem.num_constraints();
  const auto &eqs = problem.equality_indices();
  ModelSlot obj_slot;
  std::vector<ModelSlot> con_slots(m);
  auto tr_params = acquisition::TrustRegionParams::defaults(d, 1);
  acquisition::TrustRegionState tr;
  tr.length = tr_params.length_init;
  tr.center = Vec::Constant(d, 0.5);
  const std::uint64_t fit_seed = config.repetition_seed ^ 0xB0B0B0B0ULL;

  int iter = 0;
  while (rec.termination.empty() && affordable()) {
    ++iter;
    const auto &log = ev.log();
    std::vector<int> ok_idx;
    for (int i = 0; i < static_cast<int>(log.size()); ++i)
      if (log[i].ok())
        ok_idx.push_back(i);
    const int n_ok = static_cast<int>(ok_idx.size());
    Mat X(n_ok, d);
    Vec y(n_ok);
    for (int r = 0; r < n_ok; ++r) {
      X.row(r) = log[ok_idx[r]].u.transpose();
      y[r] = log[ok_idx[r]].f;
    }
    rec.objective_model_sizes.push_back(n_ok);

    const int best_before = current_best(log);
    Vec x_next;
    try {
      if (kind != AcquisitionKind::constrained_ts) {
        rec.trust_region_lengths.push_back(0.0);
        auto model = fit_model(X, y, config, obj_slot, fit_seed);
        if (!model) {
          x_next = random_point(Vec::Zero(d), Vec::Ones(d), rng);
        } else {
          acquisition::AcquisitionSpec spec{ kind, y.minCoeff(),
                                             acquisition::Sense::minimize };
          x_next = acquisition::maximize_acquisition(*model, spec,
                                                     Vec::Zero(d),
                                                     Vec::Ones(d), rng,
                                                     config.maximize)
                       .x;
        }
      } else {
        if (best_before >= 0)
          tr.center = log[best_before].u;
        rec.trust_region_lengths.push_back(tr.length);

        // Constraint models see every evaluation; failed ones are imputed
        // with the worst value observed for that constraint.
        const int n_all = static_cast<int>(log.size());
        Mat Xa(n_all, d);
        for (int r = 0; r < n_all; ++r)
          Xa.row(r) = log[r].u.transpose();
        std::vector<gp::Surrogate> con_models;
        std::vector<acquisition::ConstraintModel> cons;
        bool ok = n_ok >= 2;
        for (int c = 0; ok && c < m; ++c) {
          const bool is_eq =
              std::find(eqs.begin(), eqs.end(), c) != eqs.end();
          double worst = 0.0;
          bool have = false;
          for (int i: ok_idx) {
            const double v = log[i].c[c];
            const bool worse = is_eq ? std::abs(v) > std::abs(worst) : v < worst;
            if (!have || worse)
              worst = v;
            have = true;
          }
          Vec yc(n_all);
          for (int r = 0; r < n_all; ++r)
            yc[r] = log[r].ok() ? log[r].c[c] : worst;
          auto cm = fit_model(Xa, yc, config, con_slots[c], fit_seed + c + 1);
          if (!cm) {
            ok = false;
            break;
          }
          con_models.push_back(std::move(*cm));
        }
        std::optional<gp::Surrogate> obj;
        if (ok)
          obj = fit_model(X, y, config, obj_slot, fit_seed);
        if (!ok || !obj) {
          Vec lo, hi;
          acquisition::trust_region_box(tr, lo, hi);
          x_next = random_point(lo, hi, rng);
        } else {
          for (int c = 0; c < m; ++c) {
            const bool is_eq =
                std::find(eqs.begin(), eqs.end(), c) != eqs.end();
            cons.push_back({ &con_models[c], is_eq, config.eq_band });
          }
          auto sel = acquisition::constrained_ts_select(*obj, cons, tr, 1, rng,
                                                        config.thompson);
          x_next = sel.points.front();
        }
      }
    } catch (const NumericalFailure &e) {
      rec.message = std::string("model fit failed, random step: ") + e.what();
      Vec lo = Vec::Zero(d), hi = Vec::Ones(d);
      if (kind == AcquisitionKind::constrained_ts)
        acquisition::trust_region_box(tr, lo, hi);
      x_next = random_point(lo, hi, rng);
    }

    try {
      ev.objective(clamp_unit(x_next));
    } catch (const BudgetExhausted &) {
      rec.termination = "budget";
      break;
    }
    const auto &entry = ev.log().back();
    if (kind == AcquisitionKind::constrained_ts) {
      const EvalEntry *inc =
          best_before >= 0 ? &ev.log()[best_before] : nullptr;
      tr = acquisition::update_trust_region(tr, improves(entry, inc),
                                            tr_params);
    }
    rec.rows.push_back(make_row(iter, ev, &entry));
    ledger.snapshot();
  }

  if (rec.termination.empty())
    rec.termination = "budget";
  rec.final_ledger = ledger.counts();
  rec.evaluations = ev.take_log();
  return rec;
}

}  // namespace aerobench::bo
