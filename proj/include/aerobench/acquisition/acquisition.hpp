//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_ACQUISITION_ACQUISITION_HPP
#define AEROBENCH_ACQUISITION_ACQUISITION_HPP

#include <string>
#include <vector>

#include "aerobench/common.hpp"
#include "aerobench/gp/fit.hpp"
#include "aerobench/gp/gp_model.hpp"

namespace aerobench::acquisition {

using gp::PosteriorMoments;
using gp::Surrogate;

enum class AcquisitionKind { ei, pi, constrained_ts };
enum class Sense { minimize, maximize };

const char *to_string(AcquisitionKind k);
AcquisitionKind acquisition_kind_from_string(const std::string &s);

struct AcquisitionSpec {
  AcquisitionKind kind = AcquisitionKind::ei;
  double xi = 0.0;  // incumbent / target value
  Sense sense = Sense::minimize;
};

double normal_cdf(double z);
double normal_pdf(double z);

/// E[max(0, xi - Y)] when minimizing, E[max(0, Y - xi)] when maximizing.
double expected_improvement(const PosteriorMoments &m, double xi,
                            Sense sense = Sense::minimize);

/// P(Y < xi) when minimizing, P(Y > xi) when maximizing.
double probability_of_improvement(const PosteriorMoments &m, double xi,
                                  Sense sense = Sense::minimize);

/// EI or PI at x under the surrogate, with its gradient when `grad` is set.
double acquisition_value(const Surrogate &model, const AcquisitionSpec &spec,
                         const Vec &x, Vec *grad = nullptr);

/// n points of a scrambled (randomly shifted) Sobol sequence in [lo, hi].
Mat sobol_points(int n, const Vec &lo, const Vec &hi, Rng &rng);

struct MaximizeOptions {
  int candidates_per_dim = 2048;
  int n_polish = 5;
  int polish_iter = 50;
};

struct AcquisitionOptimum {
  Vec x;
  double value = 0.0;
  double best_sweep_value = 0.0;  // best raw candidate before polishing
};

/// Quasi-random sweep of the box followed by a local polish of the best
/// few candidates. EI/PI only.
AcquisitionOptimum maximize_acquisition(const Surrogate &model,
                                        const AcquisitionSpec &spec,
                                        const Vec &lo, const Vec &hi, Rng &rng,
                                        const MaximizeOptions &opt = {});

struct TrustRegionParams {
  double length_init = 0.8;
  double length_min = 0x1.0p-7;
  double length_max = 1.6;
  int success_tolerance = 3;
  int failure_tolerance = 1;

  static TrustRegionParams defaults(int d, int batch = 1);
};

struct TrustRegionState {
  Vec center;
  double length = 0.8;
  int success_count = 0;
  int failure_count = 0;
  bool restart = false;  // set when the edge fell below length_min
};

/// Counter bookkeeping: doubles L after `success_tolerance` consecutive
/// successes, halves it after `failure_tolerance` consecutive failures, and
/// flags a restart (L reset to length_init) once L drops below length_min.
TrustRegionState update_trust_region(TrustRegionState tr, bool step_improved,
                                     const TrustRegionParams &params);

/// The trust-region box intersected with [0,1]^d.
void trust_region_box(const TrustRegionState &tr, Vec &lo, Vec &hi);

/// Feasibility semantics of a modelled constraint: c >= 0, or |c| <= band.
struct ConstraintModel {
  const Surrogate *model;
  bool equality = false;
  double band = 1e-3;
};

struct TsOptions {
  int n_candidates = 0;  // 0: min(5000, 200 d)
};

struct TsSelection {
  std::vector<Vec> points;
  bool any_sampled_feasible = false;
  bool marginal_fallback = false;
};

/// Thompson-sampling selection inside the trust region: one joint posterior
/// draw per model over a Sobol candidate set; the sampled-feasible
/// candidates with the lowest sampled objective win, or, when none is
/// sampled-feasible, those with the least summed sampled violation.
TsSelection constrained_ts_select(const Surrogate &objective,
                                  const std::vector<ConstraintModel> &cons,
                                  const TrustRegionState &tr, int batch,
                                  Rng &rng, const TsOptions &opt = {});

}  // namespace aerobench::acquisition

#endif  // AEROBENCH_ACQUISITION_ACQUISITION_HPP
