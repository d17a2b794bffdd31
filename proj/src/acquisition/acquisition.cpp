//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "aerobench/acquisition/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/random/sobol.hpp>

#include "aerobench/optim/lbfgs.hpp"

namespace aerobench::acquisition {
namespace {
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  constexpr double kInvSqrt2Pi = 0.39894228040143267794;

  // Improvement-direction offset and z-score: minimizing rewards xi - mu.
  double signed_gap(const PosteriorMoments &m, double xi, Sense sense) {
    return sense == Sense::minimize ? xi - m.mean : m.mean - xi;
  }
}  // namespace

const char *to_string(AcquisitionKind k) {
  switch (k) {
  case AcquisitionKind::ei:
    return "ei";
  case AcquisitionKind::pi:
    return "pi";
  case AcquisitionKind::constrained_ts:
    return "constrained-ts";
  }
  return "?";
}

AcquisitionKind acquisition_kind_from_string(const std::string &s) {
  if (s == "ei")
    return AcquisitionKind::ei;
  if (s == "pi")
    return AcquisitionKind::pi;
  if (s == "constrained-ts" || s == "ts" || s == "scbo")
    return AcquisitionKind::constrained_ts;
  throw std::invalid_argument("unknown acquisition '" + s + "'");
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }
double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double expected_improvement(const PosteriorMoments &m, double xi,
                            Sense sense) {
  const double gap = signed_gap(m, xi, sense);
  const double sigma = std::sqrt(std::max(0.0, m.variance));
  if (sigma == 0.0)
    return std::max(0.0, gap);
  const double z = gap / sigma;
  const double ei = gap * normal_cdf(z) + sigma * normal_pdf(z);
  return std::max(ei, std::max(0.0, gap));
}

double probability_of_improvement(const PosteriorMoments &m, double xi,
                                  Sense sense) {
  const double gap = signed_gap(m, xi, sense);
  const double sigma = std::sqrt(std::max(0.0, m.variance));
  if (sigma == 0.0)
    return gap > 0.0 ? 1.0 : 0.0;
  return normal_cdf(gap / sigma);
}

double acquisition_value(const Surrogate &model, const AcquisitionSpec &spec,
                         const Vec &x, Vec *grad) {
  require(spec.kind != AcquisitionKind::constrained_ts,
          "acquisition_value: Thompson sampling has no closed form");
  require(std::isfinite(spec.xi), "acquisition: target must be finite");
  Vec dmu, dvar;
  const auto m = grad ? model.posterior_with_gradient(x, dmu, dvar)
                      : model.posterior(x);
  const bool ei = spec.kind == AcquisitionKind::ei;
  const double value = ei ? expected_improvement(m, spec.xi, spec.sense)
                          : probability_of_improvement(m, spec.xi, spec.sense);
  if (!grad)
    return value;

  const double sigma = std::sqrt(std::max(0.0, m.variance));
  const double sgn = spec.sense == Sense::minimize ? -1.0 : 1.0;  // dgap/dmu
  grad->setZero(x.size());
  if (sigma <= 1e-300)
    return value;
  const double gap = signed_gap(m, spec.xi, spec.sense);
  const double z = gap / sigma;
  const Vec dsigma = dvar / (2.0 * sigma);
  if (ei) {
    // dEI/dgap = Phi(z), dEI/dsigma = phi(z)
    *grad = sgn * normal_cdf(z) * dmu + normal_pdf(z) * dsigma;
  } else {
    // PI = Phi(gap / sigma)
    *grad = normal_pdf(z) * (sgn * dmu / sigma - z / sigma * dsigma);
  }
  return value;
}

Mat sobol_points(int n, const Vec &lo, const Vec &hi, Rng &rng) {
  const int d = static_cast<int>(lo.size());
  require(n >= 1 && d >= 1, "sobol_points: need n >= 1 and d >= 1");
  boost::random::sobol eng(static_cast<std::size_t>(d));
  Vec shift(d);
  for (int j = 0; j < d; ++j)
    shift[j] = uniform01(rng);
  Mat P(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      double u = static_cast<double>(eng()) * 0x1.0p-64 + shift[j];
      u -= std::floor(u);
      P(i, j) = lo[j] + u * (hi[j] - lo[j]);
    }
  }
  return P;
}

AcquisitionOptimum maximize_acquisition(const Surrogate &model,
                                        const AcquisitionSpec &spec,
                                        const Vec &lo, const Vec &hi, Rng &rng,
                                        const MaximizeOptions &opt) {
  require(spec.kind != AcquisitionKind::constrained_ts,
          "maximize_acquisition: use constrained_ts_select for Thompson "
          "sampling");
  require(std::isfinite(spec.xi), "acquisition: target must be finite");
  const int d = model.dim();
  const int n = opt.candidates_per_dim * d;
  const Mat P = sobol_points(n, lo, hi, rng);

  Vec mean, var;
  model.posterior(P, mean, var);
  Vec vals(n);
  for (int i = 0; i < n; ++i) {
    const PosteriorMoments m{ mean[i], var[i] };
    vals[i] = spec.kind == AcquisitionKind::ei
                  ? expected_improvement(m, spec.xi, spec.sense)
                  : probability_of_improvement(m, spec.xi, spec.sense);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const int k = std::min(opt.n_polish, n);
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](int a, int b) {
                      return vals[a] > vals[b] || (vals[a] == vals[b] && a < b);
                    });

  AcquisitionOptimum best;
  best.x = P.row(order[0]).transpose();
  best.value = vals[order[0]];
  best.best_sweep_value = best.value;

  optim::LbfgsOptions lo_opt;
  lo_opt.maxiter = opt.polish_iter;
  lo_opt.gtol = 1e-9;
  lo_opt.ftol = 1e-12;
  optim::LbfgsCallbacks cb;
  cb.value = [&](const Vec &x) { return -acquisition_value(model, spec, x); };
  cb.gradient = [&](const Vec &x) -> std::optional<Vec> {
    Vec g;
    acquisition_value(model, spec, x, &g);
    return Vec(-g);
  };
  for (int i = 0; i < k; ++i) {
    const Vec x0 = P.row(order[i]).transpose();
    const auto r = optim::minimize_box(cb, x0, lo, hi, lo_opt);
    if (-r.f > best.value) {
      best.value = -r.f;
      best.x = r.x;
    }
  }
  return best;
}

TrustRegionParams TrustRegionParams::defaults(int d, int batch) {
  require(d >= 1 && batch >= 1, "trust region: need d >= 1 and batch >= 1");
  TrustRegionParams p;
  p.failure_tolerance = (d + batch - 1) / batch;
  return p;
}

TrustRegionState update_trust_region(TrustRegionState tr, bool step_improved,
                                     const TrustRegionParams &params) {
  tr.restart = false;
  if (step_improved) {
    ++tr.success_count;
    tr.failure_count = 0;
  } else {
    ++tr.failure_count;
    tr.success_count = 0;
  }
  if (tr.success_count >= params.success_tolerance) {
    tr.length = std::min(2.0 * tr.length, params.length_max);
    tr.success_count = 0;
  } else if (tr.failure_count >= params.failure_tolerance) {
    tr.length /= 2.0;
    tr.failure_count = 0;
  }
  if (tr.length < params.length_min) {
    tr.restart = true;
    tr.length = params.length_init;
    tr.success_count = tr.failure_count = 0;
  }
  return tr;
}

void trust_region_box(const TrustRegionState &tr, Vec &lo, Vec &hi) {
  lo = (tr.center.array() - 0.5 * tr.length).max(0.0).matrix();
  hi = (tr.center.array() + 0.5 * tr.length).min(1.0).matrix();
}

TsSelection constrained_ts_select(const Surrogate &objective,
                                  const std::vector<ConstraintModel> &cons,
                                  const TrustRegionState &tr, int batch,
                                  Rng &rng, const TsOptions &opt) {
  const int d = objective.dim();
  require(batch >= 1, "constrained_ts_select: batch must be positive");
  require(tr.center.size() == d, "constrained_ts_select: center dimension");
  for (const auto &c: cons)
    require(c.model && c.model->dim() == d,
            "constrained_ts_select: constraint model dimension");
  const int n = opt.n_candidates > 0 ? opt.n_candidates
                                     : std::min(5000, 200 * d);
  Vec lo, hi;
  trust_region_box(tr, lo, hi);
  const Mat P = sobol_points(n, lo, hi, rng);

  TsSelection out;
  auto fs = objective.sample(P, rng);
  out.marginal_fallback = fs.marginal_fallback;
  Vec violation = Vec::Zero(n);
  for (const auto &c: cons) {
    auto cs = c.model->sample(P, rng);
    out.marginal_fallback = out.marginal_fallback || cs.marginal_fallback;
    for (int i = 0; i < n; ++i) {
      const double v = c.equality ? std::abs(cs.values[i]) - c.band
                                  : -cs.values[i];
      violation[i] += std::max(0.0, v);
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const int n_feasible = static_cast<int>((violation.array() <= 0.0).count());
  out.any_sampled_feasible = n_feasible > 0;
  // Feasible candidates first by objective, then infeasible by violation.
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const bool fa = violation[a] <= 0.0, fb = violation[b] <= 0.0;
    if (fa != fb)
      return fa;
    if (fa)
      return fs.values[a] < fs.values[b];
    return violation[a] < violation[b];
  });
  for (int i = 0; i < std::min(batch, n); ++i)
    out.points.push_back(clamp_unit(P.row(order[i]).transpose()));
  return out;
}

}  // namespace aerobench::acquisition
