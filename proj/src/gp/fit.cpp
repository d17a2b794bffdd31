//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "aerobench/gp/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aerobench/optim/lbfgs.hpp"

namespace aerobench::gp {
namespace {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  double log_uniform(Rng &rng, double lo, double hi) {
    return std::log(lo) + uniform01(rng) * (std::log(hi) - std::log(lo));
  }

  struct Packing {
    KernelFamily family;
    int d;
    bool learn_noise;
    double fixed_noise;

    int size() const { return d + 1 + (learn_noise ? 1 : 0); }

    Hyperparameters unpack(const Vec &theta) const {
      Hyperparameters h;
      h.kernel.family = family;
      h.kernel.lengthscales = theta.head(d).array().exp();
      h.kernel.signal_variance = std::exp(theta[d]);
      h.noise_variance = learn_noise ? std::exp(theta[d + 1]) : fixed_noise;
      return h;
    }

    Vec pack(const Hyperparameters &h) const {
      Vec t(size());
      t.head(d) = h.kernel.lengthscales.array().log();
      t[d] = std::log(h.kernel.signal_variance);
      if (learn_noise)
        t[d + 1] = std::log(h.noise_variance);
      return t;
    }

    void bounds(Vec &lo, Vec &hi) const {
      lo.resize(size());
      hi.resize(size());
      lo.head(d).setConstant(std::log(kLengthscaleMin));
      hi.head(d).setConstant(std::log(kLengthscaleMax));
      lo[d] = std::log(kSignalVarMin);
      hi[d] = std::log(kSignalVarMax);
      if (learn_noise) {
        lo[d + 1] = std::log(kNoiseVarMin);
        hi[d + 1] = std::log(kNoiseVarMax);
      }
    }
  };
}  // namespace

Standardizer Standardizer::from(const Vec &y) {
  Standardizer s;
  if (y.size() == 0)
    return s;
  s.offset = y.mean();
  const double var = (y.array() - s.offset).square().mean();
  const double sd = std::sqrt(var);
  s.scale = sd > 1e-12 * std::max(1.0, std::abs(s.offset)) ? sd : 1.0;
  return s;
}

FitResult fit_hyperparameters(const Dataset &data, const FitOptions &options) {
  require(data.size() >= 2, "fit_hyperparameters: need at least two points");
  require(options.n_starts >= 1, "fit_hyperparameters: need a start");
  data.validate();
  const int d = data.dim();
  const Packing pk{ options.family, d, !options.fixed_noise.has_value(),
                    options.fixed_noise.value_or(0.0) };
  Vec lo, hi;
  pk.bounds(lo, hi);

  Dataset work = data;
  auto lml_at = [&](const Vec &theta, Vec *grad) {
    const auto h = pk.unpack(theta);
    work.noise_variance = h.noise_variance;
    return log_marginal_likelihood(h.kernel, work, grad, pk.learn_noise);
  };
  auto safe_lml = [&](const Vec &theta) {
    try {
      const double v = lml_at(theta, nullptr);
      return std::isfinite(v) ? v : kNegInf;
    } catch (const NumericalFailure &) {
      return kNegInf;
    }
  };

  // Deterministic start schedule: the warm start (or a default), then draws
  // from a fixed-seed stream inside a moderate sub-box.
  std::vector<Vec> starts;
  {
    Hyperparameters h0;
    if (options.warm_start && options.warm_start->kernel.dim() == d) {
      h0 = *options.warm_start;
      h0.kernel.family = options.family;
      if (pk.learn_noise)
        h0.noise_variance =
            std::clamp(h0.noise_variance, kNoiseVarMin, kNoiseVarMax);
    } else {
      h0.kernel = KernelSpec::isotropic(
          options.family, d, std::clamp(0.3 * std::sqrt(d), 0.05, 5.0), 1.0);
      h0.noise_variance = pk.learn_noise ? 1e-4 : pk.fixed_noise;
    }
    starts.push_back(optim::project(pk.pack(h0), lo, hi));
  }
  Rng rng(options.seed);
  while (static_cast<int>(starts.size()) < options.n_starts) {
    Vec t(pk.size());
    for (int j = 0; j < d; ++j)
      t[j] = log_uniform(rng, 0.05, 2.0) + 0.5 * std::log(d);
    t[d] = log_uniform(rng, 0.3, 3.0);
    if (pk.learn_noise)
      t[d + 1] = log_uniform(rng, 1e-6, 1e-2);
    starts.push_back(optim::project(t, lo, hi));
  }

  FitResult res;
  res.lml = kNegInf;
  Vec best_theta;
  optim::LbfgsOptions lo_opt;
  lo_opt.maxiter = options.max_iter;
  lo_opt.gtol = 1e-5;
  lo_opt.ftol = 1e-10;
  for (const Vec &t0: starts) {
    const double l0 = safe_lml(t0);
    res.start_lml.push_back(l0);
    if (!std::isfinite(l0)) {
      res.final_lml.push_back(kNegInf);
      continue;
    }
    optim::LbfgsCallbacks cb;
    cb.value = [&](const Vec &t) { return -safe_lml(t); };
    cb.gradient = [&](const Vec &t) -> std::optional<Vec> {
      try {
        Vec g;
        lml_at(t, &g);
        if (!g.allFinite())
          return std::nullopt;
        return Vec(-g);
      } catch (const NumericalFailure &) {
        return std::nullopt;
      }
    };
    const auto r = optim::minimize_box(cb, t0, lo, hi, lo_opt);
    const double lf = -r.f;
    res.final_lml.push_back(lf);
    if (lf > res.lml) {
      res.lml = lf;
      best_theta = r.x;
    }
  }
  if (!std::isfinite(res.lml)) {
    std::vector<double> tried(kJitterLevels.begin(), kJitterLevels.end());
    throw NumericalFailure("hyperparameter fit: every start failed to "
                           "factorize",
                           tried);
  }
  res.hyper = pk.unpack(best_theta);
  return res;
}

PosteriorMoments Surrogate::posterior(const Vec &x) const {
  auto m = model_.posterior(x);
  return { st_.offset + st_.scale * m.mean, st_.scale * st_.scale * m.variance };
}

void Surrogate::posterior(const Mat &Xs, Vec &mean, Vec &variance) const {
  model_.posterior(Xs, mean, variance);
  mean = (mean.array() * st_.scale + st_.offset).matrix();
  variance *= st_.scale * st_.scale;
}

PosteriorMoments Surrogate::posterior_with_gradient(const Vec &x, Vec &dmean,
                                                    Vec &dvariance) const {
  auto m = model_.posterior_with_gradient(x, dmean, dvariance);
  dmean *= st_.scale;
  dvariance *= st_.scale * st_.scale;
  return { st_.offset + st_.scale * m.mean, st_.scale * st_.scale * m.variance };
}

PosteriorSample Surrogate::sample(const Mat &candidates, Rng &rng) const {
  auto s = sample_posterior(model_, candidates, rng);
  s.values = (s.values.array() * st_.scale + st_.offset).matrix();
  return s;
}

SurrogateFit fit_surrogate(const Mat &X, const Vec &y,
                           const FitOptions &options) {
  const auto st = Standardizer::from(y);
  Dataset data{ X, st.apply(y), 0.0 };
  auto fit = fit_hyperparameters(data, options);
  data.noise_variance = fit.hyper.noise_variance;
  return { Surrogate(GpModel(fit.hyper.kernel, std::move(data)), st),
           std::move(fit) };
}

}  // namespace aerobench::gp
