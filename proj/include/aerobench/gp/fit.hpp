//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_GP_FIT_HPP
#define AEROBENCH_GP_FIT_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "aerobench/gp/gp_model.hpp"

namespace aerobench::gp {

// Log-space search box of the hyperparameters.
inline constexpr double kLengthscaleMin = 1e-3, kLengthscaleMax = 10.0;
inline constexpr double kSignalVarMin = 1e-4, kSignalVarMax = 1e2;
inline constexpr double kNoiseVarMin = 1e-8, kNoiseVarMax = 1e-1;

/// Affine map of targets to zero mean and unit variance. Constant targets
/// keep unit scale so they map to zero.
struct Standardizer {
  double offset = 0.0;
  double scale = 1.0;

  static Standardizer from(const Vec &y);
  Vec apply(const Vec &y) const { return (y.array() - offset) / scale; }
};

struct Hyperparameters {
  KernelSpec kernel;
  double noise_variance = 0.0;
};

struct FitOptions {
  KernelFamily family = KernelFamily::matern52;
  int n_starts = 8;
  std::uint64_t seed = 0x5eed;
  // When set, tau^2 is held at this value; otherwise it is learned.
  std::optional<double> fixed_noise;
  // Replaces the default first start (e.g. the previous fit of a BO run).
  std::optional<Hyperparameters> warm_start;
  int max_iter = 60;
};

struct FitResult {
  Hyperparameters hyper;
  double lml = 0.0;                 // at the returned hyperparameters
  std::vector<double> start_lml;    // at each initial point (-inf: failed)
  std::vector<double> final_lml;    // after each local ascent
};

/// Multi-start bounded log-space ascent of the log marginal likelihood.
/// `data` targets are used as given (standardize first if wanted); its
/// noise_variance is ignored in favour of `fixed_noise` or the learned
/// value. Throws NumericalFailure when every start fails.
FitResult fit_hyperparameters(const Dataset &data, const FitOptions &options);

/// A GP on standardized targets presented in the original units.
class Surrogate {
public:
  Surrogate(GpModel model, Standardizer st = {})
      : model_(std::move(model)), st_(st) { }

  const GpModel &model() const noexcept { return model_; }
  const Standardizer &standardizer() const noexcept { return st_; }
  int dim() const noexcept { return model_.dim(); }

  PosteriorMoments posterior(const Vec &x) const;
  void posterior(const Mat &Xs, Vec &mean, Vec &variance) const;
  PosteriorMoments posterior_with_gradient(const Vec &x, Vec &dmean,
                                           Vec &dvariance) const;
  PosteriorSample sample(const Mat &candidates, Rng &rng) const;

private:
  GpModel model_;
  Standardizer st_;
};

struct SurrogateFit {
  Surrogate surrogate;
  FitResult fit;
};

/// Standardizes the targets, fits hyperparameters, and builds the model.
SurrogateFit fit_surrogate(const Mat &X, const Vec &y,
                           const FitOptions &options);

}  // namespace aerobench::gp

#endif  // AEROBENCH_GP_FIT_HPP
