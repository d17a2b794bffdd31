//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_GP_GP_MODEL_HPP
#define AEROBENCH_GP_GP_MODEL_HPP

#include <vector>

#include "aerobench/common.hpp"
#include "aerobench/gp/kernel.hpp"

namespace aerobench::gp {

/// Jitter levels tried in order when factorizing K + tau^2 I.
inline const std::vector<double> kJitterLevels = { 0.0,  1e-10, 1e-9, 1e-8,
                                                   1e-7, 1e-6 };

struct Dataset {
  Mat X;  // n x d, rows in [0,1]^d
  Vec y;
  double noise_variance = 0.0;

  int size() const noexcept { return static_cast<int>(X.rows()); }
  int dim() const noexcept { return static_cast<int>(X.cols()); }
  void validate() const;
};

struct PosteriorMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Cholesky factor of K + (tau^2 + jitter) I, with the smallest jitter of
/// kJitterLevels that yields a well-conditioned factor.
struct Factorization {
  Eigen::LLT<Mat> llt;
  double jitter = 0.0;
};

/// Throws NumericalFailure (carrying the attempted levels) when every
/// jitter level fails. `K` must already include the noise term.
Factorization factorize_with_jitter(const Mat &K);

/// Exact zero-mean GP posterior. Immutable after construction.
class GpModel {
public:
  GpModel(KernelSpec kernel, Dataset data);

  const KernelSpec &kernel() const noexcept { return kernel_; }
  const Dataset &data() const noexcept { return data_; }
  int dim() const noexcept { return kernel_.dim(); }
  int size() const noexcept { return data_.size(); }
  double jitter() const noexcept { return jitter_; }
  Mat chol() const { return L_; }
  const Vec &alpha() const noexcept { return alpha_; }

  PosteriorMoments posterior(const Vec &x) const;

  /// Moments at every row of Xs.
  void posterior(const Mat &Xs, Vec &mean, Vec &variance) const;

  /// Moments and their gradients with respect to x.
  PosteriorMoments posterior_with_gradient(const Vec &x, Vec &dmean,
                                           Vec &dvariance) const;

  /// Joint posterior covariance over the rows of Xs.
  Mat posterior_covariance(const Mat &Xs) const;

  double log_marginal_likelihood() const noexcept { return lml_; }

private:
  KernelSpec kernel_;
  Dataset data_;
  Mat L_;
  Vec alpha_;
  double jitter_ = 0.0;
  double lml_ = 0.0;
};

/// Log marginal likelihood of `data` under `kernel` and its gradient with
/// respect to (log l_1..log l_d, log sigma_f^2[, log tau^2]). The noise
/// entry is included when `with_noise`.
double log_marginal_likelihood(const KernelSpec &kernel, const Dataset &data,
                               Vec *grad, bool with_noise);

struct PosteriorSample {
  Vec values;
  bool marginal_fallback = false;  // joint factorization failed
  double jitter = 0.0;             // relative jitter used on the covariance
};

/// One joint draw of the latent function over the rows of `candidates`.
PosteriorSample sample_posterior(const GpModel &model, const Mat &candidates,
                                 Rng &rng);

}  // namespace aerobench::gp

#endif  // AEROBENCH_GP_GP_MODEL_HPP
