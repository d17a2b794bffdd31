//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "aerobench/gp/gp_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace aerobench::gp {
namespace {
  // Pivots below this fraction of the largest diagonal entry are treated as
  // a failed factorization: the matrix is singular to working precision.
  constexpr double kMinRelativePivot = 1e-13;

  bool acceptable(const Eigen::LLT<Mat> &llt, double max_diag) {
    if (llt.info() != Eigen::Success)
      return false;
    const Mat &L = llt.matrixLLT();
    const double floor = kMinRelativePivot * max_diag;
    for (Eigen::Index i = 0; i < L.rows(); ++i) {
      const double p = L(i, i) * L(i, i);
      if (!std::isfinite(p) || p < floor)
        return false;
    }
    return true;
  }

  constexpr Eigen::Index kBatchChunk = 4096;
}  // namespace

void Dataset::validate() const {
  require(X.rows() == y.size(), "dataset: row count of X must equal length of y");
  require(noise_variance >= 0.0 && std::isfinite(noise_variance),
          "dataset: noise variance must be non-negative");
  require(y.allFinite(), "dataset: targets must be finite");
  if (X.size() > 0)
    require((X.array() >= 0.0).all() && (X.array() <= 1.0).all(),
            "dataset: sites must lie in the unit box");
}

Factorization factorize_with_jitter(const Mat &K) {
  const double max_diag = K.size() ? K.diagonal().maxCoeff() : 1.0;
  std::vector<double> tried;
  for (double j: kJitterLevels) {
    tried.push_back(j);
    Mat Kj = K;
    Kj.diagonal().array() += j;
    Eigen::LLT<Mat> llt(Kj);
    if (acceptable(llt, max_diag))
      return { std::move(llt), j };
  }
  throw NumericalFailure("covariance matrix is not positive definite after "
                         "jitter escalation",
                         tried);
}

GpModel::GpModel(KernelSpec kernel, Dataset data)
    : kernel_(std::move(kernel)), data_(std::move(data)) {
  kernel_.validate();
  data_.validate();
  require(data_.size() == 0 || data_.dim() == kernel_.dim(),
          "GpModel: kernel and data dimensions differ");
  const int n = data_.size();
  if (n == 0) {
    data_.X.resize(0, kernel_.dim());
    alpha_.resize(0);
    L_.resize(0, 0);
    return;
  }
  Mat K = kernel_matrix(kernel_, data_.X);
  K.diagonal().array() += data_.noise_variance;
  auto fac = factorize_with_jitter(K);
  jitter_ = fac.jitter;
  L_ = fac.llt.matrixL();
  alpha_ = fac.llt.solve(data_.y);
  lml_ = -0.5 * data_.y.dot(alpha_) - L_.diagonal().array().log().sum()
         - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

PosteriorMoments GpModel::posterior(const Vec &x) const {
  require(x.size() == dim(), "posterior: dimension mismatch");
  if (size() == 0)
    return { 0.0, kernel_.signal_variance };
  Mat xs = x.transpose();
  Vec m, v;
  posterior(xs, m, v);
  return { m[0], v[0] };
}

void GpModel::posterior(const Mat &Xs, Vec &mean, Vec &variance) const {
  require(Xs.cols() == dim(), "posterior: dimension mismatch");
  const Eigen::Index m = Xs.rows();
  mean.resize(m);
  variance.resize(m);
  if (size() == 0) {
    mean.setZero();
    variance.setConstant(kernel_.signal_variance);
    return;
  }
  const auto L = L_.triangularView<Eigen::Lower>();
  for (Eigen::Index s = 0; s < m; s += kBatchChunk) {
    const Eigen::Index len = std::min(kBatchChunk, m - s);
    Mat Ks = kernel_matrix(kernel_, data_.X, Xs.middleRows(s, len));
    mean.segment(s, len) = Ks.transpose() * alpha_;
    L.solveInPlace(Ks);
    variance.segment(s, len) =
        (kernel_.signal_variance - Ks.colwise().squaredNorm().array())
            .cwiseMax(0.0)
            .matrix()
            .transpose();
  }
}

PosteriorMoments GpModel::posterior_with_gradient(const Vec &x, Vec &dmean,
                                                  Vec &dvariance) const {
  require(x.size() == dim(), "posterior: dimension mismatch");
  const int n = size(), d = dim();
  dmean = Vec::Zero(d);
  dvariance = Vec::Zero(d);
  if (n == 0)
    return { 0.0, kernel_.signal_variance };
  Vec k(n);
  Mat J(d, n);
  for (int i = 0; i < n; ++i) {
    const Vec xi = data_.X.row(i).transpose();
    k[i] = kernel_eval(kernel_, x, xi);
    J.col(i) = kernel_grad_x(kernel_, x, xi);
  }
  const auto L = L_.triangularView<Eigen::Lower>();
  const Vec v = L.solve(k);
  const Vec w = L.transpose().solve(v);
  const double var_raw = kernel_.signal_variance - v.squaredNorm();
  dmean = J * alpha_;
  if (var_raw > 0.0)
    dvariance = -2.0 * J * w;
  return { k.dot(alpha_), std::max(0.0, var_raw) };
}

Mat GpModel::posterior_covariance(const Mat &Xs) const {
  Mat C = kernel_matrix(kernel_, Xs);
  if (size() == 0)
    return C;
  Mat V = kernel_matrix(kernel_, data_.X, Xs);
  L_.triangularView<Eigen::Lower>().solveInPlace(V);
  C.noalias() -= V.transpose() * V;
  return C;
}

double log_marginal_likelihood(const KernelSpec &kernel, const Dataset &data,
                               Vec *grad, bool with_noise) {
  const int n = data.size(), d = kernel.dim();
  const double s2 = kernel.signal_variance;
  Mat D = scaled_sq_dist(kernel.lengthscales, data.X, data.X);
  D.diagonal().setZero();
  Mat Kf(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      Kf(i, j) = radial_value(kernel.family, s2, D(i, j));
  Mat K = Kf;
  K.diagonal().array() += data.noise_variance;
  auto fac = factorize_with_jitter(K);
  const Vec alpha = fac.llt.solve(data.y);
  const Mat &LL = fac.llt.matrixLLT();
  const double lml = -0.5 * data.y.dot(alpha)
                     - LL.diagonal().array().log().sum()
                     - 0.5 * n * std::log(2.0 * std::numbers::pi);
  if (!grad)
    return lml;

  // d lml / d theta = 1/2 tr((alpha alpha' - K^-1) dK/dtheta)
  Mat W = fac.llt.solve(Mat::Identity(n, n));
  W = (alpha * alpha.transpose() - W).eval();
  grad->resize(d + 1 + (with_noise ? 1 : 0));
  Mat A(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      A(i, j) = radial_factor(kernel.family, s2, D(i, j));
  const Mat WA = W.cwiseProduct(A);
  for (int k = 0; k < d; ++k) {
    const Eigen::ArrayXd xk = data.X.col(k).array() / kernel.lengthscales[k];
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      acc += (WA.col(j).array() * (xk - xk[j]).square()).sum();
    (*grad)[k] = 0.5 * acc;
  }
  (*grad)[d] = 0.5 * W.cwiseProduct(Kf).sum();
  if (with_noise)
    (*grad)[d + 1] = 0.5 * data.noise_variance * W.trace();
  return lml;
}

PosteriorSample sample_posterior(const GpModel &model, const Mat &candidates,
                                 Rng &rng) {
  const Eigen::Index m = candidates.rows();
  require(m >= 1, "sample_posterior: need at least one candidate");
  Vec mean, var;
  model.posterior(candidates, mean, var);
  Vec z(m);
  for (Eigen::Index i = 0; i < m; ++i)
    z[i] = standard_normal(rng);

  PosteriorSample out;
  Mat C = model.posterior_covariance(candidates);
  const double scale =
      std::max(C.diagonal().maxCoeff(), 1e-12 * model.kernel().signal_variance);
  for (double j: kJitterLevels) {
    Mat Cj = C;
    Cj.diagonal().array() += j * scale;
    Eigen::LLT<Mat> llt(Cj);
    if (llt.info() == Eigen::Success && llt.matrixLLT().allFinite()) {
      out.values = mean + llt.matrixL() * z;
      out.jitter = j;
      return out;
    }
  }
  out.marginal_fallback = true;
  out.values = mean + (var.array().sqrt() * z.array()).matrix();
  return out;
}

}  // namespace aerobench::gp
