//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "aerobench/gp/kernel.hpp"

#include <cmath>

namespace aerobench::gp {
namespace {
  constexpr double kSqrt5 = 2.23606797749978969641;
}

const char *to_string(KernelFamily f) {
  return f == KernelFamily::squared_exponential ? "se" : "matern52";
}

KernelFamily kernel_family_from_string(const std::string &s) {
  if (s == "se" || s == "squared-exponential" || s == "rbf")
    return KernelFamily::squared_exponential;
  if (s == "matern52" || s == "matern-5/2")
    return KernelFamily::matern52;
  throw std::invalid_argument("unknown kernel family '" + s + "'");
}

void KernelSpec::validate() const {
  require(lengthscales.size() > 0, "kernel needs at least one lengthscale");
  require((lengthscales.array() > 0.0).all() && lengthscales.allFinite(),
          "kernel lengthscales must be positive");
  require(signal_variance > 0.0 && std::isfinite(signal_variance),
          "kernel signal variance must be positive");
}

KernelSpec KernelSpec::isotropic(KernelFamily family, int d,
                                 double lengthscale, double signal_variance) {
  KernelSpec k{ family, Vec::Constant(d, lengthscale), signal_variance };
  k.validate();
  return k;
}

double radial_value(KernelFamily family, double s2, double r2) {
  if (family == KernelFamily::squared_exponential)
    return s2 * std::exp(-0.5 * r2);
  const double r = std::sqrt(r2);
  return s2 * (1.0 + kSqrt5 * r + 5.0 / 3.0 * r2) * std::exp(-kSqrt5 * r);
}

double radial_factor(KernelFamily family, double s2, double r2) {
  if (family == KernelFamily::squared_exponential)
    return s2 * std::exp(-0.5 * r2);
  const double r = std::sqrt(r2);
  return s2 * 5.0 / 3.0 * (1.0 + kSqrt5 * r) * std::exp(-kSqrt5 * r);
}

double kernel_eval(const KernelSpec &spec, const Vec &x, const Vec &xp) {
  if (x.size() != spec.dim() || xp.size() != spec.dim())
    throw std::invalid_argument("kernel_eval: dimension mismatch");
  const double r2 =
      ((x - xp).array() / spec.lengthscales.array()).square().sum();
  return radial_value(spec.family, spec.signal_variance, r2);
}

Mat scaled_sq_dist(const Vec &ls, const Mat &X, const Mat &Y) {
  require(X.cols() == ls.size() && Y.cols() == ls.size(),
          "kernel_matrix: dimension mismatch");
  const Eigen::ArrayXd inv = ls.array().inverse();
  const Mat Xs = X * inv.matrix().asDiagonal();
  const Mat Ys = Y * inv.matrix().asDiagonal();
  Mat D = (-2.0 * Xs * Ys.transpose()).eval();
  D.colwise() += Xs.rowwise().squaredNorm();
  D.rowwise() += Ys.rowwise().squaredNorm().transpose();
  return D.cwiseMax(0.0);
}

Mat kernel_matrix(const KernelSpec &spec, const Mat &X, const Mat &Y) {
  Mat D = scaled_sq_dist(spec.lengthscales, X, Y);
  const double s2 = spec.signal_variance;
  if (spec.family == KernelFamily::squared_exponential)
    return s2 * (-0.5 * D.array()).exp().matrix();
  const Eigen::ArrayXXd r = D.array().sqrt();
  return (s2 * (1.0 + kSqrt5 * r + 5.0 / 3.0 * D.array())
          * (-kSqrt5 * r).exp())
      .matrix();
}

Mat kernel_matrix(const KernelSpec &spec, const Mat &X) {
  Mat K = kernel_matrix(spec, X, X);
  // Exact symmetry and diagonal, independent of the expansion round-off.
  K = 0.5 * (K + K.transpose()).eval();
  K.diagonal().setConstant(spec.signal_variance);
  return K;
}

Vec kernel_grad_x(const KernelSpec &spec, const Vec &x, const Vec &xp) {
  const Eigen::ArrayXd l2 = spec.lengthscales.array().square();
  const Eigen::ArrayXd diff = (x - xp).array();
  const double r2 = (diff.square() / l2).sum();
  return (-radial_factor(spec.family, spec.signal_variance, r2) * diff / l2)
      .matrix();
}

}  // namespace aerobench::gp
