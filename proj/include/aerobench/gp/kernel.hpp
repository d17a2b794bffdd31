//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_GP_KERNEL_HPP
#define AEROBENCH_GP_KERNEL_HPP

#include <string>

#include "aerobench/common.hpp"

namespace aerobench::gp {

enum class KernelFamily { squared_exponential, matern52 };

const char *to_string(KernelFamily f);
KernelFamily kernel_family_from_string(const std::string &s);

/// Stationary ARD kernel k(x, x') = signal_variance * phi(r),
/// r^2 = sum_j ((x_j - x'_j) / l_j)^2.
struct KernelSpec {
  KernelFamily family = KernelFamily::matern52;
  Vec lengthscales;
  double signal_variance = 1.0;

  int dim() const noexcept { return static_cast<int>(lengthscales.size()); }
  void validate() const;

  static KernelSpec isotropic(KernelFamily family, int d, double lengthscale,
                              double signal_variance);
};

double kernel_eval(const KernelSpec &spec, const Vec &x, const Vec &xp);

/// Cross-covariance between the rows of X (n x d) and the rows of Y (m x d).
Mat kernel_matrix(const KernelSpec &spec, const Mat &X, const Mat &Y);
Mat kernel_matrix(const KernelSpec &spec, const Mat &X);

/// Pairwise squared scaled distances r^2 between rows, for reuse across the
/// hyperparameter derivatives.
Mat scaled_sq_dist(const Vec &lengthscales, const Mat &X, const Mat &Y);

/// Radial factor a(r) such that dk/dx = -a(r) * (x - x') / l^2 and
/// dk/d(log l_j) = a(r) * (x_j - x'_j)^2 / l_j^2.
double radial_factor(KernelFamily family, double signal_variance, double r2);
double radial_value(KernelFamily family, double signal_variance, double r2);

/// Gradient of k(x, x') with respect to x.
Vec kernel_grad_x(const KernelSpec &spec, const Vec &x, const Vec &xp);

}  // namespace aerobench::gp

#endif  // AEROBENCH_GP_KERNEL_HPP
