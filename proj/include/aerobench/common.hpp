//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_COMMON_HPP
#define AEROBENCH_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace aerobench {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// All randomness flows through explicitly passed engines of this type.
using Rng = std::mt19937_64;

/// Raised when a factorization or solve cannot be completed even after the
/// bounded recovery steps (jitter escalation, restarts) have been exhausted.
class NumericalFailure : public std::runtime_error {
public:
  NumericalFailure(const std::string &what, std::vector<double> attempted)
      : std::runtime_error(what), attempted_(std::move(attempted)) { }

  const std::vector<double> &attempted_jitter() const noexcept {
    return attempted_;
  }

private:
  std::vector<double> attempted_;
};

// Portable draws: the standard distributions are implementation-defined, so
// reproducible artifacts use these instead.
inline double uniform01(Rng &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double standard_normal(Rng &rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0)
    u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1))
         * std::cos(6.283185307179586476925 * u2);
}

inline void require(bool cond, const std::string &msg) {
  if (!cond)
    throw std::invalid_argument(msg);
}

inline bool inside_unit_box(const Vec &u, double slack = 0.0) {
  return (u.array() >= -slack).all() && (u.array() <= 1.0 + slack).all();
}

inline Vec clamp_to(const Vec &u, const Vec &lo, const Vec &hi) {
  return u.cwiseMax(lo).cwiseMin(hi);
}

inline Vec clamp_unit(const Vec &u) {
  return u.cwiseMax(0.0).cwiseMin(1.0);
}

}  // namespace aerobench

#endif  // AEROBENCH_COMMON_HPP
