//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "aerobench/problems/airfoil.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace aerobench::problems {
namespace {
  // Closed trailing edge variant of the four-digit thickness polynomial,
  // for unit thickness ratio (half thickness).
  double raw_half_thickness(double s) {
    return 5.0
           * (0.2969 * std::sqrt(s) - 0.1260 * s - 0.3516 * s * s
              + 0.2843 * s * s * s - 0.1036 * s * s * s * s);
  }

  template <class Fn>
  double golden_max(Fn &&fn, double a, double b) {
    constexpr double kInvPhi = 0.6180339887498949;
    double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
    double fc = fn(c), fd = fn(d);
    while (b - a > 1e-12) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kInvPhi * (b - a);
        fc = fn(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kInvPhi * (b - a);
        fd = fn(d);
      }
    }
    return std::max(fc, fd);
  }

  template <class Fn>
  double scan_and_refine_max(Fn &&fn) {
    constexpr int kScan = 500;
    int best = 0;
    double fbest = -1e300;
    for (int i = 0; i <= kScan; ++i) {
      const double v = fn(static_cast<double>(i) / kScan);
      if (v > fbest) {
        fbest = v;
        best = i;
      }
    }
    const double a = std::max(0, best - 1) / static_cast<double>(kScan);
    const double b = std::min(kScan, best + 1) / static_cast<double>(kScan);
    return std::max(fbest, golden_max(fn, a, b));
  }
}  // namespace

double hicks_henne_bump(double s, double peak, double exponent) {
  if (s <= 0.0 || s >= 1.0)
    return 0.0;
  const double e = std::log(0.5) / std::log(peak);
  return std::pow(std::sin(std::numbers::pi * std::pow(s, e)), exponent);
}

AirfoilShape::AirfoilShape(double thickness_ratio, double max_camber,
                           double camber_position, int n_bumps,
                           int n_stations, double bump_exponent)
    : thickness_ratio_(thickness_ratio), max_camber_(max_camber),
      camber_position_(camber_position), exponent_(bump_exponent) {
  require(thickness_ratio > 0.0, "thickness ratio must be positive");
  require(camber_position > 0.0 && camber_position < 1.0,
          "camber position must lie inside the chord");
  require(n_bumps >= 1, "need at least one bump");
  require(n_stations >= 3, "need at least three stations");

  thickness_scale_ = 1.0;
  const double raw_max =
      scan_and_refine_max([](double s) { return 2.0 * raw_half_thickness(s); });
  thickness_scale_ = thickness_ratio_ / raw_max;

  const int n_upper = (n_bumps + 1) / 2, n_lower = n_bumps - n_upper;
  for (int j = 0; j < n_upper; ++j)
    bumps_.push_back({ Surface::upper,
                       0.05 + 0.9 * (j + 1.0) / (n_upper + 1.0) });
  for (int j = 0; j < n_lower; ++j)
    bumps_.push_back({ Surface::lower,
                       0.05 + 0.9 * (j + 1.0) / (n_lower + 1.0) });

  stations_.resize(n_stations);
  for (int i = 0; i < n_stations; ++i) {
    const double theta = std::numbers::pi * i / (n_stations - 1);
    stations_[i] = 0.5 * (1.0 - std::cos(theta));
  }
  stations_.front() = 0.0;
  stations_.back() = 1.0;
  for (double s: stations_) {
    upper_.push_back(baseline_upper(s));
    lower_.push_back(baseline_lower(s));
  }
}

double AirfoilShape::half_thickness(double s) const {
  return thickness_scale_ * raw_half_thickness(std::clamp(s, 0.0, 1.0));
}

double AirfoilShape::camber(double s) const {
  const double m = max_camber_, p = camber_position_;
  if (m == 0.0)
    return 0.0;
  if (s < p)
    return m / (p * p) * (2.0 * p * s - s * s);
  return m / ((1.0 - p) * (1.0 - p)) * (1.0 - 2.0 * p + 2.0 * p * s - s * s);
}

double AirfoilShape::baseline_upper(double s) const {
  return camber(s) + half_thickness(s);
}

double AirfoilShape::baseline_lower(double s) const {
  return camber(s) - half_thickness(s);
}

double AirfoilShape::displacement(Surface side, const Vec &amplitudes,
                                  double s) const {
  require(amplitudes.size() == num_bumps(),
          "amplitude vector length must equal the number of bumps");
  double dy = 0.0;
  for (int j = 0; j < num_bumps(); ++j) {
    if (bumps_[j].surface == side && amplitudes[j] != 0.0)
      dy += amplitudes[j] * hicks_henne_bump(s, bumps_[j].peak, exponent_);
  }
  return dy;
}

SurfaceSamples hicks_henne_deform(const AirfoilShape &shape,
                                  const Vec &amplitudes) {
  SurfaceSamples out;
  out.stations = shape.stations();
  out.upper.reserve(out.stations.size());
  out.lower.reserve(out.stations.size());
  for (std::size_t i = 0; i < out.stations.size(); ++i) {
    const double s = out.stations[i];
    out.upper.push_back(shape.upper()[i]
                        + shape.displacement(Surface::upper, amplitudes, s));
    out.lower.push_back(shape.lower()[i]
                        + shape.displacement(Surface::lower, amplitudes, s));
  }
  return out;
}

double thickness_at(const AirfoilShape &shape, const Vec &amplitudes,
                    double s) {
  return (shape.baseline_upper(s)
          + shape.displacement(Surface::upper, amplitudes, s))
         - (shape.baseline_lower(s)
            + shape.displacement(Surface::lower, amplitudes, s));
}

double max_thickness(const AirfoilShape &shape, const Vec &amplitudes) {
  require(amplitudes.size() == shape.num_bumps(),
          "amplitude vector length must equal the number of bumps");
  if (amplitudes.isZero(0.0))
    return shape.thickness_ratio();
  return scan_and_refine_max(
      [&](double s) { return thickness_at(shape, amplitudes, s); });
}

Vec thickness_constraints(const AirfoilShape &shape, const Vec &amplitudes,
                          std::span<const double> stations,
                          std::span<const double> minima) {
  require(stations.size() == minima.size(),
          "one thickness minimum per station is required");
  Vec c(static_cast<Eigen::Index>(stations.size()));
  for (std::size_t i = 0; i < stations.size(); ++i) {
    require(stations[i] > 0.0 && stations[i] < 1.0,
            "thickness stations must lie strictly inside the chord");
    c[static_cast<Eigen::Index>(i)] =
        thickness_at(shape, amplitudes, stations[i]) - minima[i];
  }
  return c;
}

double max_thickness_constraint(const AirfoilShape &shape,
                                const Vec &amplitudes, double t_min) {
  return max_thickness(shape, amplitudes) - t_min;
}

}  // namespace aerobench::problems
