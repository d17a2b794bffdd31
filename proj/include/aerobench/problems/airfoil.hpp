//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_PROBLEMS_AIRFOIL_HPP
#define AEROBENCH_PROBLEMS_AIRFOIL_HPP

#include <span>
#include <vector>

#include "aerobench/common.hpp"

namespace aerobench::problems {

enum class Surface { upper, lower };

struct BumpSite {
  Surface surface;
  double peak;  // chord station where the bump reaches 1
};

/// Sin-power bump b(s) = sin^t(pi * s^(ln 0.5 / ln peak)). Zero at both ends
/// of the chord and exactly 1 at `peak`.
double hicks_henne_bump(double s, double peak, double exponent);

/// Chord-normalized airfoil: a four-digit-style camber line plus a
/// closed-trailing-edge thickness distribution scaled so the maximum
/// thickness equals `thickness_ratio`, with a fixed set of bump sites.
/// The first half of the bumps sit on the upper surface, the rest on the
/// lower surface; peaks are evenly spaced strictly inside (0.05, 0.95).
class AirfoilShape {
public:
  AirfoilShape(double thickness_ratio, double max_camber,
               double camber_position, int n_bumps, int n_stations = 129,
               double bump_exponent = 3.0);

  double thickness_ratio() const noexcept { return thickness_ratio_; }
  double bump_exponent() const noexcept { return exponent_; }
  int num_bumps() const noexcept { return static_cast<int>(bumps_.size()); }
  const std::vector<BumpSite> &bumps() const noexcept { return bumps_; }

  // Baseline samples (cosine-clustered toward both edges).
  const std::vector<double> &stations() const noexcept { return stations_; }
  const std::vector<double> &upper() const noexcept { return upper_; }
  const std::vector<double> &lower() const noexcept { return lower_; }

  double camber(double s) const;
  double baseline_upper(double s) const;
  double baseline_lower(double s) const;

  /// Surface displacement at `s` produced by `amplitudes` on one side.
  double displacement(Surface side, const Vec &amplitudes, double s) const;

private:
  double half_thickness(double s) const;

  double thickness_ratio_, max_camber_, camber_position_, exponent_;
  double thickness_scale_ = 1.0;
  std::vector<BumpSite> bumps_;
  std::vector<double> stations_, upper_, lower_;
};

struct SurfaceSamples {
  std::vector<double> stations, upper, lower;
};

/// Deformed upper/lower surfaces sampled at the shape's stations.
SurfaceSamples hicks_henne_deform(const AirfoilShape &shape,
                                  const Vec &amplitudes);

/// Thickness (upper - lower) of the deformed shape at chord station `s`.
double thickness_at(const AirfoilShape &shape, const Vec &amplitudes, double s);

/// Maximum thickness over the chord: coarse scan followed by golden-section
/// refinement around the best sample.
double max_thickness(const AirfoilShape &shape, const Vec &amplitudes);

/// t(s_i) - minima_i for each station, in the c >= 0 convention.
Vec thickness_constraints(const AirfoilShape &shape, const Vec &amplitudes,
                          std::span<const double> stations,
                          std::span<const double> minima);

/// max_s t(s) - t_min, in the c >= 0 convention.
double max_thickness_constraint(const AirfoilShape &shape,
                                const Vec &amplitudes, double t_min);

}  // namespace aerobench::problems

#endif  // AEROBENCH_PROBLEMS_AIRFOIL_HPP
