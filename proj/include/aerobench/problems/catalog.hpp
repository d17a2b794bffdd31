//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_PROBLEMS_CATALOG_HPP
#define AEROBENCH_PROBLEMS_CATALOG_HPP

#include <string>
#include <vector>

#include "aerobench/problems/problem.hpp"

namespace aerobench::problems {

enum class SurrogateCase { naca0012_u, rae2822_u, rae2822_c, oneram6_c };

const char *to_string(SurrogateCase c);
SurrogateCase surrogate_case_from_string(const std::string &s);

// Constraint thresholds of the constrained test cases.
inline constexpr double kRaeMomentMax = 0.092;
inline constexpr double kRaeLiftTarget = 0.75;
inline constexpr double kRaeThicknessMin = 0.12;
inline constexpr double kOneraThicknessMin[5] = { 0.078, 0.072, 0.066, 0.061,
                                                  0.055 };
inline constexpr double kOneraLiftTarget = 0.292;

/// Synthetic drag response: f* + scale * (sum_i w_i z_i^2
///   + A * sum_i (1 - cos(2 pi omega z_i))), z = R (u - u*).
/// Every term is non-negative and vanishes only at u*, so (u*, f*) is the
/// global minimum; the cosine terms superpose a lattice of local basins.
struct DragModel {
  Vec u_star;
  Mat rotation;
  Vec weights;
  double f_star = 0.0;
  double scale = 1.0;
  double ripple_amplitude = 0.0;
  double ripple_frequency = 1.0;

  double value(const Vec &u) const;
  Vec gradient(const Vec &u) const;
};

/// Analytic stand-ins for the aerodynamic test cases. Airfoil cases accept
/// d in {4, 8, 16, 32}; the wing case requires d = 12.
Problem surrogate_aero_problem(SurrogateCase c, int d);

/// The drag model used by a surrogate case (for oracles and diagnostics).
DragModel surrogate_drag_model(SurrogateCase c, int d);

/// Calibration problems with closed-form optima: "sphere2", "rosenbrock10",
/// "circle-lp", "eq-quadratic", "quadratic1d".
Problem calibration_problem(const std::string &name);

/// Builds a problem from an id: a calibration name or "<case>:<d>".
Problem make_problem(const std::string &id);

std::vector<std::string> list_problem_ids();

}  // namespace aerobench::problems

#endif  // AEROBENCH_PROBLEMS_CATALOG_HPP
