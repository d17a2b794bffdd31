//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_PROBLEMS_PROBLEM_FILE_HPP
#define AEROBENCH_PROBLEMS_PROBLEM_FILE_HPP

#include <optional>
#include <string>
#include <vector>

#include "aerobench/problems/problem.hpp"

namespace aerobench::problems {

/// A problem definition file:
///
///   { "name": "rae2822-c", "tag": "airfoil", "dim": 8,
///     "bounds": [[-0.002, 0.002], ...],
///     "constraints": [{"name": "cmz", "relation": "<=", "threshold": 0.092}],
///     "surrogate": "rae2822-c:8" }
///
/// with either "surrogate" (a catalog id) or
///   "external": {"command": ["prog", "arg"], "timeout": 30, "workers": 1,
///                "gradient": false}
/// where "gradient" declares that replies carry grad_f.
struct ProblemFile {
  std::string name;
  std::string tag;
  int dim = 0;
  Vec lo, hi;
  std::vector<ConstraintSpec> constraints;
  std::optional<std::string> surrogate;
  std::vector<std::string> external_command;
  double external_timeout_s = 30.0;
  int external_workers = 1;
  bool external_gradient = false;
};

ProblemFile parse_problem_file(const std::string &text);
ProblemFile load_problem_file(const std::string &path);
std::string to_json(const ProblemFile &file);
void save_problem_file(const ProblemFile &file, const std::string &path);

/// The definition of a catalog problem.
ProblemFile describe(const Problem &problem);

/// Builds the problem a file describes. Surrogate files take the catalog
/// responses with the file's name, bounds and thresholds.
Problem build_problem(const ProblemFile &file);

/// A catalog id, or a path to a problem file (anything ending in .json).
Problem resolve_problem(const std::string &id_or_path);

/// Replaces the responses of `problem` with an external evaluator.
Problem with_external_evaluator(const Problem &problem,
                                const std::vector<std::string> &argv,
                                double timeout_s = 30.0, int workers = 1,
                                bool analytic_gradient = false);

}  // namespace aerobench::problems

#endif  // AEROBENCH_PROBLEMS_PROBLEM_FILE_HPP
