//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef AEROBENCH_PROBLEMS_PROBLEM_HPP
#define AEROBENCH_PROBLEMS_PROBLEM_HPP

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "aerobench/common.hpp"

namespace aerobench::problems {

enum class Relation { less_equal, greater_equal, equal };
enum class ConstraintKind { inequality, equality };

const char *to_string(Relation rel);
Relation relation_from_string(const std::string &s);

/// A user-facing constraint `response (<=|>=|=) threshold`. Internally every
/// constraint is held in the `c >= 0` (inequality) or `c == 0` (equality)
/// convention; `to_internal` performs that mapping.
struct ConstraintSpec {
  std::string name;
  Relation relation = Relation::less_equal;
  double threshold = 0.0;

  ConstraintKind kind() const noexcept {
    return relation == Relation::equal ? ConstraintKind::equality
                                       : ConstraintKind::inequality;
  }

  double to_internal(double response) const noexcept;

  friend bool operator==(const ConstraintSpec &,
                         const ConstraintSpec &) = default;
};

enum class EvalStatus { ok, failed };

/// Outcome of one evaluation. A failed result carries no objective or
/// constraint values, only the reason.
struct EvaluationResult {
  EvalStatus status = EvalStatus::failed;
  double f = std::numeric_limits<double>::quiet_NaN();
  Vec c;
  std::optional<Vec> grad_f;
  std::string reason;

  bool ok() const noexcept { return status == EvalStatus::ok; }

  static EvaluationResult success(double f, Vec c,
                                  std::optional<Vec> grad_f = std::nullopt);
  static EvaluationResult failure(std::string reason);
};

/// Per-coordinate affine map between physical bounds and the unit box.
class BoxNormalizer {
public:
  BoxNormalizer() = default;
  BoxNormalizer(Vec lo, Vec hi);

  static BoxNormalizer uniform(int n, double lo, double hi);

  Vec normalize(const Vec &x_phys) const;
  Vec denormalize(const Vec &u) const;

  int dim() const noexcept { return static_cast<int>(lo_.size()); }
  const Vec &lo() const noexcept { return lo_; }
  const Vec &hi() const noexcept { return hi_; }

private:
  Vec lo_, hi_;
};

struct KnownOptimum {
  Vec u;
  double f;
};

/// Evaluates the raw responses at a normalized design `u`: the objective,
/// one raw value per constraint spec (in the constraint's own units, before the
/// threshold is applied) and, when requested and available, the objective
/// gradient with respect to `u`.
using Backend = std::function<EvaluationResult(const Vec &u, bool want_gradient)>;

/// A nonlinear program over the normalized box [0,1]^n with equality and
/// inequality index sets. Immutable once built; safe to share between
/// threads as long as the backend is.
class Problem {
public:
  Problem(std::string name, std::string tag, BoxNormalizer box,
          std::vector<ConstraintSpec> constraints, Backend backend,
          bool analytic_gradient, std::optional<KnownOptimum> optimum = {});

  const std::string &name() const noexcept { return name_; }
  const std::string &tag() const noexcept { return tag_; }
  int dim() const noexcept { return box_.dim(); }
  const BoxNormalizer &box() const noexcept { return box_; }
  const std::vector<ConstraintSpec> &constraints() const noexcept {
    return constraints_;
  }
  int num_constraints() const noexcept {
    return static_cast<int>(constraints_.size());
  }
  bool constrained() const noexcept { return !constraints_.empty(); }
  const std::vector<int> &equality_indices() const noexcept { return eq_; }
  const std::vector<int> &inequality_indices() const noexcept { return ineq_; }
  bool has_analytic_gradient() const noexcept { return analytic_gradient_; }
  const std::optional<KnownOptimum> &optimum() const noexcept {
    return optimum_;
  }

  /// Catalog id this problem was built from ("rae2822-c:8"), empty otherwise.
  const std::string &catalog_id() const noexcept { return catalog_id_; }
  void set_catalog_id(std::string id) { catalog_id_ = std::move(id); }

  /// Evaluates at normalized `u`; constraint values come back in the
  /// internal convention. Throws std::invalid_argument when `u` is outside
  /// the unit box or has the wrong length.
  EvaluationResult evaluate(const Vec &u, bool want_gradient = false) const;

  /// Same problem structure, different response source (e.g. an external
  /// evaluator process).
  Problem with_backend(Backend backend, bool analytic_gradient) const;

  /// Same responses in a different physical box (same dimension).
  Problem with_box(BoxNormalizer box) const;

  /// Same responses under another name and tag.
  Problem renamed(std::string name, std::string tag) const;

  /// Raw response source (constraint values in their own units).
  const Backend &backend() const noexcept { return backend_; }

  /// Same responses, different thresholds/relations (count must match).
  Problem with_constraints(std::vector<ConstraintSpec> constraints) const;

private:
  std::string name_, tag_, catalog_id_;
  BoxNormalizer box_;
  std::vector<ConstraintSpec> constraints_;
  std::vector<int> eq_, ineq_;
  Backend backend_;
  bool analytic_gradient_ = false;
  std::optional<KnownOptimum> optimum_;
};

/// Infinity norm of the violation vector: max(0, -c_i) for inequalities,
/// |c_i| for equalities. Zero for unconstrained problems. `c` must be in the
/// internal convention.
double max_constraint_violation(const Problem &problem, const Vec &c);

/// Same, with each equality relaxed to the band |c_i| <= eq_band.
double banded_violation(const Problem &problem, const Vec &c, double eq_band);

}  // namespace aerobench::problems

#endif  // AEROBENCH_PROBLEMS_PROBLEM_HPP
