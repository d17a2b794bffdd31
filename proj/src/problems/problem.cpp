//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "aerobench/problems/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace aerobench::problems {

const char *to_string(Relation rel) {
  switch (rel) {
  case Relation::less_equal:
    return "<=";
  case Relation::greater_equal:
    return ">=";
  case Relation::equal:
    return "=";
  }
  return "?";
}

Relation relation_from_string(const std::string &s) {
  if (s == "<=" || s == "le")
    return Relation::less_equal;
  if (s == ">=" || s == "ge")
    return Relation::greater_equal;
  if (s == "=" || s == "==" || s == "eq")
    return Relation::equal;
  throw std::invalid_argument("unknown constraint relation '" + s + "'");
}

double ConstraintSpec::to_internal(double response) const noexcept {
  switch (relation) {
  case Relation::less_equal:
    return threshold - response;
  case Relation::greater_equal:
  case Relation::equal:
    return response - threshold;
  }
  return response;
}

EvaluationResult EvaluationResult::success(double f, Vec c,
                                           std::optional<Vec> grad_f) {
  EvaluationResult r;
  r.status = EvalStatus::ok;
  r.f = f;
  r.c = std::move(c);
  r.grad_f = std::move(grad_f);
  return r;
}

EvaluationResult EvaluationResult::failure(std::string reason) {
  EvaluationResult r;
  r.status = EvalStatus::failed;
  r.reason = std::move(reason);
  return r;
}

BoxNormalizer::BoxNormalizer(Vec lo, Vec hi): lo_(std::move(lo)), hi_(std::move(hi)) {
  require(lo_.size() == hi_.size(), "box bounds have mismatched lengths");
  require(lo_.size() > 0, "box must have at least one coordinate");
  for (Eigen::Index i = 0; i < lo_.size(); ++i) {
    if (!(lo_[i] < hi_[i]))
      throw std::invalid_argument("box coordinate " + std::to_string(i)
                                  + " has lo >= hi");
  }
}

BoxNormalizer BoxNormalizer::uniform(int n, double lo, double hi) {
  return BoxNormalizer(Vec::Constant(n, lo), Vec::Constant(n, hi));
}

Vec BoxNormalizer::normalize(const Vec &x_phys) const {
  require(x_phys.size() == lo_.size(), "normalize: dimension mismatch");
  return ((x_phys - lo_).array() / (hi_ - lo_).array()).matrix();
}

Vec BoxNormalizer::denormalize(const Vec &u) const {
  require(u.size() == lo_.size(), "denormalize: dimension mismatch");
  return (lo_.array() + u.array() * (hi_ - lo_).array()).matrix();
}

Problem::Problem(std::string name, std::string tag, BoxNormalizer box,
                 std::vector<ConstraintSpec> constraints, Backend backend,
                 bool analytic_gradient, std::optional<KnownOptimum> optimum)
    : name_(std::move(name)), tag_(std::move(tag)), box_(std::move(box)),
      constraints_(std::move(constraints)), backend_(std::move(backend)),
      analytic_gradient_(analytic_gradient), optimum_(std::move(optimum)) {
  require(box_.dim() > 0, "problem needs a non-empty box");
  require(static_cast<bool>(backend_), "problem needs a backend");
  for (int i = 0; i < num_constraints(); ++i) {
    if (constraints_[i].kind() == ConstraintKind::equality)
      eq_.push_back(i);
    else
      ineq_.push_back(i);
  }
}

EvaluationResult Problem::evaluate(const Vec &u, bool want_gradient) const {
  require(u.size() == dim(), "evaluate: design has wrong dimension");
  if (!inside_unit_box(u, 1e-12))
    throw std::invalid_argument("evaluate: design outside the unit box");

  EvaluationResult r = backend_(clamp_unit(u), want_gradient);
  if (!r.ok())
    return EvaluationResult::failure(r.reason);

  if (r.c.size() != num_constraints())
    return EvaluationResult::failure("backend returned "
                                     + std::to_string(r.c.size())
                                     + " constraint values, expected "
                                     + std::to_string(num_constraints()));
  if (!std::isfinite(r.f) || !r.c.allFinite())
    return EvaluationResult::failure("non-finite response");
  if (r.grad_f && r.grad_f->size() != dim())
    r.grad_f.reset();

  for (int i = 0; i < num_constraints(); ++i)
    r.c[i] = constraints_[i].to_internal(r.c[i]);
  return r;
}

Problem Problem::with_backend(Backend backend, bool analytic_gradient) const {
  Problem p = *this;
  require(static_cast<bool>(backend), "problem needs a backend");
  p.backend_ = std::move(backend);
  p.analytic_gradient_ = analytic_gradient;
  return p;
}

Problem Problem::with_constraints(std::vector<ConstraintSpec> constraints) const {
  require(constraints.size() == constraints_.size(),
          "with_constraints: constraint count must not change");
  Problem p(name_, tag_, box_, std::move(constraints), backend_,
            analytic_gradient_, optimum_);
  p.catalog_id_ = catalog_id_;
  return p;
}

Problem Problem::with_box(BoxNormalizer box) const {
  require(box.dim() == dim(), "with_box: dimension must not change");
  Problem p = *this;
  p.box_ = std::move(box);
  return p;
}

Problem Problem::renamed(std::string name, std::string tag) const {
  Problem p = *this;
  p.name_ = std::move(name);
  p.tag_ = std::move(tag);
  return p;
}

double max_constraint_violation(const Problem &problem, const Vec &c) {
  return banded_violation(problem, c, 0.0);
}

double banded_violation(const Problem &problem, const Vec &c, double eq_band) {
  require(c.size() == problem.num_constraints(),
          "violation: constraint vector has wrong length");
  double v = 0.0;
  for (int i: problem.inequality_indices())
    v = std::max(v, std::max(0.0, -c[i]));
  for (int i: problem.equality_indices())
    v = std::max(v, std::max(0.0, std::abs(c[i]) - eq_band));
  return v;
}

}  // namespace aerobench::problems
