//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "doctest.h"
#include "oracles.hpp"

#include "aerobench/optim/lbfgs.hpp"
#include "aerobench/optim/lp.hpp"

using namespace aerobench;
using namespace aerobench::optim;

TEST_CASE("two-loop recursion equals dense BFGS updates") {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const int d = 2 + t % 6;
    Mat B = Mat::NullaryExpr(d, d, [&] { return standard_normal(rng); });
    const Mat H = B * B.transpose() + Mat::Identity(d, d);
    std::vector<Vec> s, y;
    for (int i = 0; i < 5; ++i) {
      s.push_back(Vec::NullaryExpr(d, [&] { return standard_normal(rng); }));
      y.push_back(H * s.back());
    }
    const Vec q = Vec::NullaryExpr(d, [&] { return standard_normal(rng); });
    const double gamma = s.back().dot(y.back()) / y.back().squaredNorm();
    const Vec a = two_loop(s, y, q, gamma);
    const Vec b = oracle::dense_bfgs_apply(s, y, q, gamma);
    CHECK((a - b).norm() <= 1e-10 * std::max(1.0, b.norm()));
  }
}

TEST_CASE("curvature memory rejects non-positive pairs and forgets the oldest") {
  CurvatureMemory mem(2);
  const Vec s = Vec::Ones(2);
  CHECK_FALSE(mem.push(s, -s));
  CHECK(mem.push(s, s));
  CHECK(mem.push(s, 2 * s));
  CHECK(mem.push(s, 3 * s));
  CHECK(mem.size() == 2);
  CHECK(mem.gamma() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("projected gradient vanishes at bound-constrained minimizers") {
  const Vec lo = Vec::Zero(2), hi = Vec::Ones(2);
  CHECK(projected_gradient((Vec(2) << 0.0, 0.5).finished(),
                           (Vec(2) << 3.0, 0.0).finished(), lo, hi)
            .norm()
        == 0.0);
  CHECK(projected_gradient((Vec(2) << 0.5, 0.5).finished(),
                           (Vec(2) << 0.1, 0.0).finished(), lo, hi)
            .cwiseAbs()
            .maxCoeff()
        == doctest::Approx(0.1));
}

TEST_CASE("box quasi-Newton solves a quadratic with an active bound") {
  // min (x0 - 2)^2 + 10 (x1 - 0.3)^2 on [0,1]^2: solution (1, 0.3).
  LbfgsCallbacks cb;
  cb.value = [](const Vec &x) {
    return std::pow(x[0] - 2.0, 2) + 10.0 * std::pow(x[1] - 0.3, 2);
  };
  cb.gradient = [](const Vec &x) -> std::optional<Vec> {
    return (Vec(2) << 2.0 * (x[0] - 2.0), 20.0 * (x[1] - 0.3)).finished();
  };
  LbfgsOptions opt;
  opt.gtol = 1e-10;
  const auto r = minimize_box(cb, Vec::Constant(2, 0.5), Vec::Zero(2), Vec::Ones(2), opt);
  CHECK(r.status == "gtol");
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.x[1] == doctest::Approx(0.3).epsilon(1e-8));
}

TEST_CASE("line search treats non-finite values as rejected trials") {
  LbfgsCallbacks cb;
  int calls = 0;
  cb.value = [&](const Vec &x) {
    ++calls;
    return x[0] > 0.6 ? std::numeric_limits<double>::quiet_NaN()
                      : std::pow(x[0] - 0.55, 2);
  };
  cb.gradient = [](const Vec &x) -> std::optional<Vec> {
    return Vec::Constant(1, 2.0 * (x[0] - 0.55));
  };
  const auto r = minimize_box(cb, Vec::Constant(1, 0.0), Vec::Zero(1), Vec::Ones(1), {});
  CHECK(r.f <= 1e-6);
}

TEST_CASE("LP solutions match vertex enumeration") {
  Rng rng(2);
  int compared = 0;
  for (int t = 0; t < 200; ++t) {
    const int d = 1 + t % 3, m = 1 + static_cast<int>(uniform01(rng) * 4);
    const Vec c = Vec::NullaryExpr(d, [&] { return standard_normal(rng); });
    const Mat A = Mat::NullaryExpr(m, d, [&] { return standard_normal(rng); });
    const Vec b = Vec::NullaryExpr(m, [&] { return standard_normal(rng); });
    const Vec lo = -Vec::Ones(d), hi = Vec::Ones(d);
    double best = 0.0;
    const bool feasible = oracle::lp_by_enumeration(c, A, b, lo, hi, best);
    const auto r = solve_lp(c, A, b, lo, hi);
    if (!feasible) {
      CHECK(r.status == LpStatus::infeasible);
      continue;
    }
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.value == doctest::Approx(best).epsilon(1e-9));
    CHECK(((A * r.x - b).array() <= 1e-9).all());
    CHECK(((r.x - lo).array() >= -1e-9).all());
    CHECK(((hi - r.x).array() >= -1e-9).all());
    ++compared;
  }
  CHECK(compared > 100);
}
