//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "aerobench/verify/suite.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "aerobench/acquisition/acquisition.hpp"
#include "aerobench/gp/gp_model.hpp"
#include "aerobench/problems/catalog.hpp"
#include "aerobench/solvers/solvers.hpp"

namespace aerobench::verify {
namespace {
  using problems::Problem;

  double log_uniform(Rng &rng, double lo, double hi) {
    return std::exp(std::log(lo) + uniform01(rng) * (std::log(hi) - std::log(lo)));
  }

  std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
  }

  // Posterior against an explicitly inverted covariance matrix.
  CheckResult gp_dense(std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0, worst_interp = 0.0;
    for (int t = 0; t < 50; ++t) {
      const int n = 1 + static_cast<int>(uniform01(rng) * 20);
      const int d = 1 + static_cast<int>(uniform01(rng) * 8);
      gp::Dataset data;
      data.X = Mat::NullaryExpr(n, d, [&] { return uniform01(rng); });
      data.y = Vec::NullaryExpr(n, [&] { return standard_normal(rng); });
      data.noise_variance = log_uniform(rng, 1e-4, 1e-2);
      gp::KernelSpec k;
      k.family = t % 2 ? gp::KernelFamily::matern52
                       : gp::KernelFamily::squared_exponential;
      k.lengthscales = Vec::NullaryExpr(d, [&] { return log_uniform(rng, 0.1, 1.0); });
      k.signal_variance = log_uniform(rng, 0.5, 2.0);
      const gp::GpModel model(k, data);

      const Mat K = gp::kernel_matrix(k, data.X)
                    + (data.noise_variance + model.jitter())
                          * Mat::Identity(n, n);
      const Mat Kinv = K.fullPivLu().inverse();
      for (int q = 0; q < 10; ++q) {
        const Vec x = Vec::NullaryExpr(d, [&] { return uniform01(rng); });
        const Vec ks = gp::kernel_matrix(k, data.X, x.transpose()).col(0);
        const double mean = ks.dot(Kinv * data.y);
        const double var = k.signal_variance - ks.dot(Kinv * ks);
        const auto m = model.posterior(x);
        worst = std::max({ worst, std::abs(m.mean - mean),
                           std::abs(m.variance - std::max(var, 0.0)) });
      }

      // Noise-free interpolation. The Matern kernel keeps K numerically
      // invertible; squared-exponential matrices on clustered 1-d designs
      // reach condition numbers beyond 1e16 where no solver interpolates.
      gp::Dataset exact = data;
      exact.noise_variance = 0.0;
      gp::KernelSpec ke = k;
      ke.family = gp::KernelFamily::matern52;
      const gp::GpModel interp(ke, exact);
      for (int i = 0; i < n; ++i)
        worst_interp = std::max(
            worst_interp,
            std::abs(interp.posterior(exact.X.row(i).transpose()).mean
                     - exact.y[i]));
    }
    return { "gp-dense", worst <= 1e-8 && worst_interp <= 1e-6,
             "max |posterior - dense| = " + fmt(worst)
                 + ", max interpolation error = " + fmt(worst_interp),
             0.0 };
  }

  CheckResult acquisition_mc(std::uint64_t seed) {
    Rng rng(seed);
    const int n = 1000000;
    Vec z(n);
    for (int i = 0; i < n; ++i)
      z[i] = standard_normal(rng);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const double mu = 2.0 * uniform01(rng) - 1.0;
      const double sigma = 0.05 + 0.95 * uniform01(rng);
      const double xi = 2.0 * uniform01(rng) - 1.0;
      const Vec y = (mu + sigma * z.array()).matrix();
      const double ei_mc = (xi - y.array()).max(0.0).mean();
      const double pi_mc = (y.array() < xi).cast<double>().mean();
      const gp::PosteriorMoments m{ mu, sigma * sigma };
      worst = std::max({ worst,
                         std::abs(acquisition::expected_improvement(m, xi) - ei_mc),
                         std::abs(acquisition::probability_of_improvement(m, xi)
                                  - pi_mc) });
    }
    const gp::PosteriorMoments det{ 0.25, 0.0 };
    const bool exact = acquisition::expected_improvement(det, 1.0) == 0.75
                       && acquisition::expected_improvement(det, 0.0) == 0.0;
    return { "acquisition-mc", worst <= 3e-3 && exact,
             "max |closed form - Monte Carlo| = " + fmt(worst)
                 + (exact ? "" : ", sigma = 0 case not exact"),
             0.0 };
  }

  CheckResult calibration_optima(std::uint64_t) {
    std::string detail;
    bool pass = true;

    const Problem rosen = problems::make_problem("rosenbrock10");
    solvers::SolverConfig qn;
    qn.gtol = 1e-6;
    qn.ftol = 1e-15;
    qn.maxiter = 2000;
    EvalLedger l1;
    const auto r1 = solvers::lbfgsb_run(rosen, Vec::Constant(10, 0.25), qn,
                                        GradientProvider{ GradientMode::analytic },
                                        l1);
    const double pg = r1.iterates.back().pg_norm.value_or(INFINITY);
    pass &= pg <= 1e-5;
    detail += "rosenbrock10 projected gradient " + fmt(pg);

    const Problem sphere = problems::make_problem("sphere2");
    solvers::SolverConfig nm;
    nm.maxiter = 200;
    nm.fatol = 1e-8;
    EvalLedger l2;
    const auto r2 = solvers::nelder_mead(sphere, (Vec(2) << 0.1, 0.9).finished(),
                                         nm, l2);
    const double fs = r2.final_best_feasible().value_or(INFINITY);
    pass &= fs <= 1e-4 && static_cast<int>(r2.iterates.size()) <= 201;
    detail += "; sphere2 f " + fmt(fs);

    const Problem circle = problems::make_problem("circle-lp");
    solvers::SolverConfig cb;
    EvalLedger l3;
    const auto r3 = solvers::cobyla_run(circle, Vec::Constant(2, 0.5), cb, l3);
    const Vec kkt = circle.optimum()->u;
    double dist = INFINITY, viol = INFINITY;
    if (!r3.rows.empty() && r3.rows.back().x.size() == 2) {
      const Vec x = circle.box().denormalize(r3.rows.back().x);
      dist = (x - circle.box().denormalize(kkt)).cwiseAbs().maxCoeff();
      viol = r3.rows.back().mcv.value_or(INFINITY);
    }
    pass &= dist <= 1e-3 && viol <= 1e-6;
    detail += "; circle-lp KKT distance " + fmt(dist) + ", MCV " + fmt(viol);
    return { "calibration-optima", pass, detail, 0.0 };
  }

  CheckResult gradients_fd(std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    std::string where;
    for (const auto &id: problems::list_problem_ids()) {
      const Problem p = problems::make_problem(id);
      if (!p.has_analytic_gradient())
        continue;
      const int d = p.dim();
      for (int t = 0; t < 20; ++t) {
        const Vec u = Vec::NullaryExpr(d, [&] { return 0.02 + 0.96 * uniform01(rng); });
        const auto r = p.evaluate(u, true);
        if (!r.ok() || !r.grad_f)
          continue;
        const double h = 1e-6;
        Vec fd(d);
        for (int i = 0; i < d; ++i) {
          Vec a = u, b = u;
          a[i] += h;
          b[i] -= h;
          fd[i] = (p.evaluate(a).f - p.evaluate(b).f) / (2 * h);
        }
        const double scale = std::max(1.0, r.grad_f->cwiseAbs().maxCoeff());
        const double err = (fd - *r.grad_f).cwiseAbs().maxCoeff() / scale;
        if (err > worst) {
          worst = err;
          where = id;
        }
      }
    }
    return { "gradients-fd", worst <= 1e-5,
             "max relative |analytic - central difference| = " + fmt(worst)
                 + (where.empty() ? "" : " (" + where + ")"),
             0.0 };
  }

  CheckResult recorded_optima(std::uint64_t seed) {
    Rng rng(seed);
    bool pass = true;
    std::string bad;
    for (const auto &id: problems::list_problem_ids()) {
      const Problem p = problems::make_problem(id);
      if (!p.optimum())
        continue;
      const auto &opt = *p.optimum();
      const auto r = p.evaluate(opt.u);
      const double v = r.ok() ? problems::max_constraint_violation(p, r.c) : INFINITY;
      bool ok = r.ok() && v <= 1e-9 && std::abs(r.f - opt.f) <= 1e-9 * std::max(1.0, std::abs(opt.f));
      // No feasible random design may beat the recorded optimum.
      for (int t = 0; t < 2000 && ok; ++t) {
        const Vec u = Vec::NullaryExpr(p.dim(), [&] { return uniform01(rng); });
        const auto s = p.evaluate(u);
        if (s.ok() && problems::max_constraint_violation(p, s.c) <= 1e-9
            && s.f < opt.f - 1e-9)
          ok = false;
      }
      if (!ok) {
        pass = false;
        bad += (bad.empty() ? "" : ", ") + id;
      }
    }
    return { "recorded-optima", pass,
             pass ? "every recorded optimum is feasible and unbeaten by 2000 random designs"
                  : "inconsistent: " + bad,
             0.0 };
  }

  CheckResult normalization(std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
      const int d = 1 + static_cast<int>(uniform01(rng) * 16);
      const Vec lo = Vec::NullaryExpr(d, [&] { return -10.0 * uniform01(rng); });
      const Vec hi = lo + Vec::NullaryExpr(d, [&] { return 1e-4 + 10.0 * uniform01(rng); });
      const problems::BoxNormalizer box(lo, hi);
      const Vec x = lo + (hi - lo).cwiseProduct(
                             Vec::NullaryExpr(d, [&] { return uniform01(rng); }));
      worst = std::max(worst, (box.denormalize(box.normalize(x)) - x).cwiseAbs().maxCoeff());
    }
    return { "normalization", worst <= 1e-12,
             "max round-trip error = " + fmt(worst), 0.0 };
  }

  using CheckFn = std::function<CheckResult(std::uint64_t)>;
  const std::vector<std::pair<std::string, CheckFn>> &registry() {
    static const std::vector<std::pair<std::string, CheckFn>> r = {
      { "gp-dense", gp_dense },
      { "acquisition-mc", acquisition_mc },
      { "calibration-optima", calibration_optima },
      { "gradients-fd", gradients_fd },
      { "recorded-optima", recorded_optima },
      { "normalization", normalization },
    };
    return r;
  }
}  // namespace

std::vector<std::string> list_checks() {
  std::vector<std::string> out;
  for (const auto &[name, fn]: registry())
    out.push_back(name);
  return out;
}

CheckResult run_check(const std::string &name, std::uint64_t seed) {
  for (const auto &[n, fn]: registry()) {
    if (n != name)
      continue;
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = fn(seed);
    } catch (const std::exception &e) {
      r = { name, false, std::string("threw: ") + e.what(), 0.0 };
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
    return r;
  }
  throw std::invalid_argument("unknown check '" + name + "'");
}

std::vector<CheckResult> run_all_checks(std::uint64_t seed) {
  std::vector<CheckResult> out;
  for (const auto &name: list_checks())
    out.push_back(run_check(name, seed));
  return out;
}

}  // namespace aerobench::verify
