//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "aerobench/problems/catalog.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "aerobench/problems/airfoil.hpp"

namespace aerobench::problems {
namespace {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  struct CaseTraits {
    const char *id;
    const char *display;
    const char *tag;
    double lo, hi;
    double f_star;
    double ripple_amplitude;
    double ripple_frequency;
  };

  // Variable boxes follow the control-point displacement limits of the
  // corresponding aerodynamic cases.
  constexpr CaseTraits kTraits[] = {
    { "naca0012-u", "NACA0012 (unconstrained)", "inviscid-airfoil", -0.1, 0.1,
      0.0080, 0.010, 3.0 },
    { "rae2822-u", "RAE2822 (unconstrained)", "viscous-airfoil", -0.002, 0.002,
      0.0100, 0.004, 50.0 },
    { "rae2822-c", "RAE2822 (constrained)", "viscous-airfoil", -0.002, 0.002,
      0.0100, 0.001, 50.0 },
    { "oneram6-c", "ONERAM6 (constrained)", "inviscid-wing", -0.00025, 0.00025,
      0.0110, 0.002, 20.0 },
  };

  const CaseTraits &traits(SurrogateCase c) {
    return kTraits[static_cast<int>(c)];
  }

  Mat random_rotation(int d, Rng &rng) {
    Mat g(d, d);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i)
        g(i, j) = standard_normal(rng);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j) {
      if (r(j, j) < 0.0)
        q.col(j) = -q.col(j);
    }
    return q;
  }

  std::uint64_t case_seed(SurrogateCase c, int d) {
    return 0x9E3779B97F4A7C15ULL ^ (1000ULL * (static_cast<int>(c) + 1) + d);
  }

  // Trimmed-lift model: the operating point picks the angle of attack that
  // meets the lift target. Inside the admissible angle range the lift
  // residual is exactly zero; outside it the angle saturates and the design
  // cannot be trimmed.
  struct TrimModel {
    double target;
    double alpha_base, alpha_lo, alpha_hi;
    double camber_gain;  // deg of trim angle per unit camber index
    double lift_slope;   // per deg

    double alpha_required(double camber) const {
      return alpha_base - camber_gain * camber;
    }
    double alpha_trim(double camber) const {
      return std::clamp(alpha_required(camber), alpha_lo, alpha_hi);
    }
    double lift(double camber) const {
      return target
             + lift_slope * (alpha_trim(camber) - alpha_required(camber));
    }
  };

  // Camber indices from paired upper/lower bump amplitudes at the same
  // peaks, in units of the amplitude bound.
  struct CamberIndex {
    std::vector<double> mean_weights, aft_weights;

    explicit CamberIndex(const std::vector<BumpSite> &bumps) {
      std::vector<double> peaks;
      for (const auto &b: bumps)
        if (b.surface == Surface::upper)
          peaks.push_back(b.peak);
      double sm = 0.0, sa = 0.0;
      for (double h: peaks) {
        mean_weights.push_back(0.5 + h);
        aft_weights.push_back(h * h);
        sm += 0.5 + h;
        sa += h * h;
      }
      for (auto &w: mean_weights)
        w /= sm;
      for (auto &w: aft_weights)
        w /= sa;
    }

    std::pair<double, double> operator()(const Vec &amps, double amax) const {
      const int k = static_cast<int>(mean_weights.size());
      double mean = 0.0, aft = 0.0;
      for (int j = 0; j < k; ++j) {
        const double cj = (amps[j] + amps[k + j]) / (2.0 * amax);
        mean += mean_weights[j] * cj;
        aft += aft_weights[j] * cj;
      }
      return { mean, aft };
    }
  };

  struct RaeConstraintModel {
    AirfoilShape shape;
    CamberIndex camber;
    BoxNormalizer box;
    double amax;
    TrimModel trim{ kRaeLiftTarget, 2.0, 0.5, 3.5, 6.0, 0.11 };

    RaeConstraintModel(int d, const BoxNormalizer &b)
        : shape(0.12, 0.013, 0.75, d), camber(shape.bumps()), box(b),
          amax(b.hi()[0]) { }

    // Raw responses: moment, lift, max thickness.
    Vec responses(const Vec &u) const {
      const Vec a = box.denormalize(u);
      const auto [mean, aft] = camber(a, amax);
      const double alpha = trim.alpha_trim(mean);
      Vec r(3);
      r[0] = 0.080 + 0.040 * aft + 0.003 * (alpha - trim.alpha_base);
      r[1] = trim.lift(mean);
      r[2] = max_thickness(shape, a);
      return r;
    }

    double trim_margin(const Vec &u) const {
      const auto [mean, aft] = camber(box.denormalize(u), amax);
      const double ar = trim.alpha_required(mean);
      return std::min(ar - trim.alpha_lo, trim.alpha_hi - ar);
    }
  };

  struct OneraConstraintModel {
    static constexpr std::array<double, 5> kSpan{ 0.1, 0.3, 0.5, 0.7, 0.9 };
    std::vector<AirfoilShape> sections;
    CamberIndex camber;
    std::array<double, 5> span_weights{};
    BoxNormalizer box;
    double amax;
    TrimModel trim{ kOneraLiftTarget, 3.06, 2.06, 4.06, 3.0, 0.075 };

    explicit OneraConstraintModel(const BoxNormalizer &b)
        : sections(make_sections()), camber(sections.front().bumps()), box(b),
          amax(b.hi()[0]) {
      double s = 0.0;
      for (int i = 0; i < 5; ++i) {
        span_weights[i] = std::sqrt(1.0 - kSpan[i] * kSpan[i]);
        s += span_weights[i];
      }
      for (auto &w: span_weights)
        w /= s;
    }

    static std::vector<AirfoilShape> make_sections() {
      std::vector<AirfoilShape> out;
      for (double tmin: kOneraThicknessMin)
        out.emplace_back(tmin + 0.0003, 0.0, 0.4, 6);
      return out;
    }

    Vec section_amplitudes(const Vec &a, int i) const {
      const double eta = kSpan[i];
      return (1.0 - eta) * a.head(6) + eta * a.tail(6);
    }

    // Raw responses: five section thickness ratios, then wing lift.
    Vec responses(const Vec &u) const {
      const Vec a = box.denormalize(u);
      Vec r(6);
      double wing_camber = 0.0;
      for (int i = 0; i < 5; ++i) {
        const Vec sa = section_amplitudes(a, i);
        r[i] = max_thickness(sections[i], sa);
        wing_camber += span_weights[i] * camber(sa, amax).first;
      }
      r[5] = trim.lift(wing_camber);
      return r;
    }

    double trim_margin(const Vec &u) const {
      const Vec a = box.denormalize(u);
      double wing_camber = 0.0;
      for (int i = 0; i < 5; ++i)
        wing_camber +=
            span_weights[i] * camber(section_amplitudes(a, i), amax).first;
      const double ar = trim.alpha_required(wing_camber);
      return std::min(ar - trim.alpha_lo, trim.alpha_hi - ar);
    }
  };

  Vec chain_to_unit(const BoxNormalizer &box, const Vec &grad_x) {
    return (grad_x.array() * (box.hi() - box.lo()).array()).matrix();
  }

  Problem analytic_problem(
      std::string name, BoxNormalizer box, std::vector<ConstraintSpec> specs,
      std::function<double(const Vec &)> f,
      std::function<Vec(const Vec &)> grad,
      std::function<Vec(const Vec &)> raw_constraints, Vec x_opt,
      double f_opt) {
    Backend backend = [box, f, grad, raw_constraints](
                          const Vec &u, bool want_gradient) {
      const Vec x = box.denormalize(u);
      std::optional<Vec> g;
      if (want_gradient)
        g = chain_to_unit(box, grad(x));
      return EvaluationResult::success(
          f(x), raw_constraints ? raw_constraints(x) : Vec(), std::move(g));
    };
    KnownOptimum opt{ box.normalize(x_opt), f_opt };
    Problem p(std::move(name), "calibration", box, std::move(specs),
              std::move(backend), true, opt);
    return p;
  }
}  // namespace

const char *to_string(SurrogateCase c) {
  return traits(c).id;
}

SurrogateCase surrogate_case_from_string(const std::string &s) {
  for (int i = 0; i < 4; ++i) {
    if (s == kTraits[i].id)
      return static_cast<SurrogateCase>(i);
  }
  throw std::invalid_argument("unknown surrogate case '" + s + "'");
}

double DragModel::value(const Vec &u) const {
  const Vec z = rotation * (u - u_star);
  double q = (weights.array() * z.array().square()).sum();
  if (ripple_amplitude > 0.0)
    q += ripple_amplitude
         * (1.0 - (kTwoPi * ripple_frequency * z.array()).cos()).sum();
  return f_star + scale * q;
}

Vec DragModel::gradient(const Vec &u) const {
  const Vec z = rotation * (u - u_star);
  Vec dz = 2.0 * (weights.array() * z.array()).matrix();
  if (ripple_amplitude > 0.0)
    dz.array() += ripple_amplitude * kTwoPi * ripple_frequency
                  * (kTwoPi * ripple_frequency * z.array()).sin();
  return scale * (rotation.transpose() * dz);
}

DragModel surrogate_drag_model(SurrogateCase c, int d) {
  const CaseTraits &t = traits(c);
  Rng rng(case_seed(c, d));
  DragModel m;
  m.rotation = random_rotation(d, rng);
  m.weights.resize(d);
  for (int i = 0; i < d; ++i)
    m.weights[i] = 0.5 + 1.5 * uniform01(rng);
  m.u_star.resize(d);
  for (int i = 0; i < d; ++i)
    m.u_star[i] = 0.25 + 0.5 * uniform01(rng);
  m.f_star = t.f_star;
  m.scale = 0.04 / d;
  m.ripple_amplitude = t.ripple_amplitude;
  m.ripple_frequency = t.ripple_frequency;

  // Constrained cases move the optimum until it is strictly feasible.
  auto place = [&](auto &&feasible) {
    for (int attempt = 0; attempt < 20000; ++attempt) {
      if (feasible(m.u_star))
        return;
      for (int i = 0; i < d; ++i)
        m.u_star[i] = 0.25 + 0.5 * uniform01(rng);
    }
    throw std::logic_error("could not place a feasible optimum");
  };

  const BoxNormalizer box = BoxNormalizer::uniform(d, t.lo, t.hi);
  if (c == SurrogateCase::rae2822_c) {
    const RaeConstraintModel model(d, box);
    place([&](const Vec &u) {
      const Vec r = model.responses(u);
      return r[0] <= kRaeMomentMax - 0.002 && model.trim_margin(u) >= 0.3
             && r[2] >= kRaeThicknessMin + 2e-5;
    });
  } else if (c == SurrogateCase::oneram6_c) {
    const OneraConstraintModel model(box);
    place([&](const Vec &u) {
      const Vec r = model.responses(u);
      for (int i = 0; i < 5; ++i)
        if (r[i] < kOneraThicknessMin[i] + 2e-5)
          return false;
      return model.trim_margin(u) >= 0.2;
    });
  }
  return m;
}

Problem surrogate_aero_problem(SurrogateCase c, int d) {
  const CaseTraits &t = traits(c);
  if (c == SurrogateCase::oneram6_c) {
    if (d != 12)
      throw std::invalid_argument("oneram6-c requires d = 12");
  } else if (d != 4 && d != 8 && d != 16 && d != 32) {
    throw std::invalid_argument(std::string(t.id)
                                + " supports d in {4, 8, 16, 32}");
  }

  const BoxNormalizer box = BoxNormalizer::uniform(d, t.lo, t.hi);
  const auto drag = std::make_shared<const DragModel>(surrogate_drag_model(c, d));
  std::vector<ConstraintSpec> specs;
  std::function<Vec(const Vec &)> responses;

  if (c == SurrogateCase::rae2822_c) {
    specs = { { "cmz", Relation::less_equal, kRaeMomentMax },
              { "cl", Relation::equal, kRaeLiftTarget },
              { "tmax", Relation::greater_equal, kRaeThicknessMin } };
    auto model = std::make_shared<const RaeConstraintModel>(d, box);
    responses = [model](const Vec &u) { return model->responses(u); };
  } else if (c == SurrogateCase::oneram6_c) {
    for (int i = 0; i < 5; ++i)
      specs.push_back({ "t" + std::to_string(i + 1), Relation::greater_equal,
                        kOneraThicknessMin[i] });
    specs.push_back({ "cl", Relation::equal, kOneraLiftTarget });
    auto model = std::make_shared<const OneraConstraintModel>(box);
    responses = [model](const Vec &u) { return model->responses(u); };
  }

  Backend backend = [drag, responses](const Vec &u, bool want_gradient) {
    std::optional<Vec> g;
    if (want_gradient)
      g = drag->gradient(u);
    return EvaluationResult::success(drag->value(u),
                                     responses ? responses(u) : Vec(),
                                     std::move(g));
  };

  Problem p(std::string(t.display) + " d=" + std::to_string(d), t.tag, box,
            std::move(specs), std::move(backend), true,
            KnownOptimum{ drag->u_star, drag->f_star });
  p.set_catalog_id(std::string(t.id) + ":" + std::to_string(d));
  return p;
}

Problem calibration_problem(const std::string &name) {
  Problem out = [&]() -> Problem {
    if (name == "sphere2") {
      const Vec c = (Vec(2) << 0.5, -0.25).finished();
      return analytic_problem(
          "sphere2", BoxNormalizer::uniform(2, -2.0, 2.0), {},
          [c](const Vec &x) { return (x - c).squaredNorm(); },
          [c](const Vec &x) { return Vec(2.0 * (x - c)); }, nullptr, c, 0.0);
    }
    if (name == "rosenbrock10") {
      const int n = 10;
      auto f = [](const Vec &x) {
        double s = 0.0;
        for (Eigen::Index i = 0; i + 1 < x.size(); ++i)
          s += 100.0 * std::pow(x[i + 1] - x[i] * x[i], 2)
               + std::pow(1.0 - x[i], 2);
        return s;
      };
      auto g = [](const Vec &x) {
        Vec gr = Vec::Zero(x.size());
        for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
          const double t = x[i + 1] - x[i] * x[i];
          gr[i] += -400.0 * x[i] * t - 2.0 * (1.0 - x[i]);
          gr[i + 1] += 200.0 * t;
        }
        return gr;
      };
      return analytic_problem("rosenbrock10", BoxNormalizer::uniform(n, -2.0, 2.0),
                              {}, f, g, nullptr, Vec::Ones(n), 0.0);
    }
    if (name == "circle-lp") {
      const double r = std::sqrt(0.5);
      return analytic_problem(
          "circle-lp", BoxNormalizer::uniform(2, -2.0, 2.0),
          { { "radius2", Relation::less_equal, 1.0 } },
          [](const Vec &x) { return x[0] + x[1]; },
          [](const Vec &) { return Vec(Vec::Ones(2)); },
          [](const Vec &x) { return Vec::Constant(1, x.squaredNorm()).eval(); },
          (Vec(2) << -r, -r).finished(), -2.0 * r);
    }
    if (name == "eq-quadratic") {
      return analytic_problem(
          "eq-quadratic", BoxNormalizer::uniform(2, -3.0, 3.0),
          { { "line", Relation::equal, 1.0 } },
          [](const Vec &x) {
            return std::pow(x[0] - 1.0, 2) + std::pow(x[1] - 2.0, 2);
          },
          [](const Vec &x) {
            return (Vec(2) << 2.0 * (x[0] - 1.0), 2.0 * (x[1] - 2.0)).finished();
          },
          [](const Vec &x) { return Vec::Constant(1, x[0] + x[1]).eval(); },
          (Vec(2) << 0.0, 1.0).finished(), 2.0);
    }
    if (name == "quadratic1d") {
      return analytic_problem(
          "quadratic1d", BoxNormalizer::uniform(1, 0.0, 1.0), {},
          [](const Vec &x) { return std::pow(x[0] - 0.3, 2); },
          [](const Vec &x) { return Vec::Constant(1, 2.0 * (x[0] - 0.3)).eval(); },
          nullptr, Vec::Constant(1, 0.3), 0.0);
    }
    throw std::invalid_argument("unknown calibration problem '" + name + "'");
  }();
  out.set_catalog_id(name);
  return out;
}

Problem make_problem(const std::string &id) {
  const auto colon = id.find(':');
  if (colon == std::string::npos)
    return calibration_problem(id);
  const std::string case_id = id.substr(0, colon);
  int d = 0;
  try {
    std::size_t used = 0;
    d = std::stoi(id.substr(colon + 1), &used);
    if (used != id.size() - colon - 1)
      throw std::invalid_argument("trailing characters");
  } catch (const std::exception &) {
    throw std::invalid_argument("bad dimension in problem id '" + id + "'");
  }
  return surrogate_aero_problem(surrogate_case_from_string(case_id), d);
}

std::vector<std::string> list_problem_ids() {
  std::vector<std::string> ids = { "sphere2", "rosenbrock10", "circle-lp",
                                   "eq-quadratic", "quadratic1d" };
  for (int c = 0; c < 3; ++c)
    for (int d: { 4, 8, 16, 32 })
      ids.push_back(std::string(kTraits[c].id) + ":" + std::to_string(d));
  ids.emplace_back("oneram6-c:12");
  return ids;
}

}  // namespace aerobench::problems
