//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "aerobench/bo/bo.hpp"
#include "aerobench/harness/campaign.hpp"
#include "aerobench/harness/export.hpp"
#include "aerobench/harness/metrics.hpp"
#include "aerobench/harness/plot.hpp"
#include "aerobench/problems/catalog.hpp"

using namespace aerobench;
using namespace aerobench::harness;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string &name) {
  const auto p = fs::temp_directory_path() / ("aerobench_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CampaignPlan small_plan() {
  CampaignPlan plan;
  plan.problems = { "sphere2", "circle-lp" };
  plan.solvers = { "bo", "nelder-mead", "cobyla" };
  plan.budget = 16;
  plan.repetitions = 2;
  plan.seed = 7;
  plan.n_seed = 6;
  return plan;
}

RunRow row(int iter, long n_obj, std::optional<double> bf) {
  RunRow r;
  r.iter = iter;
  r.ledger.n_obj = n_obj;
  r.best_feasible = bf;
  r.f = bf;
  r.mcv = 0.0;
  return r;
}

}  // namespace

TEST_CASE("MCV is the largest constraint violation") {
  const auto p = problems::make_problem("circle-lp");
  // x = (1.2, 0.9): |x|^2 = 2.25, violation 1.25.
  const Vec u = p.box().normalize((Vec(2) << 1.2, 0.9).finished());
  CHECK(mcv(p, u).value() == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(mcv(p, Vec::Constant(2, 0.5)).value() == 0.0);
  const auto eq = problems::make_problem("eq-quadratic");
  const Vec v = eq.box().normalize((Vec(2) << 1.0, 1.5).finished());
  CHECK(mcv(eq, v).value() == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("series carry the seed offset on the iteration axis") {
  RunRecord rec;
  rec.seed_offset = 6;
  rec.rows = { row(0, 7, 3.0), row(1, 8, 2.0) };
  const auto it = run_series(rec, Metric::best_feasible, Axis::iteration);
  CHECK(it.x == std::vector<double>{ 6.0, 7.0 });
  const auto cost = run_series(rec, Metric::best_feasible, Axis::cost);
  CHECK(cost.x == std::vector<double>{ 7.0, 8.0 });
}

TEST_CASE("bands satisfy min <= mean <= max and carry values forward") {
  RunRecord a, b, c;
  a.rows = { row(0, 1, 5.0), row(1, 3, 4.0), row(2, 6, 1.0) };
  b.rows = { row(0, 1, 6.0), row(1, 2, 2.0) };
  c.rows = { row(0, 2, 0.1 + 0.2), row(1, 5, 0.3) };
  const auto band = aggregate({ &a, &b, &c }, Metric::best_feasible, Axis::cost);
  REQUIRE(band.size() > 0);
  CHECK(band.repetitions == 3);
  CHECK(band.x.front() == 2.0);  // the first abscissa where every run is defined
  for (std::size_t i = 0; i < band.size(); ++i) {
    CHECK(band.min[i] <= band.mean[i]);
    CHECK(band.mean[i] <= band.max[i]);
  }
  // At cost 4: a = 4 (from cost 3), b = 2, c = 0.3.
  const auto it = std::find(band.x.begin(), band.x.end(), 3.0);
  REQUIRE(it != band.x.end());
  const auto k = static_cast<std::size_t>(it - band.x.begin());
  CHECK(band.min[k] == doctest::Approx(0.3));
  CHECK(band.max[k] == doctest::Approx(4.0));
  CHECK(band.mean[k] == doctest::Approx((4.0 + 2.0 + 0.3) / 3.0));
}

TEST_CASE("bands from identical runs collapse exactly") {
  RunRecord a;
  a.rows = { row(0, 1, 0.1), row(1, 2, 0.7), row(2, 3, 1.0 / 3.0) };
  const auto band = aggregate({ &a, &a, &a }, Metric::best_feasible, Axis::cost);
  for (std::size_t i = 0; i < band.size(); ++i) {
    CHECK(band.min[i] <= band.mean[i]);
    CHECK(band.mean[i] <= band.max[i]);
  }
}

TEST_CASE("run tables round-trip, including missing values") {
  RunRecord rec;
  RunRow r = row(3, 11, std::nullopt);
  r.ledger.n_grad = 4;
  r.f = 0.1 + 0.2;
  r.mcv = std::nullopt;
  r.grad_inf_norm = 1e-300;
  r.status = "failed";
  rec.rows = { row(0, 1, 1.0 / 3.0), r };
  const auto csv = run_table_csv(rec);
  CHECK(csv.rfind(std::string(kRunColumns) + "\n", 0) == 0);
  const auto back = parse_run_table(csv);
  REQUIRE(back.size() == 2);
  CHECK(back[0].best_feasible.value() == 1.0 / 3.0);
  CHECK(back[1].f.value() == 0.1 + 0.2);
  CHECK(!back[1].best_feasible.has_value());
  CHECK(!back[1].mcv.has_value());
  CHECK(back[1].grad_inf_norm.value() == 1e-300);
  CHECK(back[1].status == "failed");
  CHECK(back[1].ledger.cost() == 15);
}

TEST_CASE("malformed run tables are rejected") {
  CHECK_THROWS(parse_run_table("iter,f\n0,1\n"));
  CHECK_THROWS(parse_run_table(std::string(kRunColumns) + "\n0,1,1,3,1,1,0,,ok\n"));
  CHECK_THROWS(parse_run_table(std::string(kRunColumns) + "\n0,1,1,2,1,1,0\n"));
}

TEST_CASE("plans round-trip through JSON") {
  auto plan = small_plan();
  plan.evaluator = "prog --flag 'two words'";
  plan.gradient_mode = GradientMode::forward_difference;
  plan.audit_gradients = false;
  const auto back = plan_from_json(plan_to_json(plan));
  CHECK(back.problems == plan.problems);
  CHECK(back.solvers == plan.solvers);
  CHECK(back.budget == plan.budget);
  CHECK(back.repetitions == plan.repetitions);
  CHECK(back.seed == plan.seed);
  CHECK(back.n_seed == plan.n_seed);
  CHECK(back.evaluator == plan.evaluator);
  CHECK(back.gradient_mode == plan.gradient_mode);
  CHECK(back.audit_gradients == plan.audit_gradients);
  CHECK(plan_to_json(back) == plan_to_json(plan));
}

TEST_CASE("invalid plans are rejected") {
  auto plan = small_plan();
  plan.solvers = { "hill-climbing" };
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
  plan = small_plan();
  plan.budget = 0;
  CHECK_THROWS_AS(plan.validate(), std::invalid_argument);
  plan = small_plan();
  plan.problems = { "no-such-problem" };
  CHECK_THROWS(run_campaign(plan));
}

TEST_CASE("solvers share the seed pool of a repetition") {
  auto plan = small_plan();
  plan.problems = { "sphere2" };
  plan.solvers = { "bo", "nelder-mead" };
  const auto cells = run_campaign(plan);
  REQUIRE(cells.size() == 4);
  const auto p = problems::make_problem("sphere2");
  for (int rep = 0; rep < 2; ++rep) {
    const auto pool = draw_seed_pool(p, 6, repetition_seed(plan.seed, rep));
    const auto &bo = cells[2 * rep].record;
    const auto &nm = cells[2 * rep + 1].record;
    REQUIRE(cells[2 * rep].solver == "bo");
    CHECK(bo.seed_offset == 6);
    for (int i = 0; i < 6; ++i)
      CHECK(bo.evaluations[i].u == pool.points.row(i).transpose());
    // The local solver starts from the pool's best point.
    CHECK(nm.evaluations.front().u == pool.x0);
    double best = pool.entries[0].f;
    for (const auto &e: pool.entries)
      best = std::min(best, e.f);
    CHECK(pool.entries[pool.x0_index].f == best);
    CHECK(bo.final_ledger.cost() == plan.budget);
    CHECK(nm.final_ledger.cost() <= plan.budget);
    CHECK(nm.final_ledger.n_grad == 0);
  }
}

TEST_CASE("campaign exports are deterministic and reload") {
  const auto plan = small_plan();
  const auto d1 = fresh_dir("export1"), d2 = fresh_dir("export2");
  export_campaign(d1.string(), plan, run_campaign(plan));
  export_campaign(d2.string(), plan, run_campaign(plan));
  CHECK(slurp(d1 / "manifest.json") == slurp(d2 / "manifest.json"));
  int tables = 0;
  for (const auto &e: fs::directory_iterator(d1 / "runs")) {
    CHECK(slurp(e.path()) == slurp(d2 / "runs" / e.path().filename()));
    ++tables;
  }
  CHECK(tables == 3 * 2 * 3 * 2);

  const auto loaded = load_campaign(d1.string());
  CHECK(plan_to_json(loaded.plan) == plan_to_json(plan));
  REQUIRE(loaded.cells.size() == 12);
  for (const auto &c: loaded.cells) {
    // Nelder-Mead does not accept constraints; that cell fails on its own.
    const bool expect_failure = c.solver == "nelder-mead" && c.problem == "circle-lp";
    CHECK(c.failed == expect_failure);
    if (expect_failure) {
      CHECK(c.record.termination == "error");
      continue;
    }
    CHECK(!c.record.rows.empty());
    for (const auto &r: c.record.rows)
      CHECK(r.ledger.cost() == r.ledger.n_obj + r.ledger.n_grad);
  }
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("an unwritable output directory raises IoError before any manifest") {
  const auto base = fresh_dir("unwritable");
  fs::create_directories(base);
  { std::ofstream(base / "blocker") << "x"; }
  const auto target = base / "blocker" / "out";
  CampaignPlan plan = small_plan();
  CHECK_THROWS_AS(export_campaign(target.string(), plan, {}), IoError);
  CHECK(!fs::exists(target / "manifest.json"));
  CHECK_THROWS_AS(load_campaign((base / "missing").string()), IoError);
  fs::remove_all(base);
}

TEST_CASE("plots offset BO curves by the seed size") {
  auto plan = small_plan();
  plan.problems = { "sphere2" };
  plan.solvers = { "bo", "nelder-mead" };
  plan.repetitions = 3;
  const auto cells = run_campaign(plan);
  std::vector<const RunRecord *> recs;
  for (const auto &c: cells)
    recs.push_back(&c.record);
  const auto data = plot_data("sphere2", recs, Metric::best_feasible, Axis::iteration);
  REQUIRE(data.curves.size() == 2);
  CHECK(data.curves[0].solver == "bo");
  CHECK(data.curves[0].band.x.front() == 6.0);
  CHECK(data.curves[0].band.repetitions == 3);
  CHECK(data.curves[1].band.x.front() == 0.0);
  const auto by_cost = plot_data("sphere2", recs, Metric::best_feasible, Axis::cost);
  CHECK(by_cost.curves[0].band.x.front() >= 6.0);
  for (const auto &c: data.curves)
    for (std::size_t i = 0; i < c.band.size(); ++i) {
      CHECK(c.band.min[i] <= c.band.mean[i]);
      CHECK(c.band.mean[i] <= c.band.max[i]);
    }

  const auto svg = render_svg(data);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("data-solver=\"bo\"") != std::string::npos);
  CHECK(svg.find("bo (3 reps)") != std::string::npos);

  const auto dir = fresh_dir("plots");
  const auto files = plot_campaign(cells, Metric::mcv, Axis::cost, dir.string());
  REQUIRE(files.size() == 1);
  CHECK(fs::exists(files[0]));
  fs::remove_all(dir);
}

TEST_CASE("derivative-free runs get audited gradient norms on a separate ledger") {
  auto plan = small_plan();
  plan.problems = { "sphere2" };
  plan.solvers = { "nelder-mead", "lbfgsb" };
  plan.repetitions = 1;
  const auto cells = run_campaign(plan);
  const auto &nm = cells[0].record, &qn = cells[1].record;
  CHECK(nm.final_ledger.n_grad == 0);
  CHECK(nm.audit_ledger.n_grad > 0);
  for (const auto &r: nm.rows)
    CHECK(r.grad_inf_norm.has_value());
  CHECK(qn.audit_ledger.n_grad == 0);
  CHECK(qn.final_ledger.n_grad > 0);
}
