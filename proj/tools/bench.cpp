//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "aerobench/harness/campaign.hpp"
#include "aerobench/harness/export.hpp"
#include "aerobench/harness/plot.hpp"
#include "aerobench/problems/catalog.hpp"
#include "aerobench/verify/suite.hpp"
#include "aerobench/version.hpp"

namespace ah = aerobench::harness;
namespace ap = aerobench::problems;

namespace {

constexpr int kOk = 0, kUsage = 1, kCellFailures = 2, kVerifyFailure = 3;

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty())
      out.push_back(item);
  return out;
}

std::string opt_num(const std::optional<double> &v) {
  if (!v)
    return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *v);
  return buf;
}

int cmd_list() {
  std::printf("problems:\n");
  std::printf("  %-16s %4s %5s  %s\n", "id", "dim", "n_con", "tag");
  for (const auto &id: ap::list_problem_ids()) {
    const auto p = ap::make_problem(id);
    std::printf("  %-16s %4d %5d  %s\n", id.c_str(), p.dim(),
                p.num_constraints(), p.tag().c_str());
  }
  std::printf("solvers:\n");
  for (const auto &s: ah::list_solver_ids())
    std::printf("  %s\n", s.c_str());
  return kOk;
}

int cmd_run(ah::CampaignPlan plan, const std::string &out,
            const std::string &manifest) {
  if (!manifest.empty()) {
    std::ifstream in(manifest);
    if (!in)
      throw std::invalid_argument("cannot read manifest '" + manifest + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    plan = ah::plan_from_json(ss.str());
  }
  plan.validate();
  const auto cells = ah::run_campaign(plan);
  ah::export_campaign(out, plan, cells);

  int failures = 0;
  std::printf("%-20s %-12s %3s %14s %8s %6s  %s\n", "problem", "solver", "rep",
              "best_feasible", "cost", "true", "termination");
  for (const auto &c: cells) {
    const auto &r = c.record;
    std::printf("%-20s %-12s %3d %14s %8ld %6ld  %s\n", c.problem.c_str(),
                c.solver.c_str(), c.repetition,
                opt_num(r.final_best_feasible()).c_str(), r.final_ledger.cost(),
                r.final_ledger.true_cost(),
                c.failed ? ("error: " + c.error).c_str() : r.termination.c_str());
    failures += c.failed;
  }
  std::printf("wrote %s/manifest.json\n", out.c_str());
  return failures ? kCellFailures : kOk;
}

int cmd_plot(const std::string &in, const std::string &metric,
             const std::string &axis, std::string out) {
  const auto m = ah::metric_from_string(metric);
  const auto a = ah::axis_from_string(axis);
  const auto loaded = ah::load_campaign(in);
  if (out.empty())
    out = (std::filesystem::path(in) / "plots").string();
  for (const auto &path: ah::plot_campaign(loaded.cells, m, a, out))
    std::printf("%s\n", path.c_str());
  return kOk;
}

int cmd_verify(const std::vector<std::string> &only, std::uint64_t seed) {
  const auto names = only.empty() ? aerobench::verify::list_checks() : only;
  bool all = true;
  for (const auto &n: names) {
    const auto r = aerobench::verify::run_check(n, seed);
    std::printf("[%s] %-20s %6.2fs  %s\n", r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.seconds, r.detail.c_str());
    all &= r.pass;
  }
  return all ? kOk : kVerifyFailure;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{ "aerobench: derivative-free vs derivative-based optimization "
                "benchmarks" };
  app.set_version_flag("--version", aerobench::kVersion);
  app.require_subcommand(1);

  app.add_subcommand("list", "list built-in problems and solvers");

  auto *run = app.add_subcommand("run", "run a campaign and export its histories");
  ah::CampaignPlan plan;
  std::string problems, solvers, out, manifest, gradient = "central";
  bool no_audit = false;
  run->add_option("--problem", problems,
                  "problem ids or .json problem files, comma separated");
  run->add_option("--solver", solvers, "solver ids, comma separated");
  run->add_option("--budget", plan.budget, "cost budget (objective + gradient evaluations)")
      ->check(CLI::PositiveNumber);
  run->add_option("--reps", plan.repetitions, "repetitions")->check(CLI::PositiveNumber);
  run->add_option("--seed", plan.seed, "campaign seed");
  run->add_option("--n-seed", plan.n_seed, "seed-design size (0: max(2d, 10))");
  run->add_option("--evaluator", plan.evaluator, "external evaluator command line");
  run->add_option("--timeout", plan.evaluator_timeout_s, "evaluator timeout in seconds")
      ->check(CLI::PositiveNumber);
  run->add_option("--workers", plan.workers, "parallel campaign cells")
      ->check(CLI::PositiveNumber);
  run->add_option("--gradient", gradient, "gradient source: analytic, central, forward")
      ->check(CLI::IsMember({ "analytic", "central", "forward" }));
  run->add_flag("--no-audit", no_audit,
                "skip out-of-band gradient norms for derivative-free solvers");
  run->add_option("--manifest", manifest,
                  "re-run the plan recorded in a manifest.json");
  run->add_option("--out", out, "output directory")->required();

  auto *plot = app.add_subcommand("plot", "plot an exported campaign as SVG");
  std::string in, metric = "best_feasible", axis = "iteration", plot_out;
  plot->add_option("--in", in, "campaign directory")->required();
  plot->add_option("--metric", metric, "objective, best_feasible, mcv, gradnorm")
      ->check(CLI::IsMember({ "objective", "best_feasible", "mcv", "gradnorm" }));
  plot->add_option("--x", axis, "iteration or cost")
      ->check(CLI::IsMember({ "iteration", "cost" }));
  plot->add_option("--out", plot_out, "output directory (default <in>/plots)");

  auto *verify = app.add_subcommand("verify", "run the oracle self-checks");
  std::string only;
  std::uint64_t verify_seed = 1;
  verify->add_option("--check", only, "comma separated subset of checks");
  verify->add_option("--seed", verify_seed, "seed of the random cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (app.got_subcommand("list"))
      return cmd_list();
    if (app.got_subcommand("run")) {
      if (manifest.empty()) {
        if (problems.empty() || solvers.empty() || plan.budget <= 0) {
          std::fprintf(stderr,
                       "bench run: --problem, --solver and --budget are required "
                       "(or --manifest)\n");
          return kUsage;
        }
        plan.problems = split_list(problems);
        plan.solvers = split_list(solvers);
        plan.gradient_mode = aerobench::gradient_mode_from_string(gradient);
        plan.audit_gradients = !no_audit;
      }
      return cmd_run(plan, out, manifest);
    }
    if (app.got_subcommand("plot"))
      return cmd_plot(in, metric, axis, plot_out);
    if (app.got_subcommand("verify"))
      return cmd_verify(split_list(only), verify_seed);
  } catch (const ah::IoError &e) {
    std::fprintf(stderr, "bench: %s\n", e.what());
    return kUsage;
  } catch (const std::invalid_argument &e) {
    std::fprintf(stderr, "bench: %s\n", e.what());
    return kUsage;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "bench: %s\n", e.what());
    return kCellFailures;
  }
  return kUsage;
}
