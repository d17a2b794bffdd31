//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <chrono>

#include "doctest.h"

#include "aerobench/harness/campaign.hpp"
#include "aerobench/problems/catalog.hpp"
#include "aerobench/problems/external.hpp"
#include "aerobench/problems/problem_file.hpp"

using namespace aerobench;
using namespace aerobench::problems;

namespace {

std::vector<std::string> echo(std::vector<std::string> args = {}) {
  args.insert(args.begin(), AEROBENCH_ECHO_EVALUATOR);
  return args;
}

ExternalOptions options(std::vector<std::string> argv, int dim, int n_con,
                        double timeout = 5.0) {
  return ExternalOptions{ std::move(argv), dim, n_con, timeout };
}

}  // namespace

TEST_CASE("command lines split on whitespace and honour quotes") {
  CHECK(split_command("prog -a  'b c' \"d e\"")
        == std::vector<std::string>{ "prog", "-a", "b c", "d e" });
  CHECK(split_command("''") == std::vector<std::string>{ "" });
  CHECK_THROWS_AS(split_command("prog 'open"), std::invalid_argument);
}

TEST_CASE("an external evaluator reproduces in-process responses") {
  for (const std::string id: { "rae2822-c:8", "sphere2" }) {
    const auto local = make_problem(id);
    const auto remote =
        with_external_evaluator(local, echo({ "--problem", id }), 10.0, 1, true);
    Rng rng(31);
    for (int t = 0; t < 10; ++t) {
      const Vec u = Vec::NullaryExpr(local.dim(), [&] { return uniform01(rng); });
      const auto a = local.evaluate(u, true), b = remote.evaluate(u, true);
      REQUIRE(a.ok());
      REQUIRE(b.ok());
      CHECK(std::abs(a.f - b.f) <= 1e-12 * std::max(1.0, std::abs(a.f)));
      REQUIRE(a.c.size() == b.c.size());
      for (Eigen::Index i = 0; i < a.c.size(); ++i)
        CHECK(std::abs(a.c[i] - b.c[i]) <= 1e-12 * std::max(1.0, std::abs(a.c[i])));
      REQUIRE(b.grad_f.has_value());
      CHECK((*a.grad_f - *b.grad_f).cwiseAbs().maxCoeff()
            <= 1e-9 * std::max(1.0, a.grad_f->cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("reported failures come back as failed results") {
  ExternalClient client(options(echo({ "--fail-rate", "1" }), 2, 0));
  const auto r = client.evaluate(Vec::Constant(2, 0.3));
  CHECK(!r.ok());
  CHECK(r.reason.find("injected") != std::string::npos);
  CHECK(client.running());
}

TEST_CASE("a crashed evaluator yields a failure and is restarted") {
  ExternalClient client(options(echo({ "--die-after", "1" }), 2, 0));
  CHECK(client.evaluate(Vec::Constant(2, 1.0)).ok());
  const auto dead = client.evaluate(Vec::Constant(2, 1.0));
  CHECK(!dead.ok());
  CHECK(!client.running());
  const auto again = client.evaluate(Vec::Constant(2, 2.0));
  CHECK(again.ok());
  CHECK(again.f == doctest::Approx(8.0));
  CHECK(client.restarts() == 1);
}

TEST_CASE("a hung evaluator times out") {
  ExternalClient client(options(echo({ "--hang-after", "0" }), 2, 0, 0.5));
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = client.evaluate(Vec::Constant(2, 1.0));
  const double waited =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(!r.ok());
  CHECK(r.reason.find("timed out") != std::string::npos);
  CHECK(waited < 3.0);
}

TEST_CASE("malformed replies yield failures") {
  ExternalClient client(options(echo({ "--garbage-after", "1" }), 2, 0));
  CHECK(client.evaluate(Vec::Constant(2, 1.0)).ok());
  const auto r = client.evaluate(Vec::Constant(2, 1.0));
  CHECK(!r.ok());
  CHECK(r.reason.find("malformed") != std::string::npos);
}

TEST_CASE("handshake rejections raise HandshakeError") {
  ExternalClient wrong_proto(options(echo({ "--proto", "2" }), 2, 0));
  CHECK_THROWS_AS(wrong_proto.start(), HandshakeError);
  ExternalClient wrong_dim(options(echo({ "--problem", "sphere2" }), 3, 0));
  CHECK_THROWS_AS(wrong_dim.start(), HandshakeError);
  ExternalClient missing(options({ "/nonexistent/evaluator" }, 2, 0));
  CHECK_THROWS(missing.start());
}

TEST_CASE("problem files can name an external evaluator") {
  auto file = describe(make_problem("sphere2"));
  file.surrogate.reset();
  file.external_command = echo({ "--problem", "sphere2" });
  file.external_gradient = true;
  const auto back = parse_problem_file(to_json(file));
  CHECK(back.external_command == file.external_command);
  CHECK(back.external_gradient);
  const auto p = build_problem(back);
  const auto r = p.evaluate(Vec::Constant(2, 0.5), true);
  REQUIRE(r.ok());
  CHECK(r.f == doctest::Approx(make_problem("sphere2").evaluate(Vec::Constant(2, 0.5)).f));
}

TEST_CASE("campaigns against a failing evaluator complete within budget") {
  harness::CampaignPlan plan;
  plan.problems = { "sphere2" };
  plan.solvers = { "bo", "nelder-mead", "lbfgsb" };
  plan.budget = 20;
  plan.n_seed = 6;
  plan.repetitions = 1;
  plan.seed = 3;
  plan.evaluator = std::string(AEROBENCH_ECHO_EVALUATOR)
                   + " --problem sphere2 --fail-rate 0.1 --seed 5";
  plan.audit_gradients = false;
  const auto cells = harness::run_campaign(plan);
  REQUIRE(cells.size() == 3);
  for (const auto &c: cells) {
    CHECK(!c.failed);
    CHECK(c.record.final_ledger.cost() <= plan.budget);
    long failed = 0;
    for (const auto &e: c.record.evaluations)
      failed += e.ok() ? 0 : 1;
    CHECK(c.record.final_ledger.n_failed == failed);
  }
}
