//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Test double for the external evaluator protocol. Answers requests with
// f = |x|^2 (or with a built-in problem's responses) and can inject faults.

#include <chrono>
#include <cstdint>
#include <cstring>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "aerobench/problems/catalog.hpp"
#include "json.hpp"

using json = nlohmann::json;
using aerobench::Vec;

namespace {

// Deterministic per design, so that reruns fail at the same sites.
double site_uniform(const std::vector<double> &x, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (double v: x) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i)
      h = (h ^ ((bits >> (8 * i)) & 0xff)) * 0x100000001b3ULL;
  }
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

void reply(const json &j) {
  std::cout << j.dump() << "\n" << std::flush;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{ "aerobench echo evaluator (protocol test double)" };
  std::string problem_id;
  double fail_rate = 0.0;
  std::uint64_t seed = 0;
  long die_after = -1, hang_after = -1, garbage_after = -1;
  int proto = 1;
  app.add_option("--problem", problem_id,
                 "answer with a built-in problem's responses instead of |x|^2");
  app.add_option("--fail-rate", fail_rate, "fraction of requests reported failed")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--seed", seed, "seed of the failure pattern");
  app.add_option("--die-after", die_after,
                 "exit without replying to request number N (0-based)");
  app.add_option("--hang-after", hang_after,
                 "stop replying from request number N on");
  app.add_option("--garbage-after", garbage_after,
                 "reply with malformed text from request number N on");
  app.add_option("--proto", proto, "protocol version to accept");
  CLI11_PARSE(app, argc, argv);

  std::optional<aerobench::problems::Problem> problem;
  if (!problem_id.empty())
    problem = aerobench::problems::make_problem(problem_id);

  std::string line;
  if (!std::getline(std::cin, line))
    return 1;
  const json hello = json::parse(line, nullptr, false);
  const int dim = hello.value("dim", -1);
  const int n_con = hello.value("n_con", -1);
  if (hello.is_discarded() || hello.value("proto", -1) != proto) {
    reply({ { "ok", false }, { "error", "unsupported protocol version" } });
    return 1;
  }
  if (problem && (dim != problem->dim() || n_con != problem->num_constraints())) {
    reply({ { "ok", false }, { "error", "dimension mismatch" } });
    return 1;
  }
  if (dim <= 0 || n_con < 0) {
    reply({ { "ok", false }, { "error", "bad dimensions" } });
    return 1;
  }
  reply({ { "ok", true } });

  for (long served = 0; std::getline(std::cin, line); ++served) {
    const json req = json::parse(line, nullptr, false);
    if (served == die_after)
      return 3;
    if (hang_after >= 0 && served >= hang_after) {
      for (;;)
        std::this_thread::sleep_for(std::chrono::hours(1));
    }
    if (garbage_after >= 0 && served >= garbage_after) {
      std::cout << "this is not json\n" << std::flush;
      continue;
    }
    if (req.is_discarded() || !req.contains("id") || !req.contains("x")) {
      reply({ { "id", -1 }, { "status", "failed" }, { "reason", "bad request" } });
      continue;
    }
    const auto id = req["id"];
    const auto x = req["x"].get<std::vector<double>>();
    if (static_cast<int>(x.size()) != dim) {
      reply({ { "id", id }, { "status", "failed" }, { "reason", "bad x" } });
      continue;
    }
    if (fail_rate > 0.0 && site_uniform(x, seed) < fail_rate) {
      reply({ { "id", id }, { "status", "failed" },
              { "reason", "injected failure" } });
      continue;
    }
    if (!problem) {
      double f = 0.0;
      std::vector<double> g(dim);
      for (int i = 0; i < dim; ++i) {
        f += x[i] * x[i];
        g[i] = 2.0 * x[i];
      }
      reply({ { "id", id }, { "status", "ok" }, { "f", f },
              { "c", std::vector<double>(n_con, 0.0) }, { "grad_f", g } });
      continue;
    }
    const auto &box = problem->box();
    const Vec u = box.normalize(Eigen::Map<const Vec>(x.data(), dim));
    if (!aerobench::inside_unit_box(u, 1e-12)) {
      reply({ { "id", id }, { "status", "failed" },
              { "reason", "outside bounds" } });
      continue;
    }
    const auto r = problem->backend()(aerobench::clamp_unit(u), true);
    if (!r.ok()) {
      reply({ { "id", id }, { "status", "failed" }, { "reason", r.reason } });
      continue;
    }
    json out = { { "id", id }, { "status", "ok" }, { "f", r.f },
                 { "c", std::vector<double>(r.c.data(), r.c.data() + r.c.size()) } };
    if (r.grad_f) {
      const Vec g = r.grad_f->cwiseQuotient(box.hi() - box.lo());
      out["grad_f"] = std::vector<double>(g.data(), g.data() + g.size());
    }
    reply(out);
  }
  return 0;
}
