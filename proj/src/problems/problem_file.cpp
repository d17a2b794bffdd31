//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "aerobench/problems/problem_file.hpp"

#include <fstream>
#include <sstream>

#include "aerobench/problems/catalog.hpp"
#include "aerobench/problems/external.hpp"
#include "json.hpp"

namespace aerobench::problems {
namespace {
  using json = nlohmann::json;

  [[noreturn]] void bad(const std::string &what) {
    throw std::invalid_argument("problem file: " + what);
  }

  bool ends_with(const std::string &s, const std::string &suffix) {
    return s.size() >= suffix.size()
           && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
  }
}  // namespace

ProblemFile parse_problem_file(const std::string &text) {
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    bad("not a JSON object");
  ProblemFile f;
  try {
    f.name = j.at("name").get<std::string>();
    f.tag = j.value("tag", std::string());
    f.dim = j.at("dim").get<int>();
    if (f.dim <= 0)
      bad("dim must be positive");
    const auto &b = j.at("bounds");
    if (!b.is_array() || static_cast<int>(b.size()) != f.dim)
      bad("bounds must list one [lo, hi] pair per dimension");
    f.lo.resize(f.dim);
    f.hi.resize(f.dim);
    for (int i = 0; i < f.dim; ++i) {
      if (!b[i].is_array() || b[i].size() != 2)
        bad("bounds entry " + std::to_string(i) + " is not a [lo, hi] pair");
      f.lo[i] = b[i][0].get<double>();
      f.hi[i] = b[i][1].get<double>();
    }
    if (j.contains("constraints")) {
      for (const auto &c: j.at("constraints")) {
        ConstraintSpec s;
        s.name = c.value("name", std::string());
        s.relation = relation_from_string(c.at("relation").get<std::string>());
        s.threshold = c.at("threshold").get<double>();
        f.constraints.push_back(s);
      }
    }
    if (j.contains("surrogate"))
      f.surrogate = j.at("surrogate").get<std::string>();
    if (j.contains("external")) {
      const auto &e = j.at("external");
      const auto &cmd = e.at("command");
      if (cmd.is_string())
        f.external_command = split_command(cmd.get<std::string>());
      else
        f.external_command = cmd.get<std::vector<std::string>>();
      f.external_timeout_s = e.value("timeout", 30.0);
      f.external_workers = e.value("workers", 1);
      f.external_gradient = e.value("gradient", false);
    }
  } catch (const json::exception &e) {
    bad(e.what());
  }
  if (f.surrogate.has_value() == !f.external_command.empty())
    bad("exactly one of \"surrogate\" and \"external\" is required");
  BoxNormalizer(f.lo, f.hi);  // validates lo < hi
  return f;
}

ProblemFile load_problem_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot read problem file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem_file(ss.str());
}

std::string to_json(const ProblemFile &f) {
  json j;
  j["name"] = f.name;
  if (!f.tag.empty())
    j["tag"] = f.tag;
  j["dim"] = f.dim;
  json b = json::array();
  for (int i = 0; i < f.dim; ++i)
    b.push_back({ f.lo[i], f.hi[i] });
  j["bounds"] = b;
  json cs = json::array();
  for (const auto &c: f.constraints)
    cs.push_back({ { "name", c.name },
                   { "relation", to_string(c.relation) },
                   { "threshold", c.threshold } });
  j["constraints"] = cs;
  if (f.surrogate)
    j["surrogate"] = *f.surrogate;
  if (!f.external_command.empty())
    j["external"] = { { "command", f.external_command },
                      { "timeout", f.external_timeout_s },
                      { "workers", f.external_workers },
                      { "gradient", f.external_gradient } };
  return j.dump(2) + "\n";
}

void save_problem_file(const ProblemFile &file, const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write problem file '" + path + "'");
  out << to_json(file);
  if (!out)
    throw std::runtime_error("write failed for '" + path + "'");
}

ProblemFile describe(const Problem &p) {
  ProblemFile f;
  f.name = p.name();
  f.tag = p.tag();
  f.dim = p.dim();
  f.lo = p.box().lo();
  f.hi = p.box().hi();
  f.constraints = p.constraints();
  if (!p.catalog_id().empty())
    f.surrogate = p.catalog_id();
  return f;
}

Problem build_problem(const ProblemFile &f) {
  BoxNormalizer box(f.lo, f.hi);
  if (f.surrogate) {
    Problem base = make_problem(*f.surrogate);
    if (base.dim() != f.dim)
      bad("dim " + std::to_string(f.dim) + " does not match surrogate '"
          + *f.surrogate + "'");
    if (base.num_constraints() != static_cast<int>(f.constraints.size()))
      bad("surrogate '" + *f.surrogate + "' has "
          + std::to_string(base.num_constraints()) + " constraints");
    return base.with_constraints(f.constraints)
        .with_box(std::move(box))
        .renamed(f.name, f.tag.empty() ? base.tag() : f.tag);
  }
  ExternalOptions opt{ f.external_command, f.dim,
                       static_cast<int>(f.constraints.size()),
                       f.external_timeout_s };
  auto pool = std::make_shared<ExternalPool>(opt, f.external_workers);
  return Problem(f.name, f.tag.empty() ? "external" : f.tag, box,
                 f.constraints, external_backend(pool, box),
                 f.external_gradient);
}

Problem resolve_problem(const std::string &id_or_path) {
  if (ends_with(id_or_path, ".json"))
    return build_problem(load_problem_file(id_or_path));
  return make_problem(id_or_path);
}

Problem with_external_evaluator(const Problem &problem,
                                const std::vector<std::string> &argv,
                                double timeout_s, int workers,
                                bool analytic_gradient) {
  ExternalOptions opt{ argv, problem.dim(), problem.num_constraints(),
                       timeout_s };
  auto pool = std::make_shared<ExternalPool>(opt, workers);
  return problem.with_backend(external_backend(pool, problem.box()),
                              analytic_gradient);
}

}  // namespace aerobench::problems
