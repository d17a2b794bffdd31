//
// aerobench - Copyright 2026 The aerobench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "aerobench/harness/export.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <Eigen/Core>

#include "aerobench/version.hpp"
#include "json.hpp"

namespace aerobench::harness {
namespace {
  namespace fs = std::filesystem;
  using json = nlohmann::json;

  std::string real(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
  }

  std::string field(const std::optional<double> &v) {
    return v ? real(*v) : std::string();
  }

  std::vector<std::string> split_fields(const std::string &line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch: line) {
      if (ch == ',') {
        out.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur += ch;
      }
    }
    out.push_back(cur);
    return out;
  }

  template <class T> T parse_number(const std::string &s, const char *what) {
    T v{};
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
      throw std::invalid_argument(std::string("run table: bad ") + what
                                  + " '" + s + "'");
    return v;
  }

  std::optional<double> parse_optional(const std::string &s, const char *what) {
    if (s.empty())
      return std::nullopt;
    return parse_number<double>(s, what);
  }

  json ledger_json(const LedgerSnapshot &l) {
    return { { "n_obj", l.n_obj },
             { "n_grad", l.n_grad },
             { "n_grad_analytic", l.n_grad_analytic },
             { "n_stencil", l.n_stencil },
             { "n_failed", l.n_failed },
             { "cost", l.cost() },
             { "true_cost", l.true_cost() } };
  }

  LedgerSnapshot ledger_from_json(const json &j) {
    LedgerSnapshot l;
    l.n_obj = j.at("n_obj").get<long>();
    l.n_grad = j.at("n_grad").get<long>();
    l.n_grad_analytic = j.at("n_grad_analytic").get<long>();
    l.n_stencil = j.at("n_stencil").get<long>();
    l.n_failed = j.at("n_failed").get<long>();
    return l;
  }

  std::string slug(const std::string &s) {
    std::string out;
    for (char ch: s)
      out += std::isalnum(static_cast<unsigned char>(ch)) || ch == '-'
                     || ch == '_' || ch == '.'
                 ? ch
                 : '-';
    return out;
  }

  std::string read_file(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    if (!in)
      throw IoError("cannot read '" + p.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write_file(const fs::path &p, const std::string &text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    if (!out)
      throw IoError("cannot write '" + p.string() + "'");
  }

  void ensure_writable(const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir / "runs", ec);
    if (ec)
      throw IoError("cannot create '" + (dir / "runs").string()
                    + "': " + ec.message());
    const fs::path probe = dir / ".write-probe";
    {
      std::ofstream out(probe, std::ios::binary | std::ios::trunc);
      out << "probe\n";
      out.close();
      if (!out)
        throw IoError("destination '" + dir.string() + "' is not writable");
    }
    fs::remove(probe, ec);
  }
}  // namespace

std::string run_table_csv(const RunRecord &rec) {
  std::string out = std::string(kRunColumns) + "\n";
  for (const auto &r: rec.rows) {
    out += std::to_string(r.iter) + "," + std::to_string(r.ledger.n_obj) + ","
           + std::to_string(r.ledger.n_grad) + ","
           + std::to_string(r.ledger.cost()) + "," + field(r.f) + ","
           + field(r.best_feasible) + "," + field(r.mcv) + ","
           + field(r.grad_inf_norm) + "," + r.status + "\n";
  }
  return out;
}

std::vector<RunRow> parse_run_table(const std::string &csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("run table: empty");
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  if (line != kRunColumns)
    throw std::invalid_argument("run table: unexpected header '" + line + "'");
  std::vector<RunRow> rows;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    const auto f = split_fields(line);
    if (f.size() != 9)
      throw std::invalid_argument("run table: expected 9 fields in '" + line
                                  + "'");
    RunRow r;
    r.iter = parse_number<int>(f[0], "iter");
    r.ledger.n_obj = parse_number<long>(f[1], "n_obj");
    r.ledger.n_grad = parse_number<long>(f[2], "n_grad");
    if (parse_number<long>(f[3], "cost") != r.ledger.cost())
      throw std::invalid_argument("run table: cost != n_obj + n_grad in '"
                                  + line + "'");
    r.f = parse_optional(f[4], "f");
    r.best_feasible = parse_optional(f[5], "best_feasible");
    r.mcv = parse_optional(f[6], "mcv");
    r.grad_inf_norm = parse_optional(f[7], "grad_inf_norm");
    r.status = f[8];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string ledger_table_csv(const RunRecord &rec) {
  std::string out =
      "iter,n_obj,n_grad,cost,true_cost,n_grad_analytic,n_stencil,n_failed\n";
  for (const auto &r: rec.rows) {
    const auto &l = r.ledger;
    out += std::to_string(r.iter) + "," + std::to_string(l.n_obj) + ","
           + std::to_string(l.n_grad) + "," + std::to_string(l.cost()) + ","
           + std::to_string(l.true_cost()) + ","
           + std::to_string(l.n_grad_analytic) + ","
           + std::to_string(l.n_stencil) + "," + std::to_string(l.n_failed)
           + "\n";
  }
  return out;
}

std::string evaluations_csv(const RunRecord &rec) {
  int d = 0, m = 0;
  for (const auto &e: rec.evaluations) {
    d = std::max(d, static_cast<int>(e.u.size()));
    m = std::max(m, static_cast<int>(e.c.size()));
  }
  std::string out = "index,status,f,mcv";
  for (int i = 0; i < d; ++i)
    out += ",u" + std::to_string(i);
  for (int i = 0; i < m; ++i)
    out += ",c" + std::to_string(i);
  out += "\n";
  for (const auto &e: rec.evaluations) {
    out += std::to_string(e.index) + "," + (e.ok() ? "ok" : "failed") + ","
           + (e.ok() ? real(e.f) : std::string()) + "," + field(e.mcv);
    for (int i = 0; i < d; ++i)
      out += "," + (i < e.u.size() ? real(e.u[i]) : std::string());
    for (int i = 0; i < m; ++i)
      out += "," + (e.ok() && i < e.c.size() ? real(e.c[i]) : std::string());
    out += "\n";
  }
  return out;
}

std::string plan_to_json(const CampaignPlan &p) {
  json j = { { "problems", p.problems },
             { "solvers", p.solvers },
             { "budget", p.budget },
             { "repetitions", p.repetitions },
             { "seed", p.seed },
             { "n_seed", p.n_seed },
             { "evaluator", p.evaluator },
             { "evaluator_timeout_s", p.evaluator_timeout_s },
             { "workers", p.workers },
             { "gradient_mode", to_string(p.gradient_mode) },
             { "audit_gradients", p.audit_gradients } };
  return j.dump();
}

namespace {
  CampaignPlan plan_from(const json &j) {
    CampaignPlan p;
    p.problems = j.at("problems").get<std::vector<std::string>>();
    p.solvers = j.at("solvers").get<std::vector<std::string>>();
    p.budget = j.at("budget").get<long>();
    p.repetitions = j.at("repetitions").get<int>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.n_seed = j.value("n_seed", 0);
    p.evaluator = j.value("evaluator", std::string());
    p.evaluator_timeout_s = j.value("evaluator_timeout_s", 30.0);
    p.workers = j.value("workers", 1);
    p.gradient_mode =
        gradient_mode_from_string(j.value("gradient_mode", std::string("central")));
    p.audit_gradients = j.value("audit_gradients", true);
    return p;
  }
}  // namespace

CampaignPlan plan_from_json(const std::string &text) {
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw std::invalid_argument("plan: not a JSON object");
  const json &p = j.contains("plan") ? j.at("plan") : j;
  try {
    return plan_from(p);
  } catch (const json::exception &e) {
    throw std::invalid_argument(std::string("plan: ") + e.what());
  }
}

std::string cell_stem(const CellResult &cell) {
  return slug(cell.problem) + "__" + slug(cell.solver) + "__r"
         + std::to_string(cell.repetition);
}

void export_campaign(const std::string &dir, const CampaignPlan &plan,
                     const std::vector<CellResult> &cells) {
  const fs::path root(dir);
  ensure_writable(root);

  json runs = json::array();
  for (const auto &cell: cells) {
    const std::string stem = cell_stem(cell);
    const auto &rec = cell.record;
    write_file(root / "runs" / (stem + ".csv"), run_table_csv(rec));
    write_file(root / "runs" / (stem + ".ledger.csv"), ledger_table_csv(rec));
    write_file(root / "runs" / (stem + ".evals.csv"), evaluations_csv(rec));
    runs.push_back({ { "problem", cell.problem },
                     { "problem_id", rec.problem },
                     { "solver", cell.solver },
                     { "repetition", cell.repetition },
                     { "seed", rec.seed },
                     { "seed_offset", rec.seed_offset },
                     { "termination", rec.termination },
                     { "message", rec.message },
                     { "failed", cell.failed },
                     { "error", cell.error },
                     { "table", "runs/" + stem + ".csv" },
                     { "ledger_table", "runs/" + stem + ".ledger.csv" },
                     { "evaluations_table", "runs/" + stem + ".evals.csv" },
                     { "final_ledger", ledger_json(rec.final_ledger) },
                     { "audit_ledger", ledger_json(rec.audit_ledger) } });
  }
  json seeds = json::array();
  for (int r = 0; r < plan.repetitions; ++r)
    seeds.push_back(repetition_seed(plan.seed, r));

  const json manifest = {
    { "format", 1 },
    { "versions",
      { { "aerobench", kVersion },
        { "compiler", __VERSION__ },
        { "eigen", std::to_string(EIGEN_WORLD_VERSION) + "."
                       + std::to_string(EIGEN_MAJOR_VERSION) + "."
                       + std::to_string(EIGEN_MINOR_VERSION) } } },
    { "plan", json::parse(plan_to_json(plan)) },
    { "repetition_seeds", seeds },
    { "runs", runs }
  };
  const fs::path tmp = root / "manifest.json.tmp";
  write_file(tmp, manifest.dump(2) + "\n");
  std::error_code ec;
  fs::rename(tmp, root / "manifest.json", ec);
  if (ec)
    throw IoError("cannot finalize manifest: " + ec.message());
}

LoadedCampaign load_campaign(const std::string &dir) {
  const fs::path root(dir);
  const json m = json::parse(read_file(root / "manifest.json"), nullptr, false);
  if (m.is_discarded() || !m.is_object())
    throw std::invalid_argument("manifest: not a JSON object");
  LoadedCampaign out;
  try {
    out.plan = plan_from(m.at("plan"));
    for (const auto &r: m.at("runs")) {
      CellResult cell;
      cell.problem = r.at("problem").get<std::string>();
      cell.solver = r.at("solver").get<std::string>();
      cell.repetition = r.at("repetition").get<int>();
      cell.failed = r.value("failed", false);
      cell.error = r.value("error", std::string());
      auto &rec = cell.record;
      rec.problem = r.value("problem_id", cell.problem);
      rec.solver = cell.solver;
      rec.seed = r.at("seed").get<std::uint64_t>();
      rec.seed_offset = r.at("seed_offset").get<int>();
      rec.termination = r.value("termination", std::string());
      rec.message = r.value("message", std::string());
      rec.final_ledger = ledger_from_json(r.at("final_ledger"));
      rec.audit_ledger = ledger_from_json(r.at("audit_ledger"));
      rec.rows = parse_run_table(
          read_file(root / r.at("table").get<std::string>()));
      out.cells.push_back(std::move(cell));
    }
  } catch (const json::exception &e) {
    throw std::invalid_argument(std::string("manifest: ") + e.what());
  }
  return out;
}

}  // namespace aerobench::harness
