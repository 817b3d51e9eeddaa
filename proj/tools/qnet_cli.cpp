// qnet: evaluate n-local network scenarios, certify measurement
// (in)compatibility, audit no-violation regimes, build hidden-variable
// models, and search over measurement settings.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qnet/inequality.hpp"
#include "qnet/scenario_io.hpp"
#include "qnet/search.hpp"
#include "qnet/theorems.hpp"

using nlohmann::json;
using namespace qnet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConstraint = 2;

std::string fmt(double v, bool machine) {
  char buf[64];
  std::snprintf(buf, sizeof buf, machine ? "%.17g" : "%.5g", v);
  return buf;
}

struct Output {
  std::string format = "table";  // table | csv | json
  std::string report_path;

  bool machine() const { return format != "table"; }

  void emit(const std::string& rendered) const {
    std::cout << rendered;
    if (!report_path.empty()) {
      std::ofstream out(report_path);
      if (!out) throw std::runtime_error("cannot write report: " + report_path);
      out << rendered;
    }
  }
};

std::string render_rows(const Output& out, const std::vector<std::string>& columns,
                        const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  if (out.format == "json") {
    json arr = json::array();
    for (const auto& row : rows) {
      json obj;
      for (size_t c = 0; c < columns.size(); ++c) obj[columns[c]] = row[c];
      arr.push_back(obj);
    }
    os << arr.dump(2) << "\n";
  } else if (out.format == "csv") {
    for (size_t c = 0; c < columns.size(); ++c)
      os << columns[c] << (c + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows)
      for (size_t c = 0; c < row.size(); ++c) os << row[c] << (c + 1 < row.size() ? "," : "\n");
  } else {
    std::vector<size_t> width(columns.size());
    for (size_t c = 0; c < columns.size(); ++c) width[c] = columns[c].size();
    for (const auto& row : rows)
      for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    auto line = [&](const std::vector<std::string>& cells) {
      for (size_t c = 0; c < cells.size(); ++c) {
        os << cells[c] << std::string(width[c] - cells[c].size(), ' ');
        os << (c + 1 < cells.size() ? "  " : "\n");
      }
    };
    line(columns);
    for (const auto& row : rows) line(row);
  }
  return os.str();
}

InequalityReport evaluate_file(const std::string& path, int max_n, ScenarioFile* file_out) {
  const ScenarioFile file = load_scenario(path);
  if (file.n > max_n)
    throw std::invalid_argument("scenario has n = " + std::to_string(file.n) +
                                " sources, above the --max-n limit");
  if (file_out) *file_out = file;
  return evaluate_scenario(file.build());
}

int cmd_reproduce(const Output& out, const std::string& dir, int max_n) {
  const char* files[] = {"bilocal_paper.scn", "trilocal_star.scn", "fourlocal_linear.scn",
                         "fourlocal_star.scn"};
  const bool m = out.machine();
  std::vector<std::vector<std::string>> rows;
  for (const char* f : files) {
    ScenarioFile file;
    const InequalityReport r = evaluate_file(dir + "/" + f, max_n, &file);
    const double closed = r.analytic.value_or(std::nan(""));
    const double ref = file.reference_value.value_or(std::nan(""));
    const bool match = std::abs(r.lhs - ref) <= 1e-3;
    rows.push_back({file.name, fmt(r.lhs, m), fmt(closed, m), fmt(ref, m),
                    match ? "match" : "MISMATCH", r.violated ? "yes" : "no"});
  }
  out.emit(render_rows(out, {"name", "behavior_lhs", "closed_form", "reference", "flag",
                             "violated"},
                       rows));
  return kExitOk;
}

int cmd_eval(const Output& out, const std::string& path, int max_n) {
  const InequalityReport r = evaluate_file(path, max_n, nullptr);
  const bool m = out.machine();
  std::vector<std::vector<std::string>> rows;
  rows.push_back({r.functional == Functional::LinearNLocal ? "linear" : "star", fmt(r.lhs, m),
                  r.analytic ? fmt(*r.analytic, m) : "-", fmt(r.classical_bound, m),
                  r.violated ? "yes" : "no"});
  out.emit(render_rows(out, {"functional", "lhs", "analytic", "bound", "violated"}, rows));
  return kExitOk;
}

struct VarySpec {
  std::string kind;  // source | party
  int index = 0;
  std::string field;  // v | eta | t
  double start = 0.0, stop = 0.0;
  int steps = 0;
};

VarySpec parse_vary(const std::string& s) {
  // e.g. source.0.v=0:1:11 or party.2.eta=0.5:1:6
  const size_t eq = s.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("--vary needs param=start:stop:steps");
  const std::string param = s.substr(0, eq);
  VarySpec v;
  {
    std::istringstream is(param);
    std::string idx;
    if (!std::getline(is, v.kind, '.') || !std::getline(is, idx, '.') ||
        !std::getline(is, v.field))
      throw std::invalid_argument("--vary parameter must look like source.0.v or party.2.eta");
    v.index = std::stoi(idx);
  }
  {
    std::istringstream is(s.substr(eq + 1));
    std::string a, b, c;
    if (!std::getline(is, a, ':') || !std::getline(is, b, ':') || !std::getline(is, c))
      throw std::invalid_argument("--vary range must be start:stop:steps");
    v.start = std::stod(a);
    v.stop = std::stod(b);
    v.steps = std::stoi(c);
  }
  if (v.steps < 1) throw std::invalid_argument("--vary needs at least one step");
  return v;
}

int cmd_scan(const Output& out, const std::string& path, const std::string& vary_arg, int max_n) {
  ScenarioFile file = load_scenario(path);
  if (file.n > max_n) throw std::invalid_argument("scenario exceeds --max-n");
  const VarySpec vary = parse_vary(vary_arg);
  const bool m = out.machine();

  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < vary.steps; ++i) {
    const double value =
        vary.steps == 1 ? vary.start
                        : vary.start + (vary.stop - vary.start) * i / (vary.steps - 1);
    ScenarioFile step = file;
    if (vary.kind == "source" && vary.field == "v") {
      if (vary.index < 0 || vary.index >= file.n ||
          step.sources[vary.index].kind != SourceSpec::Kind::Werner)
        throw std::invalid_argument("--vary source index must point at a werner source");
      step.sources[vary.index].v = value;
    } else if (vary.kind == "party" && (vary.field == "eta" || vary.field == "t")) {
      if (vary.index < 0 || vary.index >= static_cast<int>(step.parties.size()) ||
          step.parties[vary.index].role != PartySpec::Role::Edge)
        throw std::invalid_argument("--vary party index must point at an edge party");
      if (vary.field == "eta") {
        step.parties[vary.index].eta = value;
        step.parties[vary.index].eta1.reset();
      } else {
        if (!step.parties[vary.index].plane)
          throw std::invalid_argument("cannot vary t of a party given by explicit directions");
        step.parties[vary.index].t = value;
      }
    } else {
      throw std::invalid_argument("unknown --vary parameter: " + vary.kind + ".*." + vary.field);
    }
    const InequalityReport r = evaluate_scenario(step.build());
    rows.push_back({fmt(value, m), fmt(r.lhs, m), r.analytic ? fmt(*r.analytic, m) : "-",
                    r.violated ? "yes" : "no"});
  }
  out.emit(render_rows(out, {vary.kind + "." + std::to_string(vary.index) + "." + vary.field,
                             "lhs", "analytic", "violated"},
                       rows));
  return kExitOk;
}

int cmd_compat(const Output& out, const std::string& plane_arg, double t, double eta) {
  Plane plane;
  if (plane_arg == "xz")
    plane = Plane::XZ;
  else if (plane_arg == "xy")
    plane = Plane::XY;
  else
    throw std::invalid_argument("plane must be xz or xy");
  const auto r = is_compatible(equatorial_pair(plane, t, eta));
  const double threshold = compatibility_threshold(plane, t);
  const bool m = out.machine();
  std::vector<std::vector<std::string>> rows{{r.compatible ? "compatible" : "incompatible",
                                              fmt(r.margin, m), fmt(threshold, m)}};
  out.emit(render_rows(out, {"verdict", "margin", "eta_threshold"}, rows));
  return kExitOk;
}

int cmd_audit(const Output& out, const std::string& thm, int n, int samples,
              std::uint64_t seed) {
  AuditResult r;
  if (thm == "thm2")
    r = thm2_audit(n, samples, seed);
  else if (thm == "thm5")
    r = thm5_audit(n, samples, seed);
  else
    throw std::invalid_argument("audit supports thm2 or thm5");
  const bool pass = r.max_lhs <= 1.0 + tol::report && r.max_closed_form_gap <= tol::report;
  const bool m = out.machine();
  std::vector<std::vector<std::string>> rows{
      {thm, std::to_string(r.n), std::to_string(r.random_samples + r.diagonal_samples),
       fmt(r.max_lhs, m), fmt(r.max_closed_form_gap, m), pass ? "pass" : "FAIL"}};
  out.emit(render_rows(out, {"audit", "n", "samples", "max_lhs", "max_gap", "status"}, rows));
  return pass ? kExitOk : kExitConstraint;
}

int cmd_model(const Output& out, const std::string& thm, const std::string& path, int edge,
              int max_n) {
  ScenarioFile file = load_scenario(path);
  if (file.n > max_n) throw std::invalid_argument("scenario exceeds --max-n");
  const NetworkScenario s = file.build();
  LocalHVModel model;
  if (thm == "thm3")
    model = thm3_bilocal_model(s);
  else if (thm == "thm6")
    model = thm6_star_model(s);
  else if (thm == "thm7")
    model = thm7_fnn_decompose(s, edge);
  else
    throw std::invalid_argument("model supports thm3, thm6 or thm7");
  out.emit(dump_model(model));
  return model.max_reconstruction_error <= 1e-10 ? kExitOk : kExitConstraint;
}

int cmd_optimize(const Output& out, const std::string& path, int grid, int iters,
                 const std::vector<int>& force_compat, const std::vector<int>& force_incompat,
                 int max_n) {
  const ScenarioFile file = load_scenario(path);
  if (file.n > max_n) throw std::invalid_argument("scenario exceeds --max-n");
  const NetworkScenario base = file.build();

  SearchSpec spec;
  spec.topology = base.topology;
  spec.sources = base.sources;
  for (int p = 0; p < base.party_count(); ++p) {
    if (!base.parties[p].is_edge()) continue;
    PartySearchRange range;
    range.plane = base.topology == Topology::Linear ? Plane::XZ : Plane::XY;
    range.eta_cap = base.parties[p].pair->m0.eta;  // the file's eta acts as the cap
    for (int f : force_compat)
      if (f == p) range.force = ForceFlag::Compatible;
    for (int f : force_incompat)
      if (f == p) range.force = ForceFlag::Incompatible;
    spec.edges.push_back(range);
  }
  spec.budget.grid_points = grid;
  spec.budget.refine_iterations = iters;

  const SearchResult r = optimize(spec);
  std::ostringstream os;
  os << "# best lhs = " << fmt(r.best_lhs, true) << "\n";
  os << "# improvement trace (evaluations, value):\n";
  for (const auto& [evals, value] : r.trace)
    os << "#   " << evals << ", " << fmt(value, true) << "\n";
  os << serialize_scenario(r.scenario, "optimized");
  out.emit(os.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"n-local network inequality toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // accept the global flags after the verb too

  Output out;
  int max_n = kMaxSources;
  std::uint64_t seed = 42;
  app.add_option("--format", out.format, "output format")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  app.add_option("--report", out.report_path, "also write the output to this file");
  app.add_option("--seed", seed, "seed for randomized commands");
  app.add_option("--max-n", max_n, "refuse scenarios with more sources than this");

#ifndef QNET_SCENARIO_DIR
#define QNET_SCENARIO_DIR "scenarios"
#endif
  std::string scenario_dir = QNET_SCENARIO_DIR;

  auto* reproduce = app.add_subcommand("reproduce", "run the packaged reference examples");
  reproduce->add_option("--scenario-dir", scenario_dir, "fixture directory");

  std::string eval_path;
  auto* eval = app.add_subcommand("eval", "evaluate a scenario file");
  eval->add_option("file", eval_path, "scenario file")->required();

  std::string scan_path, vary;
  auto* scan = app.add_subcommand("scan", "sweep one parameter of a scenario");
  scan->add_option("file", scan_path)->required();
  scan->add_option("--vary", vary, "param=start:stop:steps")->required();

  std::string plane_arg;
  double compat_t = 0.0, compat_eta = 1.0;
  auto* compat = app.add_subcommand("compat", "compatibility of an equatorial pair");
  compat->add_option("plane", plane_arg)->required();
  compat->add_option("t", compat_t)->required();
  compat->add_option("eta", compat_eta)->required();

  std::string audit_thm;
  int audit_n = 2, audit_samples = 1000;
  auto* audit = app.add_subcommand("audit", "no-violation audits over random states");
  audit->add_option("thm", audit_thm, "thm2 | thm5")->required();
  audit->add_option("--n", audit_n, "source count");
  audit->add_option("--samples", audit_samples, "random tuples");

  std::string model_thm, model_path;
  int model_edge = -1;
  auto* model = app.add_subcommand("model", "build a hidden-variable model");
  model->add_option("thm", model_thm, "thm3 | thm6 | thm7")->required();
  model->add_option("file", model_path)->required();
  model->add_option("--edge", model_edge, "edge party index (thm7)");

  std::string opt_path;
  int opt_grid = 24, opt_iters = 200;
  std::vector<int> force_compat, force_incompat;
  auto* opt = app.add_subcommand("optimize", "search settings maximizing the lhs");
  opt->add_option("file", opt_path)->required();
  opt->add_option("--grid", opt_grid, "grid points per angle");
  opt->add_option("--iters", opt_iters, "refinement iterations");
  opt->add_option("--force-compatible", force_compat, "party indices kept compatible");
  opt->add_option("--force-incompatible", force_incompat, "party indices kept incompatible");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (reproduce->parsed()) return cmd_reproduce(out, scenario_dir, max_n);
    if (eval->parsed()) return cmd_eval(out, eval_path, max_n);
    if (scan->parsed()) return cmd_scan(out, scan_path, vary, max_n);
    if (compat->parsed()) return cmd_compat(out, plane_arg, compat_t, compat_eta);
    if (audit->parsed()) return cmd_audit(out, audit_thm, audit_n, audit_samples, seed);
    if (model->parsed()) return cmd_model(out, model_thm, model_path, model_edge, max_n);
    if (opt->parsed())
      return cmd_optimize(out, opt_path, opt_grid, opt_iters, force_compat, force_incompat,
                          max_n);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const criterion_error& e) {
    std::cerr << "criterion failed: " << e.what() << " (lhs " << e.lhs() << " vs rhs " << e.rhs()
              << ")\n";
    return kExitConstraint;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConstraint;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
