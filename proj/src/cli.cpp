/// @file cli.cpp

#include "dilemma/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dilemma/generator.hpp"
#include "dilemma/model_io.hpp"
#include "dilemma/verifier.hpp"

namespace dilemma::cli {

namespace {

namespace fs = std::filesystem;
using ordered = nlohmann::ordered_json;

// Bad invocation detected after CLI11 is done with argv.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string tasks, causality, world, scoring, out;
  bool strict = false;
  int verbose = 0;

  std::string type = "both";
  std::optional<int> gmin, gmax, criticality;
  int gap = 0;
  std::string categories;
  double wp = 1.0, ws = 1.0;
  std::optional<std::size_t> top;
  std::optional<long long> seed;  // accepted, unused: generation is deterministic
  bool require_result = false;

  std::string stage;
  std::vector<std::string> pair;
};

const char* label(IssueSeverity s) {
  return s == IssueSeverity::kError ? "error" : "warning";
}

fs::path resolve(const std::string& given, const char* what) {
  if (given.empty()) throw UsageError(std::string("missing --") + what);
  fs::path p(given);
  if (fs::is_regular_file(p)) return p;
  fs::path with_ext = p;
  with_ext += ".json";
  if (fs::is_regular_file(with_ext)) return with_ext;
  throw UsageError(std::string("cannot find ") + what + " model '" + given + "'");
}

TaskModel load_tasks(const Options& o) {
  return parse_task_model(read_file(resolve(o.tasks, "tasks")));
}
CausalityGraph load_causality(const Options& o) {
  return parse_causality_graph(read_file(resolve(o.causality, "causality")));
}
WorldModel load_world(const Options& o) {
  return parse_world_model(read_file(resolve(o.world, "world")));
}

// Loads all three and enforces cross-references; invalid bundles are a model
// failure, reported issue by issue.
ModelBundle load_checked_bundle(const Options& o, std::ostream& err) {
  ModelBundle b{load_tasks(o), load_causality(o), load_world(o)};
  ValidationReport report = validate_bundle(b, o.strict);
  if (!report.ok()) {
    for (const Issue& i : report.issues)
      err << label(i.severity) << ": " << i.location << ": " << i.message
          << "\n";
    throw SchemaError("model bundle has " +
                      std::to_string(report.error_count()) + " errors");
  }
  return b;
}

PedagogicalInstruction build_instruction(const Options& o) {
  PedagogicalInstruction instr;
  if (o.criticality) instr = PedagogicalInstruction::with_criticality(*o.criticality);
  auto filter = dilemma_filter_from_string(o.type);
  if (!filter) throw UsageError("unknown --type " + o.type);
  instr.dilemma_type = *filter;
  if (o.gmin) instr.gravity_min = *o.gmin;
  if (o.gmax) instr.gravity_max = *o.gmax;
  instr.gravity_gap_target = o.gap;
  instr.weight_pedagogical = o.wp;
  instr.weight_scenaristic = o.ws;
  std::stringstream list(o.categories);
  for (std::string item; std::getline(list, item, ',');) {
    if (item.empty()) continue;
    auto c = category_from_string(item);
    if (!c) throw UsageError("unknown category " + item);
    instr.required_categories.insert(*c);
  }
  try {
    instr.validate();
  } catch (const InvalidInstruction& e) {
    throw UsageError(e.what());
  }
  return instr;
}

ScoringConfig build_config(const Options& o) {
  if (o.scoring.empty()) return {};
  return parse_scoring_config(read_file(resolve(o.scoring, "scoring")));
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + o.out);
  f << text;
}

std::string pair_lines(const std::vector<DilemmaCandidate>& cs, bool scored) {
  std::ostringstream s;
  for (const DilemmaCandidate& c : cs) {
    s << to_string(c.type) << '\t' << c.task_a << '\t' << c.task_b;
    if (scored && c.score) s << '\t' << c.score->total;
    s << '\n';
  }
  return s.str();
}

ordered scenario_json(const ActivationScenario& s) {
  return ordered{{"performed", s.performed_tasks}, {"ambient", s.ambient_events}};
}

ordered report_json(const VerificationReport& r) {
  ordered checks = ordered::array();
  for (const VerificationCheck& c : r.checks) {
    ordered j{{"name", c.name}, {"passed", c.passed}};
    if (c.scenario) j["scenario"] = scenario_json(*c.scenario);
    if (c.outcome)
      j["consequence"] = ordered{{"node", c.outcome->node}, {"via", c.outcome->via}};
    checks.push_back(std::move(j));
  }
  return ordered{{"tasks", ordered::array({r.task_a, r.task_b})},
                 {"type", std::string(to_string(r.claimed_type))},
                 {"holds", r.holds()},
                 {"checks", std::move(checks)}};
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.tasks.empty() && o.causality.empty() && o.world.empty())
    throw UsageError("validate needs at least one of --tasks, --causality, --world");
  ValidationReport report;
  std::optional<TaskModel> tm;
  std::optional<CausalityGraph> cg;
  std::optional<WorldModel> wm;
  if (!o.tasks.empty()) tm = load_tasks(o);
  if (!o.causality.empty()) cg = load_causality(o);
  if (!o.world.empty()) wm = load_world(o);
  if (tm && cg && wm) {
    report = validate_bundle(ModelBundle{*tm, *cg, *wm}, o.strict);
  } else {
    if (tm) report.append(validate_task_model(*tm));
    if (cg && tm) {
      report.append(validate_causality_graph(*cg, *tm));
    } else if (cg) {
      report.append(validate_causality_structure(*cg));
    }
  }
  for (const Issue& i : report.issues)
    err << label(i.severity) << ": " << i.location << ": " << i.message << "\n";
  out << report.error_count() << " errors, " << report.warning_count()
      << " warnings\n";
  return report.ok() ? kOk : kInvalidModel;
}

int cmd_generate(const Options& o, std::ostream& out, std::ostream& err) {
  PedagogicalInstruction instr = build_instruction(o);
  ScoringConfig config = build_config(o);
  ModelBundle b = load_checked_bundle(o, err);
  PipelineTrace trace = run_pipeline(b, instr, config);
  if (o.verbose > 0) {
    for (const std::string& d : trace.diagnostics) err << "note: " << d << "\n";
  }
  std::vector<DilemmaCandidate> ranked = trace.ranked;
  if (o.top && ranked.size() > *o.top) ranked.resize(*o.top);
  ResultDocument doc = make_result(ranked, b.task_model, instr.dilemma_type);
  emit(o, write_result(doc), out);

  bool satisfying = std::any_of(ranked.begin(), ranked.end(), [](const auto& c) {
    return c.score && !c.score->zero();
  });
  err << ranked.size() << " candidate(s)";
  if (!ranked.empty()) err << ", top: " << ranked.front().describe();
  err << "\n";
  if (!ranked.empty() && !satisfying)
    err << "every candidate scores zero under this instruction\n";
  if (o.require_result && !satisfying) return kNothingFound;
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  auto filter = dilemma_filter_from_string(o.type);
  if (!filter) throw UsageError("unknown --type " + o.type);
  ModelBundle b = load_checked_bundle(o, err);
  const TaskId& t1 = o.pair.at(0);
  const TaskId& t2 = o.pair.at(1);
  for (const TaskId& t : o.pair)
    if (!b.task_model.contains(t)) throw UsageError("unknown task " + t);
  if (t1 == t2) throw UsageError("verify needs two distinct tasks");
  ordered reports = ordered::array();
  if (admits(*filter, DilemmaType::kObligation))
    reports.push_back(report_json(verify_obligation(b, t1, t2)));
  if (admits(*filter, DilemmaType::kProhibition))
    reports.push_back(report_json(verify_prohibition(b, t1, t2)));
  emit(o, ordered{{"format_version", kFormatVersion}, {"reports", reports}}.dump(2) + "\n",
       out);
  return kOk;
}

int cmd_inspect(const Options& o, std::ostream& out, std::ostream& err) {
  std::ostringstream s;
  if (o.stage == "barriers" || o.stage == "actions") {
    CausalityGraph cg = load_causality(o);
    auto results = o.stage == "barriers" ? negative_barriers(cg) : negative_actions(cg);
    for (const TaskId& t : task_refs(results)) s << t << "\n";
    if (o.verbose > 0) {
      for (const NodeOutcomes& r : results) {
        err << r.node << ":";
        for (const auto& c : r.outcomes) err << " " << c.node;
        err << "\n";
      }
    }
  } else {
    ModelBundle b = load_checked_bundle(o, err);
    PipelineTrace trace = run_pipeline(b, build_instruction(o), build_config(o));
    if (o.verbose > 0) {
      for (const std::string& d : trace.diagnostics) err << "note: " << d << "\n";
    }
    if (o.stage == "pairs") {
      s << pair_lines(trace.obligation_pairs, false)
        << pair_lines(trace.prohibition_pairs, false);
    } else if (o.stage == "filtered") {
      s << pair_lines(trace.filtered, false);
    } else {
      std::vector<DilemmaCandidate> ranked = trace.ranked;
      if (o.top && ranked.size() > *o.top) ranked.resize(*o.top);
      s << pair_lines(ranked, true);
    }
  }
  emit(o, s.str(), out);
  return kOk;
}

int cmd_export_dot(const Options& o, std::ostream& out, std::ostream&) {
  emit(o, export_dot(load_causality(o)), out);
  return kOk;
}

void add_models(CLI::App* sub, Options& o, bool world_too) {
  sub->add_option("--tasks", o.tasks, "task model file (.json may be omitted)");
  sub->add_option("--causality", o.causality, "causality graph file");
  if (world_too) sub->add_option("--world", o.world, "world model file");
  sub->add_flag("--strict", o.strict,
                "require condition subjects to name world classes or instances");
}

void add_instruction(CLI::App* sub, Options& o) {
  sub->add_option("--type", o.type, "obligation|prohibition|both");
  sub->add_option("--gmin", o.gmin, "lowest admissible gravity (0..5)");
  sub->add_option("--gmax", o.gmax, "highest admissible gravity (0..5)");
  sub->add_option("--gap", o.gap, "targeted gravity gap between the two sides");
  sub->add_option("--categories", o.categories,
                  "required categories, comma separated (gravity,violations,points)");
  sub->add_option("--wp", o.wp, "weight of the pedagogical fit");
  sub->add_option("--ws", o.ws, "weight of the scenario fit");
  sub->add_option("--criticality", o.criticality,
                  "preset: gravity bounds [k-1, k+1]");
  sub->add_option("--top", o.top, "keep only the first N ranked candidates");
  sub->add_option("--seed", o.seed, "ignored; output is deterministic");
  sub->add_option("--scoring", o.scoring, "scoring constants file");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Options o;
  CLI::App app{"Generate and check dilemma situations from knowledge models",
               "dilemmagen"};
  app.require_subcommand(1);
  app.add_flag("-v,--verbose", o.verbose, "print pipeline diagnostics");

  auto* validate = app.add_subcommand("validate", "check model files");
  add_models(validate, o, true);

  auto* generate = app.add_subcommand("generate", "rank dilemma candidates");
  add_models(generate, o, true);
  add_instruction(generate, o);
  generate->add_option("--out", o.out, "write the result document here");
  generate->add_flag("--require-result", o.require_result,
                     "exit 3 unless some candidate has a non-zero score");

  auto* verify = app.add_subcommand("verify", "check one task pair by propagation");
  add_models(verify, o, true);
  verify->add_option("pair", o.pair, "two task ids")->expected(2)->required();
  verify->add_option("--type", o.type, "obligation|prohibition|both");
  verify->add_option("--out", o.out, "write the report here");

  auto* inspect = app.add_subcommand("inspect", "print one pipeline stage");
  inspect->add_option("stage", o.stage, "barriers|actions|pairs|filtered|ranked")
      ->required()
      ->check(CLI::IsMember({"barriers", "actions", "pairs", "filtered", "ranked"}));
  add_models(inspect, o, true);
  add_instruction(inspect, o);
  inspect->add_option("--out", o.out, "write the listing here");

  auto* dot = app.add_subcommand("export-dot", "render the causality graph");
  dot->add_option("--causality", o.causality, "causality graph file")->required();
  dot->add_option("--out", o.out, "write the graph here");

  for (auto* sub : {validate, generate, verify, inspect, dot})
    sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, out, err);
    if (generate->parsed()) return cmd_generate(o, out, err);
    if (verify->parsed()) return cmd_verify(o, out, err);
    if (inspect->parsed()) return cmd_inspect(o, out, err);
    return cmd_export_dot(o, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kInvalidModel;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidModel;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInvalidModel;
  }
}

}  // namespace dilemma::cli
