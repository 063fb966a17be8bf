/// @file model_io.cpp

#include "dilemma/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace dilemma {

namespace {

using json = nlohmann::json;
using ordered = nlohmann::ordered_json;

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1,
                                               text.size());
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("malformed document", line, column);
  }
}

// Small accessor layer so schema errors name the offending field.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail("expected an object");
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    for (const auto& [key, value] : j_.items()) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end())
        fail("unknown field '" + key + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json& at(const char* key) const {
    if (!j_.contains(key)) fail(std::string("missing field '") + key + "'");
    return j_.at(key);
  }

  std::string string(const char* key) const {
    const json& v = at(key);
    if (!v.is_string()) fail(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
  }

  std::string string_or(const char* key, std::string fallback) const {
    return has(key) ? string(key) : std::move(fallback);
  }

  const json& array(const char* key) const {
    const json& v = at(key);
    if (!v.is_array()) fail(std::string("field '") + key + "' must be an array");
    return v;
  }

  const json& array_or_empty(const char* key) const {
    static const json empty = json::array();
    return has(key) ? array(key) : empty;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SchemaError(where_ + ": " + msg);
  }

 private:
  const json& j_;
  std::string where_;
};

void check_version(const Reader& r) {
  const json& v = r.at("format_version");
  if (!v.is_number_integer() || v.get<int>() != kFormatVersion) {
    r.fail("unsupported format_version " + v.dump());
  }
}

Literal literal_from_json(const json& v, const std::string& where) {
  if (v.is_boolean()) return Literal::boolean(v.get<bool>());
  if (v.is_number()) return Literal::number(v.get<double>());
  if (v.is_string()) {
    try {
      return Literal::from_text(v.get<std::string>());
    } catch (const SchemaError& e) {
      throw SchemaError(where + ": " + e.what());
    }
  }
  throw SchemaError(where + ": condition object must be a boolean, number or "
                            "identifier");
}

Condition condition_from_json(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_string() ||
      !v[1].is_string()) {
    throw SchemaError(where +
                      ": condition must be [subject, predicate, object]");
  }
  Condition c{v[0].get<std::string>(), v[1].get<std::string>(),
              literal_from_json(v[2], where)};
  ValidationReport report = validate_condition(c, where);
  if (!report.ok()) {
    throw SchemaError(where + ": " + report.issues.front().message);
  }
  return c;
}

ConditionSet conditions_from_json(const json& arr, const std::string& where) {
  ConditionSet out;
  for (const json& v : arr) out.insert(condition_from_json(v, where));
  return out;
}

ordered literal_to_json(const Literal& l) {
  switch (l.kind()) {
    case Literal::Kind::kBoolean:
      return l.as_boolean();
    case Literal::Kind::kNumber: {
      double v = l.as_number();
      if (std::trunc(v) == v && std::abs(v) < 9.0e15) {
        return static_cast<std::int64_t>(v);
      }
      return v;
    }
    case Literal::Kind::kIdentifier:
      return l.as_identifier();
  }
  return nullptr;
}

ordered conditions_to_json(const ConditionSet& set) {
  ordered arr = ordered::array();
  for (const Condition& c : set) {
    arr.push_back(ordered::array({c.subject, c.predicate, literal_to_json(c.object)}));
  }
  return arr;
}

template <class E, class F>
E enum_field(const Reader& r, const char* key, F from_string,
             const std::string& what) {
  std::string text = r.string(key);
  auto v = from_string(text);
  if (!v) r.fail("unsupported " + what + " '" + text + "'");
  return *v;
}

void throw_if_invalid(const ValidationReport& report, const char* what) {
  if (report.ok()) return;
  std::string msg = std::string("invalid ") + what + ":";
  for (const Issue& i : report.issues) {
    if (i.severity == IssueSeverity::kError)
      msg += " [" + i.location + "] " + i.message + ";";
  }
  throw SchemaError(msg);
}

}  // namespace

// ---------------------------------------------------------------------------
// Task model
// ---------------------------------------------------------------------------

TaskModel parse_task_model(std::string_view text) {
  json doc = parse_json(text);
  Reader r(doc, "task model");
  r.allow_only({"format_version", "root", "tasks"});
  check_version(r);
  TaskModel tm;
  tm.root = r.string("root");
  std::size_t pos = 0;
  for (const json& entry : r.array("tasks")) {
    Reader t(entry, "tasks[" + std::to_string(pos++) + "]");
    t.allow_only({"id", "name", "constructor", "children", "pre_contextual",
                  "pre_favorable", "post"});
    TaskNode node;
    node.id = t.string("id");
    node.name = t.string_or("name", node.id);
    node.constructor = enum_field<Constructor>(t, "constructor",
                                               constructor_from_string,
                                               "constructor");
    for (const json& c : t.array_or_empty("children")) {
      if (!c.is_string()) t.fail("children must be task ids");
      node.children.push_back(c.get<std::string>());
    }
    node.preconditions_contextual =
        conditions_from_json(t.array_or_empty("pre_contextual"), node.id);
    node.preconditions_favorable =
        conditions_from_json(t.array_or_empty("pre_favorable"), node.id);
    node.postconditions = conditions_from_json(t.array_or_empty("post"), node.id);
    TaskId id = node.id;
    if (!tm.nodes.emplace(id, std::move(node)).second) {
      t.fail("duplicate task id " + id);
    }
  }
  throw_if_invalid(validate_task_model(tm), "task model");
  return tm;
}

std::string serialize_task_model(const TaskModel& tm) {
  ordered doc;
  doc["format_version"] = kFormatVersion;
  doc["root"] = tm.root;
  ordered tasks = ordered::array();
  for (const auto& [id, node] : tm.nodes) {
    ordered t;
    t["id"] = node.id;
    t["name"] = node.name;
    t["constructor"] = std::string(to_string(node.constructor));
    t["children"] = node.children;
    t["pre_contextual"] = conditions_to_json(node.preconditions_contextual);
    t["pre_favorable"] = conditions_to_json(node.preconditions_favorable);
    t["post"] = conditions_to_json(node.postconditions);
    tasks.push_back(std::move(t));
  }
  doc["tasks"] = std::move(tasks);
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Causality graph
// ---------------------------------------------------------------------------

CausalityGraph parse_causality_graph(std::string_view text) {
  json doc = parse_json(text);
  Reader r(doc, "causality graph");
  r.allow_only({"format_version", "nodes", "edges"});
  check_version(r);
  CausalityGraph cg;
  std::size_t pos = 0;
  for (const json& entry : r.array("nodes")) {
    Reader n(entry, "nodes[" + std::to_string(pos++) + "]");
    n.allow_only({"id", "kind", "label", "task_ref", "gate_type", "category",
                  "severity", "lead_time"});
    CausalNode node;
    node.id = n.string("id");
    node.kind = enum_field<NodeKind>(n, "kind", node_kind_from_string, "kind");
    node.label = n.string_or("label", node.id);
    if (n.has("task_ref")) node.task_ref = n.string("task_ref");
    if (n.has("gate_type")) {
      node.gate_type = enum_field<GateType>(n, "gate_type",
                                            gate_type_from_string, "gate_type");
    }
    if (n.has("category")) {
      node.category = enum_field<Category>(n, "category", category_from_string,
                                           "category");
    }
    if (n.has("severity")) {
      const json& s = n.at("severity");
      if (!s.is_number_integer()) n.fail("severity must be an integer");
      node.severity = s.get<int>();
    }
    if (n.has("lead_time")) {
      const json& l = n.at("lead_time");
      if (!l.is_number()) n.fail("lead_time must be a number");
      node.lead_time = l.get<double>();
    }
    NodeId id = node.id;
    if (!cg.nodes.emplace(id, std::move(node)).second) {
      n.fail("duplicate node id " + id);
    }
  }
  pos = 0;
  for (const json& entry : r.array_or_empty("edges")) {
    Reader e(entry, "edges[" + std::to_string(pos++) + "]");
    e.allow_only({"from", "to", "kind"});
    Edge edge{e.string("from"), e.string("to"), EdgeKind::kCausal};
    if (e.has("kind")) {
      edge.kind = enum_field<EdgeKind>(e, "kind", edge_kind_from_string,
                                       "edge kind");
    }
    cg.edges.insert(std::move(edge));
  }
  throw_if_invalid(validate_causality_structure(cg), "causality graph");
  return cg;
}

std::string serialize_causality_graph(const CausalityGraph& cg) {
  ordered doc;
  doc["format_version"] = kFormatVersion;
  ordered nodes = ordered::array();
  for (const auto& [id, n] : cg.nodes) {
    ordered j;
    j["id"] = n.id;
    j["kind"] = std::string(to_string(n.kind));
    j["label"] = n.label;
    if (n.task_ref) j["task_ref"] = *n.task_ref;
    if (n.gate_type) j["gate_type"] = std::string(to_string(*n.gate_type));
    if (n.category) j["category"] = std::string(to_string(*n.category));
    if (n.severity) j["severity"] = *n.severity;
    if (n.lead_time) j["lead_time"] = *n.lead_time;
    nodes.push_back(std::move(j));
  }
  doc["nodes"] = std::move(nodes);
  ordered edges = ordered::array();
  for (const Edge& e : cg.edges) {
    edges.push_back(ordered{{"from", e.from},
                            {"to", e.to},
                            {"kind", std::string(to_string(e.kind))}});
  }
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// World model
// ---------------------------------------------------------------------------

WorldModel parse_world_model(std::string_view text) {
  json doc = parse_json(text);
  Reader r(doc, "world model");
  r.allow_only({"format_version", "classes", "instances"});
  check_version(r);
  std::set<std::string> classes;
  for (const json& c : r.array_or_empty("classes")) {
    if (!c.is_string() || !is_identifier(c.get<std::string>()))
      r.fail("class names must be identifiers");
    classes.insert(c.get<std::string>());
  }
  std::map<std::string, Instance> instances;
  std::size_t pos = 0;
  for (const json& entry : r.array_or_empty("instances")) {
    Reader i(entry, "instances[" + std::to_string(pos++) + "]");
    i.allow_only({"id", "class", "properties"});
    std::string id = i.string("id");
    if (!is_identifier(id)) i.fail("instance id is not an identifier");
    Instance inst{i.string("class"),
                  conditions_from_json(i.array_or_empty("properties"), id)};
    if (!instances.emplace(id, std::move(inst)).second) {
      i.fail("duplicate instance id " + id);
    }
  }
  return WorldModel(std::move(classes), std::move(instances));
}

std::string serialize_world_model(const WorldModel& wm) {
  ordered doc;
  doc["format_version"] = kFormatVersion;
  doc["classes"] = wm.classes();
  ordered instances = ordered::array();
  for (const auto& [id, inst] : wm.instances()) {
    instances.push_back(ordered{{"id", id},
                                {"class", inst.class_name},
                                {"properties", conditions_to_json(inst.properties)}});
  }
  doc["instances"] = std::move(instances);
  return doc.dump(2) + "\n";
}

ScoringConfig parse_scoring_config(std::string_view text) {
  json doc = parse_json(text);
  Reader r(doc, "scoring config");
  r.allow_only({"format_version", "tau_seconds", "gravity_scale"});
  if (r.has("format_version")) check_version(r);
  ScoringConfig config;
  auto positive = [&](const char* key, double* out) {
    if (!r.has(key)) return;
    const json& v = r.at(key);
    if (!v.is_number() || !(v.get<double>() > 0.0))
      r.fail(std::string(key) + " must be a positive number");
    *out = v.get<double>();
  };
  positive("tau_seconds", &config.tau_seconds);
  positive("gravity_scale", &config.gravity_scale);
  return config;
}

// ---------------------------------------------------------------------------
// DOT
// ---------------------------------------------------------------------------

namespace {

std::string dot_quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::string_view shape_of(NodeKind k) {
  switch (k) {
    case NodeKind::kBarrier:
      return "box";
    case NodeKind::kGate:
      return "diamond";
    case NodeKind::kConsequence:
      return "doubleoctagon";
    default:
      return "ellipse";
  }
}

}  // namespace

std::string export_dot(const CausalityGraph& cg) {
  std::ostringstream out;
  out << "digraph causality {\n";
  for (const auto& [id, n] : cg.nodes) {
    std::string label = n.label.empty() ? id : n.label;
    if (n.kind == NodeKind::kGate && n.gate_type)
      label = std::string(to_string(*n.gate_type));
    out << "  " << dot_quoted(id) << " [label=" << dot_quoted(label)
        << ", shape=" << shape_of(n.kind) << "];\n";
  }
  // std::set<Edge> orders by (from, to, kind).
  for (const Edge& e : cg.edges) {
    out << "  " << dot_quoted(e.from) << " -> " << dot_quoted(e.to);
    if (e.kind == EdgeKind::kSubsumption) out << " [style=dashed]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Result document
// ---------------------------------------------------------------------------

ResultDocument make_result(const std::vector<DilemmaCandidate>& ranked,
                           const TaskModel& tm, DilemmaFilter filter) {
  ResultDocument doc;
  doc.dilemma_type = filter;
  for (const DilemmaCandidate& c : ranked) {
    ResultEntry e;
    e.task_a = c.task_a;
    e.task_b = c.task_b;
    e.type = c.type;
    if (c.score) e.score = *c.score;
    OutcomeSet all;
    for (const auto* set : {&c.evidence_a, &c.evidence_b, &c.nonchoice_evidence})
      merge_outcomes(all, *set);
    for (const auto& o : all) e.consequences.push_back({o.node, o.category, o.severity});
    e.goal_state = extract_goal_state(c, tm).conditions;
    doc.candidates.push_back(std::move(e));
  }
  if (!ranked.empty()) doc.goal = extract_goal_state(ranked.front(), tm);
  return doc;
}

std::string write_result(const ResultDocument& doc) {
  ordered j;
  j["format_version"] = kFormatVersion;
  j["dilemma_type"] = std::string(to_string(doc.dilemma_type));
  ordered candidates = ordered::array();
  for (const ResultEntry& e : doc.candidates) {
    ordered c;
    c["tasks"] = ordered::array({e.task_a, e.task_b});
    c["type"] = std::string(to_string(e.type));
    c["score"] = e.score.total;
    c["pedagogical_fit"] = e.score.pedagogical_fit;
    c["scenario_fit"] = e.score.scenario_fit;
    ordered details = ordered::object();
    for (const auto& [k, v] : e.score.details) details[k] = v;
    c["details"] = std::move(details);
    c["zero_score"] = e.score.zero();
    ordered consequences = ordered::array();
    for (const auto& s : e.consequences) {
      consequences.push_back(ordered{{"node", s.node},
                                     {"category", std::string(to_string(s.category))},
                                     {"severity", s.severity}});
    }
    c["consequences"] = std::move(consequences);
    c["goal_state"] = conditions_to_json(e.goal_state);
    candidates.push_back(std::move(c));
  }
  j["candidates"] = std::move(candidates);
  if (doc.goal) {
    j["goal"] = ordered{{"tasks", ordered::array({doc.goal->task_a, doc.goal->task_b})},
                        {"conditions", conditions_to_json(doc.goal->conditions)}};
  }
  return j.dump(2) + "\n";
}

ResultDocument parse_result(std::string_view text) {
  json j = parse_json(text);
  Reader r(j, "result");
  r.allow_only({"format_version", "dilemma_type", "candidates", "goal"});
  check_version(r);
  ResultDocument doc;
  doc.dilemma_type = enum_field<DilemmaFilter>(r, "dilemma_type",
                                               dilemma_filter_from_string,
                                               "dilemma_type");
  auto pair_of = [](const Reader& rd, const json& v) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_string() || !v[1].is_string())
      rd.fail("tasks must be a pair of ids");
    return std::pair{v[0].get<std::string>(), v[1].get<std::string>()};
  };
  auto number = [](const Reader& rd, const char* key) {
    const json& v = rd.at(key);
    if (!v.is_number()) rd.fail(std::string(key) + " must be a number");
    return v.get<double>();
  };
  std::size_t pos = 0;
  for (const json& entry : r.array("candidates")) {
    Reader c(entry, "candidates[" + std::to_string(pos++) + "]");
    c.allow_only({"tasks", "type", "score", "pedagogical_fit", "scenario_fit",
                  "details", "zero_score", "consequences", "goal_state"});
    ResultEntry e;
    std::tie(e.task_a, e.task_b) = pair_of(c, c.at("tasks"));
    e.type = enum_field<DilemmaType>(c, "type", dilemma_type_from_string, "type");
    e.score.total = number(c, "score");
    e.score.pedagogical_fit = number(c, "pedagogical_fit");
    e.score.scenario_fit = number(c, "scenario_fit");
    if (c.has("details")) {
      Reader d(c.at("details"), "details");
      for (const auto& [k, v] : c.at("details").items()) {
        if (!v.is_number()) d.fail("detail " + k + " must be a number");
        e.score.details[k] = v.get<double>();
      }
    }
    for (const json& s : c.array_or_empty("consequences")) {
      Reader cs(s, "consequence");
      cs.allow_only({"node", "category", "severity"});
      ConsequenceSummary summary;
      summary.node = cs.string("node");
      summary.category = enum_field<Category>(cs, "category",
                                              category_from_string, "category");
      const json& sev = cs.at("severity");
      if (!sev.is_number_integer()) cs.fail("severity must be an integer");
      summary.severity = sev.get<int>();
      e.consequences.push_back(std::move(summary));
    }
    e.goal_state = conditions_from_json(c.array_or_empty("goal_state"), "goal_state");
    doc.candidates.push_back(std::move(e));
  }
  if (r.has("goal")) {
    Reader g(r.at("goal"), "goal");
    g.allow_only({"tasks", "conditions"});
    GoalState goal;
    std::tie(goal.task_a, goal.task_b) = pair_of(g, g.at("tasks"));
    goal.conditions = conditions_from_json(g.array("conditions"), "goal");
    doc.goal = std::move(goal);
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ModelBundle load_bundle(const std::filesystem::path& tasks,
                        const std::filesystem::path& causality,
                        const std::filesystem::path& world) {
  ModelBundle bundle;
  bundle.task_model = parse_task_model(read_file(tasks));
  bundle.causality = parse_causality_graph(read_file(causality));
  bundle.world = parse_world_model(read_file(world));
  return bundle;
}

}  // namespace dilemma
