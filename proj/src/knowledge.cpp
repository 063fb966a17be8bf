/// @file knowledge.cpp
/// Domain types, conflict predicates and structural validation.

#include "dilemma/knowledge.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

namespace dilemma {

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = static_cast<unsigned char>(s.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char ch) {
    auto c = static_cast<unsigned char>(ch);
    return std::isalnum(c) || c == '_' || c == '-';
  });
}

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::strong_ordering compare_doubles(double a, double b) {
  if (a < b) return std::strong_ordering::less;
  if (a > b) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace

// ---------------------------------------------------------------------------
// Literal / Condition
// ---------------------------------------------------------------------------

Literal Literal::boolean(bool v) {
  Literal l;
  l.kind_ = Kind::kBoolean;
  l.boolean_ = v;
  return l;
}

Literal Literal::number(double v) {
  if (!std::isfinite(v)) throw SchemaError("number literal must be finite");
  Literal l;
  l.kind_ = Kind::kNumber;
  l.number_ = v == 0.0 ? 0.0 : v;  // folds -0
  return l;
}

Literal Literal::identifier(std::string v) {
  if (!is_identifier(v)) throw SchemaError("invalid identifier '" + v + "'");
  Literal l;
  l.kind_ = Kind::kIdentifier;
  l.text_ = std::move(v);
  return l;
}

Literal Literal::from_text(std::string_view text) {
  if (iequals(text, "true")) return boolean(true);
  if (iequals(text, "false")) return boolean(false);
  if (is_identifier(text)) return identifier(std::string(text));
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec == std::errc() && ptr == end && !text.empty()) return number(value);
  throw SchemaError("object '" + std::string(text) +
                    "' is neither an identifier, a boolean nor a number");
}

std::string Literal::to_string() const {
  switch (kind_) {
    case Kind::kBoolean:
      return boolean_ ? "true" : "false";
    case Kind::kNumber: {
      std::ostringstream out;
      out << number_;
      return out.str();
    }
    case Kind::kIdentifier:
      return text_;
  }
  return {};
}

bool operator==(const Literal& a, const Literal& b) {
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  switch (a.kind_) {
    case Literal::Kind::kBoolean:
      return a.boolean_ <=> b.boolean_;
    case Literal::Kind::kNumber:
      return compare_doubles(a.number_, b.number_);
    case Literal::Kind::kIdentifier:
      return a.text_ <=> b.text_;
  }
  return std::strong_ordering::equal;
}

std::string Condition::to_string() const {
  return "(" + subject + " " + predicate + " " + object.to_string() + ")";
}

std::strong_ordering operator<=>(const Condition& a, const Condition& b) {
  if (auto c = a.subject <=> b.subject; c != 0) return c;
  if (auto c = a.predicate <=> b.predicate; c != 0) return c;
  return a.object <=> b.object;
}

bool condition_conflict(const Condition& c1, const Condition& c2) {
  return c1.subject == c2.subject && c1.predicate == c2.predicate &&
         c1.object != c2.object;
}

bool condition_set_conflict(const ConditionSet& s1, const ConditionSet& s2) {
  for (const Condition& a : s1) {
    for (const Condition& b : s2) {
      if (condition_conflict(a, b)) return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Enum names
// ---------------------------------------------------------------------------

namespace {

template <class E, std::size_t N>
std::optional<E> lookup(const std::pair<std::string_view, E> (&table)[N],
                        std::string_view s) {
  for (const auto& [name, value] : table) {
    if (iequals(name, s)) return value;
  }
  return std::nullopt;
}

template <class E, std::size_t N>
std::string_view name_of(const std::pair<std::string_view, E> (&table)[N],
                         E v) {
  for (const auto& [name, value] : table) {
    if (value == v) return name;
  }
  return "?";
}

constexpr std::pair<std::string_view, Constructor> kConstructors[] = {
    {"SEQ", Constructor::kSeq},
    {"PAR", Constructor::kPar},
    {"IND", Constructor::kInd},
    {"LEAF", Constructor::kLeaf}};
constexpr std::pair<std::string_view, NodeKind> kNodeKinds[] = {
    {"EVENT", NodeKind::kEvent},
    {"ACTION", NodeKind::kAction},
    {"BARRIER", NodeKind::kBarrier},
    {"GATE", NodeKind::kGate},
    {"CONSEQUENCE", NodeKind::kConsequence}};
constexpr std::pair<std::string_view, GateType> kGateTypes[] = {
    {"AND", GateType::kAnd}, {"OR", GateType::kOr}};
constexpr std::pair<std::string_view, Category> kCategories[] = {
    {"GRAVITY", Category::kGravity},
    {"VIOLATIONS", Category::kViolations},
    {"POINTS", Category::kPoints}};
constexpr std::pair<std::string_view, EdgeKind> kEdgeKinds[] = {
    {"CAUSAL", EdgeKind::kCausal}, {"SUBSUMPTION", EdgeKind::kSubsumption}};

}  // namespace

std::string_view to_string(Constructor c) { return name_of(kConstructors, c); }
std::string_view to_string(NodeKind k) { return name_of(kNodeKinds, k); }
std::string_view to_string(GateType g) { return name_of(kGateTypes, g); }
std::string_view to_string(Category c) { return name_of(kCategories, c); }
std::string_view to_string(EdgeKind e) { return name_of(kEdgeKinds, e); }

std::optional<Constructor> constructor_from_string(std::string_view s) {
  return lookup(kConstructors, s);
}
std::optional<NodeKind> node_kind_from_string(std::string_view s) {
  return lookup(kNodeKinds, s);
}
std::optional<GateType> gate_type_from_string(std::string_view s) {
  return lookup(kGateTypes, s);
}
std::optional<Category> category_from_string(std::string_view s) {
  return lookup(kCategories, s);
}
std::optional<EdgeKind> edge_kind_from_string(std::string_view s) {
  return lookup(kEdgeKinds, s);
}

// ---------------------------------------------------------------------------
// Task model
// ---------------------------------------------------------------------------

const TaskNode& TaskModel::at(const TaskId& id) const {
  auto it = nodes.find(id);
  if (it == nodes.end()) throw UnknownTask(id);
  return it->second;
}

std::map<TaskId, TaskId> TaskModel::parents() const {
  std::map<TaskId, TaskId> result;
  for (const auto& [id, node] : nodes) {
    for (const TaskId& child : node.children) result.emplace(child, id);
  }
  return result;
}

TaskId lowest_common_ancestor(const TaskModel& tm, const TaskId& t1,
                              const TaskId& t2) {
  if (!tm.contains(t1)) throw UnknownTask(t1);
  if (!tm.contains(t2)) throw UnknownTask(t2);
  auto parents = tm.parents();
  std::set<TaskId> chain;
  for (TaskId cur = t1;;) {
    if (!chain.insert(cur).second) break;
    auto it = parents.find(cur);
    if (it == parents.end()) break;
    cur = it->second;
  }
  std::set<TaskId> seen;
  for (TaskId cur = t2; seen.insert(cur).second;) {
    if (chain.contains(cur)) return cur;
    auto it = parents.find(cur);
    if (it == parents.end()) break;
    cur = it->second;
  }
  throw Error("tasks " + t1 + " and " + t2 + " share no ancestor");
}

// ---------------------------------------------------------------------------
// Causality graph / world
// ---------------------------------------------------------------------------

const CausalNode& CausalityGraph::at(const NodeId& id) const {
  auto it = nodes.find(id);
  if (it == nodes.end()) throw UnknownNode(id);
  return it->second;
}

WorldModel::WorldModel(std::set<std::string> classes,
                       std::map<std::string, Instance> instances)
    : classes_(std::move(classes)), instances_(std::move(instances)) {
  for (const auto& [id, inst] : instances_) {
    if (!classes_.contains(inst.class_name)) {
      throw SchemaError("instance " + id + " has undeclared class " +
                        inst.class_name);
    }
    ++counts_[inst.class_name];
  }
}

std::int64_t WorldModel::count(const std::string& class_name) const {
  auto it = counts_.find(class_name);
  return it == counts_.end() ? 0 : it->second;
}

std::optional<std::string> WorldModel::class_of(const std::string& term) const {
  if (classes_.contains(term)) return term;
  if (auto it = instances_.find(term); it != instances_.end()) {
    return it->second.class_name;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

bool ValidationReport::ok() const { return error_count() == 0; }

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(
      std::count_if(issues.begin(), issues.end(), [](const Issue& i) {
        return i.severity == IssueSeverity::kError;
      }));
}

std::size_t ValidationReport::warning_count() const {
  return issues.size() - error_count();
}

void ValidationReport::error(std::string location, std::string message) {
  issues.push_back({IssueSeverity::kError, std::move(location),
                    std::move(message)});
}

void ValidationReport::warning(std::string location, std::string message) {
  issues.push_back({IssueSeverity::kWarning, std::move(location),
                    std::move(message)});
}

void ValidationReport::append(const ValidationReport& other) {
  issues.insert(issues.end(), other.issues.begin(), other.issues.end());
}

ValidationReport validate_condition(const Condition& c,
                                    const std::string& location) {
  ValidationReport r;
  if (!is_identifier(c.subject)) {
    r.error(location, "condition subject '" + c.subject +
                          "' is not an identifier");
  }
  if (!is_identifier(c.predicate)) {
    r.error(location, "condition predicate '" + c.predicate +
                          "' is not an identifier");
  }
  if (c.object.kind() == Literal::Kind::kIdentifier &&
      !is_identifier(c.object.as_identifier())) {
    r.error(location, "condition object is not an identifier");
  }
  return r;
}

ValidationReport validate_task_model(const TaskModel& tm) {
  ValidationReport r;
  if (tm.nodes.empty()) {
    r.error("<model>", "task model has no tasks");
    return r;
  }
  if (!tm.contains(tm.root)) {
    r.error(tm.root.empty() ? "<model>" : tm.root, "root task not defined");
  }

  std::map<TaskId, std::vector<TaskId>> parents_of;
  for (const auto& [id, node] : tm.nodes) {
    if (id != node.id) r.error(id, "node id does not match its key");
    if (!is_identifier(id)) r.error(id, "task id is not an identifier");

    if (node.constructor == Constructor::kLeaf && !node.children.empty()) {
      r.error(id, "constructor arity: LEAF task has children");
    }
    if (node.constructor != Constructor::kLeaf && node.children.size() < 2) {
      r.error(id, "constructor arity: " +
                      std::string(to_string(node.constructor)) +
                      " needs at least 2 children");
    }
    std::set<TaskId> seen;
    for (const TaskId& child : node.children) {
      if (!seen.insert(child).second) {
        r.error(id, "child " + child + " listed twice");
        continue;
      }
      if (child == id) {
        r.error(id, "cycle: task lists itself as a child");
        continue;
      }
      if (!tm.contains(child)) {
        r.error(id, "unknown child task " + child);
        continue;
      }
      parents_of[child].push_back(id);
    }
    for (const Condition& c : node.preconditions_contextual)
      r.append(validate_condition(c, id));
    for (const Condition& c : node.preconditions_favorable)
      r.append(validate_condition(c, id));
    for (const Condition& c : node.postconditions)
      r.append(validate_condition(c, id));
    // A set that contradicts itself can never hold.
    for (const auto& [set, what] :
         {std::pair{&node.preconditions_contextual, "contextual preconditions"},
          std::pair{&node.preconditions_favorable, "favorable preconditions"},
          std::pair{&node.postconditions, "postconditions"}}) {
      if (condition_set_conflict(*set, *set))
        r.error(id, std::string(what) + " contradict each other");
    }
  }

  for (const auto& [child, ps] : parents_of) {
    if (ps.size() > 1) r.error(child, "task referenced by several parents");
    if (child == tm.root) r.error(child, "cycle: root task has a parent");
  }

  // Every task must hang below the root; anything else is either a second
  // root or part of a detached cycle.
  if (tm.contains(tm.root)) {
    std::set<TaskId> reached;
    std::vector<TaskId> stack{tm.root};
    while (!stack.empty()) {
      TaskId cur = stack.back();
      stack.pop_back();
      if (!reached.insert(cur).second) continue;
      for (const TaskId& child : tm.nodes.at(cur).children) {
        if (tm.contains(child) && child != cur) stack.push_back(child);
      }
    }
    for (const auto& [id, node] : tm.nodes) {
      if (reached.contains(id)) continue;
      if (parents_of.contains(id)) {
        r.error(id, "cycle: task is not reachable from the root");
      } else {
        r.error(id, "second root: task has no parent");
      }
    }
  }
  return r;
}

namespace {

bool has_cycle(const CausalityGraph& cg, std::string* witness) {
  std::map<NodeId, std::vector<NodeId>> succ;
  for (const Edge& e : cg.edges) succ[e.from].push_back(e.to);
  enum class Mark { kNone, kActive, kDone };
  std::map<NodeId, Mark> mark;
  std::function<bool(const NodeId&)> visit = [&](const NodeId& n) {
    Mark& m = mark[n];
    if (m == Mark::kActive) {
      *witness = n;
      return true;
    }
    if (m == Mark::kDone) return false;
    m = Mark::kActive;
    for (const NodeId& s : succ[n]) {
      if (visit(s)) return true;
    }
    mark[n] = Mark::kDone;
    return false;
  };
  for (const auto& [id, node] : cg.nodes) {
    if (visit(id)) return true;
  }
  return false;
}

}  // namespace

ValidationReport validate_causality_structure(const CausalityGraph& cg) {
  ValidationReport r;
  for (const auto& [id, n] : cg.nodes) {
    if (id != n.id) r.error(id, "node id does not match its key");
    if (!is_identifier(id)) r.error(id, "node id is not an identifier");

    const bool needs_task =
        n.kind == NodeKind::kAction || n.kind == NodeKind::kBarrier;
    if (needs_task && !n.task_ref) r.error(id, "missing task_ref");
    if (!needs_task && n.task_ref) r.error(id, "task_ref not allowed");

    const bool is_gate = n.kind == NodeKind::kGate;
    if (is_gate && !n.gate_type) r.error(id, "missing gate_type");
    if (!is_gate && n.gate_type) r.error(id, "gate_type not allowed");

    const bool is_consequence = n.kind == NodeKind::kConsequence;
    if (is_consequence && !n.category) r.error(id, "missing category");
    if (!is_consequence && n.category) r.error(id, "category not allowed");
    if (is_consequence && !n.severity) r.error(id, "missing severity");
    if (!is_consequence && n.severity) r.error(id, "severity not allowed");
    if (n.severity && (*n.severity < 0 || *n.severity > kMaxSeverity)) {
      r.error(id, "severity out of range 0.." + std::to_string(kMaxSeverity));
    }

    const bool timed = n.kind == NodeKind::kEvent || n.kind == NodeKind::kAction;
    if (n.lead_time && !timed) r.error(id, "lead_time not allowed");
    if (n.lead_time && !(*n.lead_time >= 0.0)) {
      r.error(id, "lead_time must be non-negative");
    }
  }

  std::map<NodeId, int> in_degree;
  std::map<NodeId, int> out_degree;
  for (const Edge& e : cg.edges) {
    const std::string where = e.from + "->" + e.to;
    auto from = cg.nodes.find(e.from);
    auto to = cg.nodes.find(e.to);
    if (from == cg.nodes.end()) r.error(where, "edge from unknown node");
    if (to == cg.nodes.end()) r.error(where, "edge to unknown node");
    if (from == cg.nodes.end() || to == cg.nodes.end()) continue;
    ++out_degree[e.from];
    ++in_degree[e.to];
    if (from->second.kind == NodeKind::kConsequence) {
      r.error(e.from, "consequence has outgoing edge");
    }
    if (to->second.kind == NodeKind::kAction && e.kind == EdgeKind::kCausal) {
      r.error(e.to, "action has incoming causal edge");
    }
    if (e.kind == EdgeKind::kSubsumption &&
        (from->second.kind != NodeKind::kEvent ||
         to->second.kind != NodeKind::kEvent)) {
      r.error(where, "subsumption edge must connect two events");
    }
  }
  for (const auto& [id, n] : cg.nodes) {
    if (n.kind != NodeKind::kGate) continue;
    if (in_degree[id] < 2) r.error(id, "gate needs at least 2 inputs");
    if (out_degree[id] < 1) r.error(id, "gate needs an output");
  }

  std::string witness;
  if (has_cycle(cg, &witness)) r.error(witness, "cycle in causality graph");

  // Warning: consequences no action or barrier can reach.
  std::map<NodeId, std::vector<NodeId>> succ;
  for (const Edge& e : cg.edges) succ[e.from].push_back(e.to);
  std::set<NodeId> reached;
  std::vector<NodeId> stack;
  for (const auto& [id, n] : cg.nodes) {
    if (n.kind == NodeKind::kAction || n.kind == NodeKind::kBarrier)
      stack.push_back(id);
  }
  while (!stack.empty()) {
    NodeId cur = stack.back();
    stack.pop_back();
    if (!reached.insert(cur).second) continue;
    for (const NodeId& s : succ[cur]) stack.push_back(s);
  }
  for (const auto& [id, n] : cg.nodes) {
    if (n.kind == NodeKind::kConsequence && !reached.contains(id)) {
      r.warning(id, "consequence unreachable from any action or barrier");
    }
  }
  return r;
}

ValidationReport validate_causality_graph(const CausalityGraph& cg,
                                          const TaskModel& tm) {
  ValidationReport r = validate_causality_structure(cg);
  for (const auto& [id, n] : cg.nodes) {
    if (n.task_ref && !tm.contains(*n.task_ref)) {
      r.error(id, "dangling task_ref " + *n.task_ref);
    }
  }
  return r;
}

ValidationReport validate_bundle(const ModelBundle& bundle, bool strict) {
  ValidationReport r = validate_task_model(bundle.task_model);
  r.append(validate_causality_graph(bundle.causality, bundle.task_model));
  if (!strict) return r;
  auto check = [&](const ConditionSet& set, const TaskId& where) {
    for (const Condition& c : set) {
      if (!bundle.world.class_of(c.subject)) {
        r.error(where, "condition subject " + c.subject +
                           " names no world class or instance");
      }
    }
  };
  for (const auto& [id, node] : bundle.task_model.nodes) {
    check(node.preconditions_contextual, id);
    check(node.preconditions_favorable, id);
    check(node.postconditions, id);
  }
  return r;
}

}  // namespace dilemma
