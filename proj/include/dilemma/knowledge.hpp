#pragma once

/// @file knowledge.hpp
/// Shared domain types for the three knowledge models (tasks, causality,
/// world) and the structural checks run on them after loading.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dilemma {

using TaskId = std::string;
using NodeId = std::string;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed document; carries the 1-based position reported by the reader.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(msg + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}
  explicit ParseError(const std::string& msg) : Error(msg) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_ = 0;
  std::size_t column_ = 0;
};

/// Well-formed document whose content violates the model schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class UnknownTask : public Error {
 public:
  explicit UnknownTask(const TaskId& id) : Error("unknown task: " + id) {}
};

class UnknownNode : public Error {
 public:
  explicit UnknownNode(const NodeId& id) : Error("unknown node: " + id) {}
};

class WrongKind : public Error {
 public:
  using Error::Error;
};

class DanglingTaskRef : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Conditions
// ---------------------------------------------------------------------------

bool is_identifier(std::string_view s);

/// Object position of a condition triple. Booleans and numbers compare by
/// value; identifiers compare case-sensitively.
class Literal {
 public:
  enum class Kind : std::uint8_t { kBoolean, kNumber, kIdentifier };

  static Literal boolean(bool v);
  static Literal number(double v);
  static Literal identifier(std::string v);
  /// Canonicalizes author text: "True"/"FALSE" become booleans, numeric text
  /// becomes a number, anything else must be an identifier.
  static Literal from_text(std::string_view text);

  Kind kind() const { return kind_; }
  bool as_boolean() const { return boolean_; }
  double as_number() const { return number_; }
  const std::string& as_identifier() const { return text_; }

  std::string to_string() const;

  friend bool operator==(const Literal& a, const Literal& b);
  friend std::strong_ordering operator<=>(const Literal& a, const Literal& b);

 private:
  Kind kind_ = Kind::kIdentifier;
  bool boolean_ = false;
  double number_ = 0.0;
  std::string text_;
};

struct Condition {
  std::string subject;
  std::string predicate;
  Literal object;

  std::string to_string() const;

  friend bool operator==(const Condition&, const Condition&) = default;
  friend std::strong_ordering operator<=>(const Condition& a,
                                          const Condition& b);
};

using ConditionSet = std::set<Condition>;

/// Same (subject, predicate) with a different object.
bool condition_conflict(const Condition& c1, const Condition& c2);
bool condition_set_conflict(const ConditionSet& s1, const ConditionSet& s2);

// ---------------------------------------------------------------------------
// Task model
// ---------------------------------------------------------------------------

enum class Constructor : std::uint8_t { kSeq, kPar, kInd, kLeaf };

std::string_view to_string(Constructor c);
std::optional<Constructor> constructor_from_string(std::string_view s);

struct TaskNode {
  TaskId id;
  std::string name;
  Constructor constructor = Constructor::kLeaf;
  std::vector<TaskId> children;
  ConditionSet preconditions_contextual;
  ConditionSet preconditions_favorable;
  ConditionSet postconditions;

  friend bool operator==(const TaskNode&, const TaskNode&) = default;
};

struct TaskModel {
  TaskId root;
  std::map<TaskId, TaskNode> nodes;

  const TaskNode& at(const TaskId& id) const;
  bool contains(const TaskId& id) const { return nodes.contains(id); }
  /// Parent of each non-root node. Assumes a validated tree.
  std::map<TaskId, TaskId> parents() const;

  friend bool operator==(const TaskModel&, const TaskModel&) = default;
};

/// Deepest node having both tasks in its (inclusive) subtree.
TaskId lowest_common_ancestor(const TaskModel& tm, const TaskId& t1,
                              const TaskId& t2);

// ---------------------------------------------------------------------------
// Causality graph
// ---------------------------------------------------------------------------

enum class NodeKind : std::uint8_t {
  kEvent,
  kAction,
  kBarrier,
  kGate,
  kConsequence
};
enum class GateType : std::uint8_t { kAnd, kOr };
enum class Category : std::uint8_t { kGravity, kViolations, kPoints };
enum class EdgeKind : std::uint8_t { kCausal, kSubsumption };

std::string_view to_string(NodeKind k);
std::string_view to_string(GateType g);
std::string_view to_string(Category c);
std::string_view to_string(EdgeKind e);
std::optional<NodeKind> node_kind_from_string(std::string_view s);
std::optional<GateType> gate_type_from_string(std::string_view s);
std::optional<Category> category_from_string(std::string_view s);
std::optional<EdgeKind> edge_kind_from_string(std::string_view s);

inline constexpr int kMaxSeverity = 5;

/// Kind-specific fields are optional so that mis-typed nodes can be
/// represented and reported by validation.
struct CausalNode {
  NodeId id;
  NodeKind kind = NodeKind::kEvent;
  std::string label;
  std::optional<TaskId> task_ref;
  std::optional<GateType> gate_type;
  std::optional<Category> category;
  std::optional<int> severity;
  std::optional<double> lead_time;

  friend bool operator==(const CausalNode&, const CausalNode&) = default;
};

struct Edge {
  NodeId from;
  NodeId to;
  EdgeKind kind = EdgeKind::kCausal;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct CausalityGraph {
  std::map<NodeId, CausalNode> nodes;
  std::set<Edge> edges;

  const CausalNode& at(const NodeId& id) const;
  bool contains(const NodeId& id) const { return nodes.contains(id); }

  friend bool operator==(const CausalityGraph&,
                         const CausalityGraph&) = default;
};

// ---------------------------------------------------------------------------
// World model
// ---------------------------------------------------------------------------

struct Instance {
  std::string class_name;
  ConditionSet properties;

  friend bool operator==(const Instance&, const Instance&) = default;
};

class WorldModel {
 public:
  WorldModel() = default;
  /// Throws SchemaError on an instance of an undeclared class.
  WorldModel(std::set<std::string> classes,
             std::map<std::string, Instance> instances);

  const std::set<std::string>& classes() const { return classes_; }
  const std::map<std::string, Instance>& instances() const {
    return instances_;
  }
  /// Instances per class; only classes with at least one instance appear.
  const std::map<std::string, std::int64_t>& class_counts() const {
    return counts_;
  }
  std::int64_t count(const std::string& class_name) const;

  /// Class named by `term`: the term itself if it is a declared class, or the
  /// class of the instance it names.
  std::optional<std::string> class_of(const std::string& term) const;

  friend bool operator==(const WorldModel&, const WorldModel&) = default;

 private:
  std::set<std::string> classes_;
  std::map<std::string, Instance> instances_;
  std::map<std::string, std::int64_t> counts_;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class IssueSeverity : std::uint8_t { kError, kWarning };

struct Issue {
  IssueSeverity severity = IssueSeverity::kError;
  std::string location;
  std::string message;

  friend bool operator==(const Issue&, const Issue&) = default;
};

struct ValidationReport {
  std::vector<Issue> issues;

  bool ok() const;
  std::size_t error_count() const;
  std::size_t warning_count() const;
  void error(std::string location, std::string message);
  void warning(std::string location, std::string message);
  void append(const ValidationReport& other);

  friend bool operator==(const ValidationReport&,
                         const ValidationReport&) = default;
};

ValidationReport validate_condition(const Condition& c,
                                    const std::string& location);
ValidationReport validate_task_model(const TaskModel& tm);
/// Graph-only invariants (no task cross-references).
ValidationReport validate_causality_structure(const CausalityGraph& cg);
/// Structure plus task_ref resolution against `tm`.
ValidationReport validate_causality_graph(const CausalityGraph& cg,
                                          const TaskModel& tm);

// ---------------------------------------------------------------------------
// Bundle
// ---------------------------------------------------------------------------

struct ModelBundle {
  TaskModel task_model;
  CausalityGraph causality;
  WorldModel world;
};

/// Cross-reference checks: task_refs always; with `strict`, every condition
/// subject must name a world class or instance.
ValidationReport validate_bundle(const ModelBundle& bundle, bool strict);

}  // namespace dilemma
