#include <doctest.h>

#include "dilemma/knowledge.hpp"
#include "support/fixtures.hpp"

using namespace dilemma;
using testing_support::fixture_bundle;

namespace {

Condition cond(std::string s, std::string p, std::string_view o) {
  return Condition{std::move(s), std::move(p), Literal::from_text(o)};
}

bool mentions(const ValidationReport& r, std::string_view phrase) {
  for (const Issue& i : r.issues)
    if (i.message.find(phrase) != std::string::npos) return true;
  return false;
}

TaskNode leaf(const TaskId& id) {
  TaskNode n;
  n.id = id;
  n.name = id;
  return n;
}

TaskNode composite(const TaskId& id, Constructor k, std::vector<TaskId> kids) {
  TaskNode n = leaf(id);
  n.constructor = k;
  n.children = std::move(kids);
  return n;
}

TaskModel model(TaskId root, std::vector<TaskNode> nodes) {
  TaskModel tm;
  tm.root = std::move(root);
  for (auto& n : nodes) tm.nodes[n.id] = n;
  return tm;
}

CausalNode node(const NodeId& id, NodeKind k) {
  CausalNode n;
  n.id = id;
  n.kind = k;
  n.label = id;
  if (k == NodeKind::kConsequence) {
    n.category = Category::kGravity;
    n.severity = 3;
  }
  if (k == NodeKind::kGate) n.gate_type = GateType::kAnd;
  return n;
}

}  // namespace

TEST_SUITE("knowledge") {
  TEST_CASE("literals canonicalize booleans and numbers, keep identifier case") {
    CHECK(Literal::from_text("True") == Literal::boolean(true));
    CHECK(Literal::from_text("FALSE") == Literal::boolean(false));
    CHECK(Literal::from_text("2") == Literal::from_text("2.0"));
    CHECK(Literal::from_text("Red") != Literal::from_text("red"));
    CHECK(Literal::from_text("-1.5").kind() == Literal::Kind::kNumber);
    CHECK_THROWS_AS(Literal::from_text("no spaces"), SchemaError);
    CHECK_THROWS_AS(Literal::from_text(""), SchemaError);
  }

  TEST_CASE("identifier syntax") {
    CHECK(is_identifier("has-color"));
    CHECK(is_identifier("_x9"));
    CHECK_FALSE(is_identifier("9x"));
    CHECK_FALSE(is_identifier(""));
    CHECK_FALSE(is_identifier("a b"));
  }

  TEST_CASE("condition conflict examples") {
    CHECK(condition_conflict(cond("Vehicle", "is-stopped", "true"),
                             cond("Vehicle", "is-stopped", "false")));
    CHECK_FALSE(condition_conflict(cond("Vehicle", "is-stopped", "true"),
                                   cond("Vehicle", "is-stopped", "true")));
    CHECK_FALSE(condition_conflict(cond("Sign", "is-a", "Stop"),
                                   cond("Vehicle", "has-state", "aquaplaning")));
    // Authoring style never creates a conflict.
    CHECK_FALSE(condition_conflict(cond("Door", "is-open", "TRUE"),
                                   cond("Door", "is-open", "true")));
    CHECK_FALSE(condition_conflict(cond("Car", "speed", "3"), cond("Car", "speed", "3.0")));
    CHECK(condition_conflict(cond("Car", "color", "Red"), cond("Car", "color", "red")));
  }

  TEST_CASE("condition set conflict examples") {
    ConditionSet closed{cond("Door", "is-open", "false")};
    ConditionSet open{cond("Door", "is-open", "true")};
    CHECK(condition_set_conflict(closed, open));
    CHECK(condition_set_conflict(open, closed));
    CHECK_FALSE(condition_set_conflict({}, open));
    CHECK_FALSE(condition_set_conflict(open, {}));

    ModelBundle b = fixture_bundle("driving");
    CHECK_FALSE(condition_set_conflict(
        b.task_model.at("Handle_stop").preconditions_contextual,
        b.task_model.at("Handle_aquaplaning").preconditions_contextual));
  }

  TEST_CASE("lowest common ancestor on the driving tree") {
    ModelBundle b = fixture_bundle("driving");
    const TaskModel& tm = b.task_model;
    CHECK(lowest_common_ancestor(tm, "Handle_stop", "Handle_aquaplaning") == "Drive");
    CHECK(lowest_common_ancestor(tm, "Drive_fast", "Drive_slowly") == "Cruise");
    // Cousins one level apart meet at Commute.
    CHECK(lowest_common_ancestor(tm, "Leave_late_from_work", "Drive_fast") == "Commute");
    CHECK(lowest_common_ancestor(tm, "Drive_fast", "Handle_stop") == "Drive");
    // Inclusive: an ancestor is its own lowest common ancestor with a descendant.
    CHECK(lowest_common_ancestor(tm, "Cruise", "Drive_fast") == "Cruise");
    CHECK_THROWS_AS(lowest_common_ancestor(tm, "Drive", "Nope"), UnknownTask);
  }

  TEST_CASE("lowest common ancestor: siblings under root, cousins in three levels") {
    TaskModel tm = model("R", {composite("R", Constructor::kPar, {"A", "B"}),
                               composite("A", Constructor::kSeq, {"A1", "A2"}),
                               composite("B", Constructor::kInd, {"B1", "B2"}),
                               leaf("A1"), leaf("A2"), leaf("B1"), leaf("B2")});
    REQUIRE(validate_task_model(tm).ok());
    CHECK(lowest_common_ancestor(tm, "A", "B") == "R");
    CHECK(lowest_common_ancestor(tm, "A1", "B2") == "R");
    CHECK(lowest_common_ancestor(tm, "A1", "A2") == "A");
  }

  TEST_CASE("task model validation") {
    ModelBundle b = fixture_bundle("driving");
    CHECK(validate_task_model(b.task_model).ok());

    TaskModel self = model("R", {composite("R", Constructor::kSeq, {"R", "X"}), leaf("X")});
    CHECK_FALSE(validate_task_model(self).ok());
    CHECK(mentions(validate_task_model(self), "cycle"));

    TaskModel arity = model("R", {composite("R", Constructor::kSeq, {"X"}), leaf("X")});
    CHECK(mentions(validate_task_model(arity), "constructor arity"));

    TaskModel leafy = model("R", {composite("R", Constructor::kLeaf, {"X", "Y"}),
                                  leaf("X"), leaf("Y")});
    CHECK(mentions(validate_task_model(leafy), "constructor arity"));

    TaskModel orphan = model("R", {composite("R", Constructor::kPar, {"X", "Y"}),
                                   leaf("X"), leaf("Y"), leaf("Z")});
    CHECK(mentions(validate_task_model(orphan), "second root"));

    TaskModel missing = model("R", {composite("R", Constructor::kPar, {"X", "Y"}), leaf("X")});
    CHECK(mentions(validate_task_model(missing), "unknown child"));

    TaskModel twice = model("R", {composite("R", Constructor::kPar, {"A", "B"}),
                                  composite("A", Constructor::kPar, {"X", "Y"}),
                                  composite("B", Constructor::kPar, {"X", "Z"}),
                                  leaf("X"), leaf("Y"), leaf("Z")});
    CHECK(mentions(validate_task_model(twice), "several parents"));

    TaskModel empty;
    CHECK_FALSE(validate_task_model(empty).ok());

    TaskModel torn = model("R", {composite("R", Constructor::kPar, {"X", "Y"}), leaf("X"),
                                 leaf("Y")});
    torn.nodes.at("X").preconditions_contextual = {cond("Door", "is-open", "true"),
                                                   cond("Door", "is-open", "false")};
    CHECK_FALSE(validate_task_model(torn).ok());
    CHECK(mentions(validate_task_model(torn), "contextual preconditions contradict"));
  }

  TEST_CASE("validation is pure") {
    TaskModel bad = model("R", {composite("R", Constructor::kSeq, {"X"}), leaf("X")});
    CHECK(validate_task_model(bad) == validate_task_model(bad));
  }

  TEST_CASE("causality graph validation") {
    ModelBundle b = fixture_bundle("driving");
    ValidationReport ok = validate_causality_graph(b.causality, b.task_model);
    CHECK(ok.ok());
    CHECK(ok.warning_count() == 0);

    CausalityGraph g;
    g.nodes["C"] = node("C", NodeKind::kConsequence);
    g.nodes["E"] = node("E", NodeKind::kEvent);
    g.edges.insert({"C", "E", EdgeKind::kCausal});
    CHECK(mentions(validate_causality_structure(g), "consequence has outgoing edge"));

    CausalityGraph dangling;
    CausalNode bar = node("B", NodeKind::kBarrier);
    bar.task_ref = "NoSuchTask";
    dangling.nodes["B"] = bar;
    dangling.nodes["C"] = node("C", NodeKind::kConsequence);
    dangling.edges.insert({"B", "C", EdgeKind::kCausal});
    ValidationReport r = validate_causality_graph(dangling, b.task_model);
    CHECK(mentions(r, "dangling task_ref"));

    CausalityGraph cyc;
    cyc.nodes["A"] = node("A", NodeKind::kEvent);
    cyc.nodes["B"] = node("B", NodeKind::kEvent);
    cyc.edges.insert({"A", "B", EdgeKind::kCausal});
    cyc.edges.insert({"B", "A", EdgeKind::kCausal});
    CHECK(mentions(validate_causality_structure(cyc), "cycle"));
  }

  TEST_CASE("causality field typing") {
    CausalityGraph g;
    CausalNode c = node("C", NodeKind::kConsequence);
    c.severity = 6;
    g.nodes["C"] = c;
    CHECK(mentions(validate_causality_structure(g), "severity out of range"));

    CausalNode e = node("E", NodeKind::kEvent);
    e.category = Category::kPoints;
    g.nodes["E"] = e;
    CHECK(mentions(validate_causality_structure(g), "category not allowed"));

    CausalityGraph gate;
    gate.nodes["G"] = node("G", NodeKind::kGate);
    gate.nodes["E"] = node("E", NodeKind::kEvent);
    gate.nodes["C"] = node("C", NodeKind::kConsequence);
    gate.edges.insert({"E", "G", EdgeKind::kCausal});
    gate.edges.insert({"G", "C", EdgeKind::kCausal});
    CHECK(mentions(validate_causality_structure(gate), "gate needs at least 2 inputs"));

    CausalityGraph sub;
    sub.nodes["E"] = node("E", NodeKind::kEvent);
    sub.nodes["C"] = node("C", NodeKind::kConsequence);
    sub.edges.insert({"E", "C", EdgeKind::kSubsumption});
    CHECK(mentions(validate_causality_structure(sub), "subsumption edge"));

    CausalityGraph act;
    CausalNode a = node("A", NodeKind::kAction);
    a.task_ref = "T";
    act.nodes["A"] = a;
    act.nodes["E"] = node("E", NodeKind::kEvent);
    act.edges.insert({"E", "A", EdgeKind::kCausal});
    CHECK(mentions(validate_causality_structure(act), "action has incoming causal edge"));
  }

  TEST_CASE("unreachable consequence is a warning, not an error") {
    CausalityGraph g;
    g.nodes["E"] = node("E", NodeKind::kEvent);
    g.nodes["C"] = node("C", NodeKind::kConsequence);
    g.edges.insert({"E", "C", EdgeKind::kCausal});
    ValidationReport r = validate_causality_structure(g);
    CHECK(r.ok());
    CHECK(r.warning_count() == 1);
    CHECK(mentions(r, "consequence unreachable from any action or barrier"));
  }

  TEST_CASE("world model counts and class lookup") {
    ModelBundle b = fixture_bundle("driving");
    CHECK(b.world.count("TrafficLight") == 10);
    CHECK(b.world.count("StopSign") == 1);
    CHECK(b.world.count("Nothing") == 0);
    CHECK(b.world.class_of("Light") == std::optional<std::string>("TrafficLight"));
    CHECK(b.world.class_of("Vehicle") == std::optional<std::string>("Vehicle"));
    CHECK_FALSE(b.world.class_of("Stop").has_value());

    WorldModel empty({"A"}, {});
    CHECK(empty.class_counts().empty());
    CHECK_THROWS_AS(WorldModel({"A"}, {{"x", Instance{"B", {}}}}), SchemaError);
  }

  TEST_CASE("strict bundle validation resolves condition subjects") {
    ModelBundle b = fixture_bundle("driving");
    CHECK(validate_bundle(b, true).ok());
    b.task_model.nodes.at("Handle_stop").preconditions_contextual.insert(
        cond("Unicorn", "is", "here"));
    CHECK(validate_bundle(b, false).ok());
    CHECK_FALSE(validate_bundle(b, true).ok());
  }
}
