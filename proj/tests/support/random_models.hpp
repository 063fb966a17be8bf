#pragma once

// Random but structurally valid model bundles for property tests.
//
// Task trees are built bottom-up by grouping leaves under composite nodes, so
// every composite has at least two children. Causality graphs only get edges
// from lower to higher positions in a fixed node order, which keeps them
// acyclic; ACTION nodes sit at the front (no incoming edges) and CONSEQUENCE
// nodes at the back (no outgoing edges). Some bundles get a planted
// "two evils" motif so prohibition dilemmas actually show up.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "dilemma/knowledge.hpp"

namespace testing_support {

using namespace dilemma;

class ModelFactory {
 public:
  explicit ModelFactory(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  int uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
  }

  Condition random_condition() {
    static const std::vector<std::string> subjects{"Car", "Road", "Light", "Bob"};
    static const std::vector<std::string> predicates{"state", "color", "is-on"};
    Condition c{pick(subjects), pick(predicates), Literal::boolean(true)};
    switch (uniform(0, 4)) {
      case 0: c.object = Literal::boolean(true); break;
      case 1: c.object = Literal::boolean(false); break;
      case 2: c.object = Literal::number(uniform(0, 2)); break;
      case 3: c.object = Literal::identifier("Red"); break;
      default: c.object = Literal::identifier("Green"); break;
    }
    return c;
  }

  ConditionSet random_conditions(int max_count) {
    ConditionSet s;
    int n = uniform(0, max_count);
    for (int i = 0; i < n; ++i) {
      Condition c = random_condition();
      if (!condition_set_conflict(s, {c})) s.insert(c);
    }
    return s;
  }

  /// Tree with `leaves` leaves (>= 1); at most 2 * leaves - 1 nodes.
  TaskModel task_model(int leaves) {
    TaskModel tm;
    std::vector<TaskId> pool;
    int next = 0;
    auto fresh = [&] {
      // Unsorted-looking ids so canonical pair order is actually exercised.
      static const char* stems[] = {"kilo", "alpha", "mike", "echo", "zulu",
                                    "delta", "hotel", "bravo", "yank", "golf",
                                    "lima", "oscar", "papa", "india", "nova",
                                    "quebec", "romeo", "sierra", "tango", "victor",
                                    "whiskey", "xray", "uniform", "foxtrot"};
      std::string id = std::string(stems[next % 24]) + "_" + std::to_string(next);
      ++next;
      return id;
    };
    for (int i = 0; i < leaves; ++i) {
      TaskNode n;
      n.id = fresh();
      n.name = n.id;
      n.constructor = Constructor::kLeaf;
      n.preconditions_contextual = random_conditions(2);
      n.preconditions_favorable = random_conditions(1);
      n.postconditions = random_conditions(2);
      pool.push_back(n.id);
      tm.nodes[n.id] = std::move(n);
    }
    while (pool.size() > 1) {
      std::shuffle(pool.begin(), pool.end(), rng_);
      int k = std::min<int>(static_cast<int>(pool.size()), uniform(2, 3));
      TaskNode parent;
      parent.id = fresh();
      parent.name = parent.id;
      static const Constructor kinds[] = {Constructor::kSeq, Constructor::kPar,
                                          Constructor::kInd};
      parent.constructor = kinds[uniform(0, 2)];
      parent.children.assign(pool.end() - k, pool.end());
      pool.resize(pool.size() - k);
      if (chance(0.3)) parent.preconditions_contextual = random_conditions(1);
      if (chance(0.3)) parent.postconditions = random_conditions(1);
      pool.push_back(parent.id);
      tm.nodes[parent.id] = std::move(parent);
    }
    tm.root = pool.front();
    return tm;
  }

  /// Acyclic, valid graph over `tm` with at most `max_nodes` nodes.
  CausalityGraph causality(const TaskModel& tm, int max_nodes) {
    std::vector<TaskId> tasks;
    for (const auto& [id, n] : tm.nodes) tasks.push_back(id);
    std::vector<TaskId> leaves;
    for (const auto& [id, n] : tm.nodes)
      if (n.children.empty()) leaves.push_back(id);

    CausalityGraph cg;
    // Position in the acyclic order; edges go from lower to higher.
    std::vector<NodeId> order;
    std::vector<NodeId> front, middle, back;
    int counter = 0;
    auto add = [&](NodeKind kind, std::vector<NodeId>& slot,
                   std::optional<TaskId> task = std::nullopt) {
      CausalNode n;
      n.kind = kind;
      n.id = std::string(1, "EABGC"[static_cast<int>(kind)]) + std::to_string(counter++);
      n.label = n.id;
      n.task_ref = task;
      if (kind == NodeKind::kGate) n.gate_type = chance(0.6) ? GateType::kAnd : GateType::kOr;
      if (kind == NodeKind::kConsequence) {
        n.category = static_cast<Category>(uniform(0, 2));
        n.severity = uniform(0, kMaxSeverity);
      }
      if ((kind == NodeKind::kEvent || kind == NodeKind::kAction) && chance(0.15))
        n.lead_time = uniform(0, 120);
      slot.push_back(n.id);
      cg.nodes[n.id] = std::move(n);
      return slot.back();
    };
    auto edge = [&](const NodeId& a, const NodeId& b, EdgeKind k = EdgeKind::kCausal) {
      cg.edges.insert(Edge{a, b, k});
    };

    int budget = max_nodes;
    // Planted motif: two tasks whose omissions jointly feed an AND gate and
    // whose actions each cause harm.
    if (leaves.size() >= 2 && chance(0.45) && budget >= 9) {
      std::vector<TaskId> two = leaves;
      std::shuffle(two.begin(), two.end(), rng_);
      NodeId ax = add(NodeKind::kAction, front, two[0]);
      NodeId ay = add(NodeKind::kAction, front, two[1]);
      NodeId bx = add(NodeKind::kBarrier, middle, two[0]);
      NodeId by = add(NodeKind::kBarrier, middle, two[1]);
      NodeId ex = add(NodeKind::kEvent, middle);
      NodeId ey = add(NodeKind::kEvent, middle);
      NodeId g = add(NodeKind::kGate, middle);
      cg.nodes[g].gate_type = GateType::kAnd;
      NodeId c1 = add(NodeKind::kConsequence, back);
      NodeId c2 = add(NodeKind::kConsequence, back);
      edge(bx, ex);
      edge(by, ey);
      edge(ex, g);
      edge(ey, g);
      edge(g, c1);
      edge(ax, c2);
      edge(ay, chance(0.5) ? c2 : c1);
      budget -= 9;
    }

    int actions = std::min(budget / 5, uniform(0, 4));
    int consequences = uniform(1, 4);
    int rest = std::max(0, budget - actions - consequences);
    rest = std::min(rest, uniform(2, 14));
    for (int i = 0; i < actions; ++i) add(NodeKind::kAction, front, pick(tasks));
    std::vector<NodeId> fresh_middle;
    for (int i = 0; i < rest; ++i) {
      int roll = uniform(0, 9);
      if (roll < 4) add(NodeKind::kEvent, fresh_middle);
      else if (roll < 8) add(NodeKind::kBarrier, fresh_middle, pick(tasks));
      else add(NodeKind::kGate, fresh_middle);
    }
    for (int i = 0; i < consequences; ++i) add(NodeKind::kConsequence, back);

    // The motif keeps its own internal order (barriers, events, gate); fresh
    // middle nodes are shuffled and appended after it, so they can only hang
    // below the motif.
    std::shuffle(fresh_middle.begin(), fresh_middle.end(), rng_);
    order = front;
    order.insert(order.end(), middle.begin(), middle.end());
    order.insert(order.end(), fresh_middle.begin(), fresh_middle.end());
    order.insert(order.end(), back.begin(), back.end());

    auto kind = [&](const NodeId& id) { return cg.nodes.at(id).kind; };
    const int n = static_cast<int>(order.size());
    const int first_middle = static_cast<int>(front.size() + middle.size());
    const int first_back = n - static_cast<int>(back.size());

    // Random predecessors for fresh middle and consequence nodes.
    for (int j = first_middle; j < n; ++j) {
      const NodeId& to = order[j];
      NodeKind k = kind(to);
      int want = k == NodeKind::kGate ? uniform(2, 3)
                 : k == NodeKind::kBarrier ? uniform(0, 2)
                 : k == NodeKind::kEvent ? uniform(0, 2)
                                         : uniform(1, 2);
      std::vector<int> candidates;
      for (int i = 0; i < std::min(j, first_back); ++i) candidates.push_back(i);
      std::shuffle(candidates.begin(), candidates.end(), rng_);
      int got = 0;
      for (int i : candidates) {
        if (got >= want) break;
        EdgeKind ek = EdgeKind::kCausal;
        if (k == NodeKind::kEvent && kind(order[i]) == NodeKind::kEvent && chance(0.2))
          ek = EdgeKind::kSubsumption;
        edge(order[i], to, ek);
        ++got;
      }
    }
    // Give most non-consequence nodes an outlet.
    for (int i = 0; i < first_back; ++i) {
      const NodeId& from = order[i];
      bool has_out = std::any_of(cg.edges.begin(), cg.edges.end(),
                                 [&](const Edge& e) { return e.from == from; });
      bool is_gate = kind(from) == NodeKind::kGate;
      if (has_out || (!is_gate && chance(0.2))) continue;
      int lo = std::max(i + 1, first_middle);
      if (lo >= n) continue;
      edge(from, order[uniform(lo, n - 1)]);
    }
    // Gates left without enough inputs or an output degrade to events.
    for (auto& [id, node] : cg.nodes) {
      if (node.kind != NodeKind::kGate) continue;
      int in = 0, out = 0;
      for (const Edge& e : cg.edges) {
        in += e.to == id;
        out += e.from == id;
      }
      if (in < 2 || out < 1) {
        node.kind = NodeKind::kEvent;
        node.gate_type.reset();
      }
    }
    // Subsumption edges may only join events.
    std::set<Edge> fixed;
    for (Edge e : cg.edges) {
      if (e.kind == EdgeKind::kSubsumption &&
          (kind(e.from) != NodeKind::kEvent || kind(e.to) != NodeKind::kEvent))
        e.kind = EdgeKind::kCausal;
      fixed.insert(e);
    }
    cg.edges = std::move(fixed);
    return cg;
  }

  WorldModel world() {
    std::set<std::string> classes{"Car", "Road", "Light"};
    std::map<std::string, Instance> instances;
    int k = 0;
    for (const std::string& c : classes) {
      int count = uniform(0, 3);
      for (int i = 0; i < count; ++i)
        instances["obj_" + std::to_string(k++)] = Instance{c, {}};
    }
    return WorldModel(std::move(classes), std::move(instances));
  }

  /// Up to 12 tasks and 25 causal nodes.
  ModelBundle bundle(int max_leaves = 6, int max_nodes = 25) {
    ModelBundle b;
    b.task_model = task_model(uniform(2, max_leaves));
    b.causality = causality(b.task_model, max_nodes);
    b.world = world();
    return b;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testing_support
