/// @file causal_reasoner.cpp

#include "dilemma/causal_reasoner.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace dilemma {

void merge_outcomes(OutcomeSet& into, const OutcomeSet& extra) {
  for (const ConsequenceOutcome& o : extra) {
    auto it = std::lower_bound(
        into.begin(), into.end(), o.node,
        [](const ConsequenceOutcome& a, const NodeId& id) { return a.node < id; });
    if (it == into.end() || it->node != o.node) into.insert(it, o);
  }
}

namespace {

using Successors = std::map<NodeId, std::vector<NodeId>>;

Successors successor_map(const CausalityGraph& cg) {
  Successors succ;
  for (const Edge& e : cg.edges) succ[e.from].push_back(e.to);
  for (auto& [id, list] : succ) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return succ;
}

ConsequenceOutcome make_outcome(const CausalNode& node,
                                std::vector<NodeId> via) {
  return {node.id, node.category.value_or(Category::kGravity),
          node.severity.value_or(0), std::move(via)};
}

// Breadth-first search that never enters a BARRIER node. Successor lists are
// sorted, so the recorded witness (a shortest path) is deterministic.
OutcomeSet barrier_free_reach(const CausalityGraph& cg, const Successors& succ,
                              const NodeId& source) {
  std::map<NodeId, NodeId> parent;
  std::set<NodeId> seen{source};
  std::deque<NodeId> queue{source};
  OutcomeSet out;
  while (!queue.empty()) {
    NodeId cur = queue.front();
    queue.pop_front();
    const CausalNode& node = cg.at(cur);
    if (node.kind == NodeKind::kConsequence) {
      std::vector<NodeId> via{cur};
      for (auto it = parent.find(cur); it != parent.end();
           it = parent.find(it->second)) {
        via.push_back(it->second);
      }
      std::reverse(via.begin(), via.end());
      out.push_back(make_outcome(node, std::move(via)));
      continue;
    }
    auto it = succ.find(cur);
    if (it == succ.end()) continue;
    for (const NodeId& next : it->second) {
      if (cg.at(next).kind == NodeKind::kBarrier) continue;
      if (!seen.insert(next).second) continue;
      parent.emplace(next, cur);
      queue.push_back(next);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.node < b.node; });
  return out;
}

std::set<NodeId> descendants(const Successors& succ, const NodeId& from) {
  std::set<NodeId> out;
  std::vector<NodeId> stack{from};
  while (!stack.empty()) {
    NodeId cur = stack.back();
    stack.pop_back();
    auto it = succ.find(cur);
    if (it == succ.end()) continue;
    for (const NodeId& next : it->second) {
      if (out.insert(next).second) stack.push_back(next);
    }
  }
  return out;
}

std::vector<NodeOutcomes> negative_of_kind(const CausalityGraph& cg,
                                           NodeKind kind) {
  Successors succ = successor_map(cg);
  std::vector<NodeOutcomes> out;
  for (const auto& [id, node] : cg.nodes) {
    if (node.kind != kind) continue;
    OutcomeSet outcomes = barrier_free_reach(cg, succ, id);
    if (!outcomes.empty())
      out.push_back({id, node.task_ref.value_or(""), std::move(outcomes)});
  }
  return out;
}

}  // namespace

OutcomeSet unguarded_consequences(const CausalityGraph& cg,
                                  const NodeId& source) {
  const CausalNode& node = cg.at(source);
  if (node.kind != NodeKind::kBarrier && node.kind != NodeKind::kAction) {
    throw WrongKind("node " + source + " is " +
                    std::string(to_string(node.kind)) +
                    ", expected BARRIER or ACTION");
  }
  return barrier_free_reach(cg, successor_map(cg), source);
}

std::vector<NodeOutcomes> negative_barriers(const CausalityGraph& cg) {
  return negative_of_kind(cg, NodeKind::kBarrier);
}

std::vector<NodeOutcomes> negative_actions(const CausalityGraph& cg) {
  return negative_of_kind(cg, NodeKind::kAction);
}

OutcomeSet common_and_consequences(const CausalityGraph& cg, const NodeId& n1,
                                   const NodeId& n2) {
  cg.at(n1);
  cg.at(n2);
  if (n1 == n2) return {};
  Successors succ = successor_map(cg);
  std::set<NodeId> d1 = descendants(succ, n1);
  std::set<NodeId> d2 = descendants(succ, n2);
  OutcomeSet out;
  for (const NodeId& id : d1) {
    if (!d2.contains(id)) continue;
    const CausalNode& node = cg.at(id);
    if (node.kind != NodeKind::kGate || node.gate_type != GateType::kAnd)
      continue;
    merge_outcomes(out, barrier_free_reach(cg, succ, id));
  }
  return out;
}

bool common_and_descendant(const CausalityGraph& cg, const NodeId& n1,
                           const NodeId& n2) {
  return !common_and_consequences(cg, n1, n2).empty();
}

// ---------------------------------------------------------------------------
// Propagator
// ---------------------------------------------------------------------------

Propagator::Propagator(const CausalityGraph& cg) {
  std::map<NodeId, std::size_t> index;
  for (const auto& [id, node] : cg.nodes) {
    index.emplace(id, ids_.size());
    ids_.push_back(id);
    nodes_.push_back(node);
  }
  preds_.resize(ids_.size());
  succs_.resize(ids_.size());
  for (const Edge& e : cg.edges) {
    auto from = index.find(e.from);
    auto to = index.find(e.to);
    if (from == index.end()) throw UnknownNode(e.from);
    if (to == index.end()) throw UnknownNode(e.to);
    preds_[to->second].push_back(from->second);
    succs_[from->second].push_back(to->second);
  }
  for (auto* lists : {&preds_, &succs_}) {
    for (auto& l : *lists) {
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
    }
  }

  // Kahn's algorithm, smallest index first.
  std::vector<std::size_t> indegree(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) indegree[i] = preds_[i].size();
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (indegree[i] == 0) ready.insert(i);
  }
  while (!ready.empty()) {
    std::size_t cur = *ready.begin();
    ready.erase(ready.begin());
    topo_.push_back(cur);
    for (std::size_t s : succs_[cur]) {
      if (--indegree[s] == 0) ready.insert(s);
    }
  }
  if (topo_.size() != ids_.size()) {
    throw SchemaError("cycle in causality graph");
  }
}

std::optional<std::size_t> Propagator::index_of(const NodeId& id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

std::vector<NodeId> Propagator::root_events() const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (nodes_[i].kind == NodeKind::kEvent && preds_[i].empty())
      out.push_back(ids_[i]);
  }
  return out;
}

bool Propagator::evaluate(std::size_t i, const std::vector<bool>& active,
                          const std::vector<bool>& held,
                          const std::vector<bool>& ambient,
                          const std::vector<bool>& performed_action) const {
  const auto& preds = preds_[i];
  auto any_pred = [&] {
    return std::any_of(preds.begin(), preds.end(),
                       [&](std::size_t p) { return active[p]; });
  };
  switch (nodes_[i].kind) {
    case NodeKind::kAction:
      return performed_action[i];
    case NodeKind::kBarrier:
      return !held[i] && (preds.empty() || any_pred());
    case NodeKind::kEvent:
      return ambient[i] || any_pred();
    case NodeKind::kGate:
      if (nodes_[i].gate_type == GateType::kAnd) {
        return !preds.empty() &&
               std::all_of(preds.begin(), preds.end(),
                           [&](std::size_t p) { return active[p]; });
      }
      return any_pred();
    case NodeKind::kConsequence:
      return any_pred();
  }
  return false;
}

Propagator::State Propagator::run(const ActivationScenario& scenario,
                                  std::span<const std::size_t> order) const {
  const std::size_t n = ids_.size();
  std::vector<bool> ambient(n, false);
  for (const NodeId& id : scenario.ambient_events) {
    auto i = index_of(id);
    if (!i) throw UnknownNode(id);
    if (nodes_[*i].kind != NodeKind::kEvent) {
      throw WrongKind("ambient node " + id + " is not an EVENT");
    }
    ambient[*i] = true;
  }

  State state;
  state.active.assign(n, false);
  state.held.assign(n, false);
  std::vector<bool> performed_action(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const CausalNode& node = nodes_[i];
    if (!node.task_ref || !scenario.performed_tasks.contains(*node.task_ref))
      continue;
    if (node.kind == NodeKind::kBarrier) state.held[i] = true;
    if (node.kind == NodeKind::kAction) performed_action[i] = true;
  }

  std::span<const std::size_t> sweep =
      order.empty() ? std::span<const std::size_t>(topo_) : order;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i : sweep) {
      bool value = evaluate(i, state.active, state.held, ambient,
                            performed_action);
      if (value != state.active[i]) {
        state.active[i] = value;
        changed = true;
      }
    }
    if (changed) ++state.iterations;
  }
  return state;
}

OutcomeSet Propagator::triggered(const State& state,
                                 const ActivationScenario& scenario) const {
  OutcomeSet out;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (nodes_[i].kind != NodeKind::kConsequence || !state.active[i]) continue;
    std::vector<NodeId> via{ids_[i]};
    std::size_t cur = i;
    for (;;) {
      const CausalNode& node = nodes_[cur];
      if (node.kind == NodeKind::kAction || node.kind == NodeKind::kBarrier)
        break;
      if (node.kind == NodeKind::kEvent &&
          scenario.ambient_events.contains(ids_[cur]))
        break;
      auto it = std::find_if(preds_[cur].begin(), preds_[cur].end(),
                             [&](std::size_t p) { return state.active[p]; });
      if (it == preds_[cur].end()) break;
      cur = *it;
      via.push_back(ids_[cur]);
    }
    std::reverse(via.begin(), via.end());
    out.push_back(make_outcome(nodes_[i], std::move(via)));
  }
  return out;  // ids_ is sorted, so `out` is too
}

OutcomeSet propagate(const ModelBundle& bundle,
                     const ActivationScenario& scenario) {
  for (const TaskId& t : scenario.performed_tasks) {
    if (!bundle.task_model.contains(t)) throw UnknownTask(t);
  }
  Propagator prop(bundle.causality);
  return prop.triggered(prop.run(scenario), scenario);
}

}  // namespace dilemma
