#pragma once

/// @file causal_reasoner.hpp
/// Reachability and truth propagation over a causality graph.
///
/// Two views of the same graph live here. The path view answers "is there a
/// route from this barrier or action to a consequence that no other barrier
/// can cut?" and drives candidate selection. The propagation view computes
/// the least fixpoint of node truth values for a concrete scenario (which
/// tasks the learner performs, which context events hold) and is what the
/// verifier replays.

#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "dilemma/knowledge.hpp"

namespace dilemma {

struct ConsequenceOutcome {
  NodeId node;
  Category category = Category::kGravity;
  int severity = 0;
  /// One witnessing path, source first, `node` last.
  std::vector<NodeId> via;

  friend bool operator==(const ConsequenceOutcome&,
                         const ConsequenceOutcome&) = default;
};

/// Outcomes are kept sorted by consequence id, one per consequence.
using OutcomeSet = std::vector<ConsequenceOutcome>;

/// Merges `extra` into `into`, keeping the first witness per consequence.
void merge_outcomes(OutcomeSet& into, const OutcomeSet& extra);

struct ActivationScenario {
  std::set<TaskId> performed_tasks;
  std::set<NodeId> ambient_events;

  friend bool operator==(const ActivationScenario&,
                         const ActivationScenario&) = default;
};

/// Consequences reachable from `source` along a path with no BARRIER besides
/// `source` itself. Gates are ordinary path nodes here.
OutcomeSet unguarded_consequences(const CausalityGraph& cg,
                                  const NodeId& source);

struct NodeOutcomes {
  NodeId node;
  TaskId task;
  OutcomeSet outcomes;
};

std::vector<NodeOutcomes> negative_barriers(const CausalityGraph& cg);
std::vector<NodeOutcomes> negative_actions(const CausalityGraph& cg);

/// True iff an AND gate descends from both nodes and has an unguarded path
/// onward to a consequence.
bool common_and_descendant(const CausalityGraph& cg, const NodeId& n1,
                           const NodeId& n2);

/// Unguarded consequences of every AND gate common to both nodes.
OutcomeSet common_and_consequences(const CausalityGraph& cg, const NodeId& n1,
                                   const NodeId& n2);

/// Dense, index-based copy of a causality graph for repeated propagation.
class Propagator {
 public:
  explicit Propagator(const CausalityGraph& cg);

  struct State {
    /// Truth value per node, indexed like `Propagator::ids()`.
    std::vector<bool> active;
    /// Per node: BARRIER held by a performed task.
    std::vector<bool> held;
    /// Sweeps that changed at least one value.
    std::size_t iterations = 0;
  };

  /// Least fixpoint for `scenario`. `order` lists node indices in the sweep
  /// order to use; empty means topological order. Throws UnknownNode for
  /// ambient ids not in the graph.
  State run(const ActivationScenario& scenario,
            std::span<const std::size_t> order = {}) const;

  /// Triggered consequences of a computed state, with witness paths that
  /// start at an action, an ambient event or a transmitting barrier.
  OutcomeSet triggered(const State& state,
                       const ActivationScenario& scenario) const;

  std::size_t size() const { return ids_.size(); }
  const std::vector<NodeId>& ids() const { return ids_; }
  std::optional<std::size_t> index_of(const NodeId& id) const;
  const CausalNode& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<std::size_t>& predecessors(std::size_t i) const {
    return preds_[i];
  }
  const std::vector<std::size_t>& successors(std::size_t i) const {
    return succs_[i];
  }
  const std::vector<std::size_t>& topological_order() const { return topo_; }

  /// EVENT nodes with no incoming edge, sorted by id.
  std::vector<NodeId> root_events() const;

 private:
  bool evaluate(std::size_t i, const std::vector<bool>& active,
                const std::vector<bool>& held,
                const std::vector<bool>& ambient,
                const std::vector<bool>& performed_action) const;

  std::vector<NodeId> ids_;
  std::vector<CausalNode> nodes_;
  std::vector<std::vector<std::size_t>> preds_;
  std::vector<std::vector<std::size_t>> succs_;
  std::vector<std::size_t> topo_;
};

/// Consequences triggered by `scenario` (least fixpoint, sorted by id).
OutcomeSet propagate(const ModelBundle& bundle,
                     const ActivationScenario& scenario);

}  // namespace dilemma
