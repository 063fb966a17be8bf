/// @file generator.cpp

#include "dilemma/generator.hpp"

#include <algorithm>
#include <map>

#include "dilemma/verifier.hpp"

namespace dilemma {

namespace {

std::map<TaskId, OutcomeSet> group_by_task(
    const std::vector<NodeOutcomes>& results) {
  std::map<TaskId, OutcomeSet> grouped;
  for (const NodeOutcomes& r : results) {
    if (r.task.empty()) continue;
    merge_outcomes(grouped[r.task], r.outcomes);
  }
  return grouped;
}

void require_task(const TaskModel& tm, const TaskId& t) {
  if (!tm.contains(t)) {
    throw DanglingTaskRef("causality graph references unknown task " + t);
  }
}

}  // namespace

std::vector<TaskId> task_refs(const std::vector<NodeOutcomes>& results) {
  std::vector<TaskId> out;
  for (const auto& [task, outcomes] : group_by_task(results))
    out.push_back(task);
  return out;
}

std::vector<DilemmaCandidate> contradictory_pairs(
    const TaskModel& tm, const std::vector<NodeOutcomes>& barriers) {
  auto grouped = group_by_task(barriers);
  for (const auto& [task, outcomes] : grouped) require_task(tm, task);

  std::vector<DilemmaCandidate> out;
  for (auto i = grouped.begin(); i != grouped.end(); ++i) {
    for (auto j = std::next(i); j != grouped.end(); ++j) {
      if (!condition_set_conflict(tm.at(i->first).postconditions,
                                  tm.at(j->first).postconditions))
        continue;
      out.push_back(make_candidate(DilemmaType::kObligation, i->first,
                                   j->first, i->second, j->second));
    }
  }
  return out;
}

std::vector<DilemmaCandidate> prohibition_pairs(
    const ModelBundle& bundle, const std::vector<NodeOutcomes>& actions) {
  const CausalityGraph& cg = bundle.causality;
  auto grouped = group_by_task(actions);
  for (const auto& [task, outcomes] : grouped)
    require_task(bundle.task_model, task);

  std::map<TaskId, std::vector<NodeId>> barrier_nodes;
  for (const auto& [id, node] : cg.nodes) {
    if (node.kind == NodeKind::kBarrier && node.task_ref)
      barrier_nodes[*node.task_ref].push_back(id);
  }

  std::vector<DilemmaCandidate> out;
  for (auto i = grouped.begin(); i != grouped.end(); ++i) {
    auto bi = barrier_nodes.find(i->first);
    if (bi == barrier_nodes.end()) continue;
    for (auto j = std::next(i); j != grouped.end(); ++j) {
      auto bj = barrier_nodes.find(j->first);
      if (bj == barrier_nodes.end()) continue;
      OutcomeSet nonchoice;
      for (const NodeId& b1 : bi->second)
        for (const NodeId& b2 : bj->second)
          merge_outcomes(nonchoice, common_and_consequences(cg, b1, b2));
      if (nonchoice.empty()) continue;
      out.push_back(make_candidate(DilemmaType::kProhibition, i->first,
                                   j->first, i->second, j->second,
                                   std::move(nonchoice)));
    }
  }
  return out;
}

bool contextually_compatible(const TaskModel& tm, const DilemmaCandidate& c) {
  require_task(tm, c.task_a);
  require_task(tm, c.task_b);
  return !condition_set_conflict(tm.at(c.task_a).preconditions_contextual,
                                 tm.at(c.task_b).preconditions_contextual);
}

bool temporally_compatible(const TaskModel& tm, const DilemmaCandidate& c) {
  require_task(tm, c.task_a);
  require_task(tm, c.task_b);
  TaskId lca = lowest_common_ancestor(tm, c.task_a, c.task_b);
  // A task and one of its own subtasks are never independent.
  if (lca == c.task_a || lca == c.task_b) return false;
  Constructor k = tm.at(lca).constructor;
  return k == Constructor::kPar || k == Constructor::kInd;
}

PipelineTrace run_pipeline(const ModelBundle& bundle,
                           const PedagogicalInstruction& instr,
                           const ScoringConfig& config) {
  instr.validate();
  PipelineTrace trace;
  const TaskModel& tm = bundle.task_model;

  trace.barriers = negative_barriers(bundle.causality);
  trace.actions = negative_actions(bundle.causality);
  trace.obligation_pairs = contradictory_pairs(tm, trace.barriers);
  trace.prohibition_pairs = prohibition_pairs(bundle, trace.actions);

  auto consider = [&](const DilemmaCandidate& c) {
    if (!contextually_compatible(tm, c)) {
      trace.diagnostics.push_back(c.describe() +
                                  ": contextual preconditions conflict");
      return;
    }
    if (!temporally_compatible(tm, c)) {
      trace.diagnostics.push_back(c.describe() +
                                  ": not temporally independent");
      return;
    }
    VerificationReport report =
        c.type == DilemmaType::kObligation
            ? verify_obligation(bundle, c.task_a, c.task_b)
            : verify_prohibition(bundle, c.task_a, c.task_b);
    if (!report.holds()) {
      for (const VerificationCheck& check : report.checks) {
        if (check.passed) continue;
        trace.diagnostics.push_back(c.describe() +
                                    ": dropped by propagation, failed check: " + check.name);
      }
      return;
    }
    trace.filtered.push_back(c);
  };
  for (const auto& c : trace.obligation_pairs) consider(c);
  for (const auto& c : trace.prohibition_pairs) consider(c);

  std::sort(trace.filtered.begin(), trace.filtered.end(),
            [](const auto& a, const auto& b) { return a.key() < b.key(); });

  std::vector<DilemmaCandidate> wanted;
  for (const auto& c : trace.filtered) {
    if (admits(instr.dilemma_type, c.type)) {
      wanted.push_back(c);
    } else {
      trace.diagnostics.push_back(c.describe() + ": excluded by type filter " +
                                  std::string(to_string(instr.dilemma_type)));
    }
  }
  trace.ranked = rank(std::move(wanted), instr, bundle, config);
  return trace;
}

std::vector<DilemmaCandidate> generate(const ModelBundle& bundle,
                                       const PedagogicalInstruction& instr,
                                       const ScoringConfig& config) {
  return run_pipeline(bundle, instr, config).ranked;
}

}  // namespace dilemma
