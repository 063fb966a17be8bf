#pragma once

/// @file generator.hpp
/// Candidate selection pipeline: negative barriers/actions, contradictory
/// and AND-joined pairs, instantiation filters, verification and ranking.

#include <string>
#include <vector>

#include "dilemma/candidate.hpp"
#include "dilemma/causal_reasoner.hpp"
#include "dilemma/knowledge.hpp"
#include "dilemma/scoring.hpp"

namespace dilemma {

/// Obligation pairs: distinct tasks referenced by the given barrier results
/// whose postconditions conflict. Evidence is the union of the outcomes of
/// all barrier nodes carrying the task.
std::vector<DilemmaCandidate> contradictory_pairs(
    const TaskModel& tm, const std::vector<NodeOutcomes>& barriers);

/// Prohibition pairs: distinct tasks of the given action results whose
/// BARRIER nodes share an AND gate leading to a consequence.
std::vector<DilemmaCandidate> prohibition_pairs(
    const ModelBundle& bundle, const std::vector<NodeOutcomes>& actions);

bool contextually_compatible(const TaskModel& tm, const DilemmaCandidate& c);
bool temporally_compatible(const TaskModel& tm, const DilemmaCandidate& c);

/// Every intermediate stage of one generation run.
struct PipelineTrace {
  std::vector<NodeOutcomes> barriers;
  std::vector<NodeOutcomes> actions;
  std::vector<DilemmaCandidate> obligation_pairs;
  std::vector<DilemmaCandidate> prohibition_pairs;
  /// Pairs passing both compatibility filters and the verifier, before the
  /// dilemma-type filter.
  std::vector<DilemmaCandidate> filtered;
  std::vector<DilemmaCandidate> ranked;
  /// Why pairs were dropped along the way.
  std::vector<std::string> diagnostics;
};

PipelineTrace run_pipeline(const ModelBundle& bundle,
                           const PedagogicalInstruction& instr,
                           const ScoringConfig& config = {});

/// Ranked candidates (the last stage of run_pipeline).
std::vector<DilemmaCandidate> generate(const ModelBundle& bundle,
                                       const PedagogicalInstruction& instr,
                                       const ScoringConfig& config = {});

/// Task refs of a stage-1 result, sorted and deduplicated.
std::vector<TaskId> task_refs(const std::vector<NodeOutcomes>& results);

}  // namespace dilemma
