#pragma once

/// @file scoring.hpp
/// Ranking of candidate pairs against pedagogical and scenario constraints,
/// and extraction of the goal world state for the chosen pair.
///
/// The scores are products of bounded terms:
///
///   pedagogical = bounds * category * gap
///     bounds   = 1 if gmin <= min(g_a, g_b) and max(g_a, g_b) <= gmax
///     category = 1 if every required category shows up in the evidence
///     gap      = 1 - | |g_a - g_b| - gap_target | / gravity_scale
///   scenario    = availability * temporality
///     availability = geometric mean over contextual preconditions of
///                    min(1, count(mentioned class))
///     temporality  = 1 / (1 + L / tau), L = longest lead time on evidence
///   total = (w_p * pedagogical + w_s * scenario) / (w_p + w_s)
///
/// where g_a, g_b are the largest severities in each task's evidence.

#include <set>
#include <span>
#include <string>
#include <vector>

#include "dilemma/candidate.hpp"
#include "dilemma/knowledge.hpp"

namespace dilemma {

class InvalidInstruction : public Error {
 public:
  using Error::Error;
};

/// Goal extraction found conflicting preconditions. Only reachable for a
/// candidate that skipped the contextual compatibility filter.
class ConflictingGoal : public Error {
 public:
  using Error::Error;
};

struct ScoringConfig {
  double tau_seconds = 60.0;
  /// Severity span used to normalise the gravity gap.
  double gravity_scale = kMaxSeverity;
};

struct PedagogicalInstruction {
  DilemmaFilter dilemma_type = DilemmaFilter::kBoth;
  int gravity_min = 0;
  int gravity_max = kMaxSeverity;
  int gravity_gap_target = 0;
  std::set<Category> required_categories;
  double weight_pedagogical = 1.0;
  double weight_scenaristic = 1.0;

  /// Preset: criticality k maps to gravity bounds [k-1, k+1], clamped.
  static PedagogicalInstruction with_criticality(int k);

  /// Throws InvalidInstruction.
  void validate() const;
};

struct FitResult {
  double fit = 0.0;
  std::map<std::string, double> details;
};

FitResult pedagogical_fit(const DilemmaCandidate& c,
                          const PedagogicalInstruction& instr,
                          const ScoringConfig& config = {});

FitResult scenario_fit(const DilemmaCandidate& c, const TaskModel& tm,
                       const WorldModel& wm, const CausalityGraph& cg,
                       const ScoringConfig& config = {});

/// Annotates every candidate with a ScoreBreakdown and sorts: total
/// descending, raw availability descending, then (task_a, task_b, type).
/// Zero-score candidates stay at the tail.
std::vector<DilemmaCandidate> rank(std::vector<DilemmaCandidate> candidates,
                                   const PedagogicalInstruction& instr,
                                   const ModelBundle& bundle,
                                   const ScoringConfig& config = {});

struct GoalState {
  ConditionSet conditions;
  TaskId task_a;
  TaskId task_b;

  friend bool operator==(const GoalState&, const GoalState&) = default;
};

GoalState extract_goal_state(const DilemmaCandidate& c, const TaskModel& tm);

}  // namespace dilemma
