#pragma once

/// @file candidate.hpp
/// Dilemma candidates and their score breakdown.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>

#include "dilemma/causal_reasoner.hpp"

namespace dilemma {

enum class DilemmaType : std::uint8_t { kObligation, kProhibition };

/// Which dilemma families an instruction asks for.
enum class DilemmaFilter : std::uint8_t { kObligation, kProhibition, kBoth };

std::string_view to_string(DilemmaType t);
std::string_view to_string(DilemmaFilter f);
std::optional<DilemmaType> dilemma_type_from_string(std::string_view s);
std::optional<DilemmaFilter> dilemma_filter_from_string(std::string_view s);
bool admits(DilemmaFilter f, DilemmaType t);

struct ScoreBreakdown {
  double pedagogical_fit = 0.0;
  double scenario_fit = 0.0;
  double total = 0.0;
  /// bounds_term, gap_term, category_term, availability_term,
  /// temporality_term, raw_availability.
  std::map<std::string, double> details;

  double raw_availability() const;
  bool zero() const { return total == 0.0; }

  friend bool operator==(const ScoreBreakdown&,
                         const ScoreBreakdown&) = default;
};

struct DilemmaCandidate {
  DilemmaType type = DilemmaType::kObligation;
  /// Unordered pair stored with task_a < task_b.
  TaskId task_a;
  TaskId task_b;
  /// Obligation: consequences of omitting the task. Prohibition: of doing it.
  OutcomeSet evidence_a;
  OutcomeSet evidence_b;
  /// Prohibition only: consequences of doing neither task.
  OutcomeSet nonchoice_evidence;
  std::optional<ScoreBreakdown> score;

  auto key() const { return std::tie(type, task_a, task_b); }
  std::string describe() const;
};

/// Builds a candidate with the pair in canonical order, swapping the
/// evidence sets along with the tasks.
DilemmaCandidate make_candidate(DilemmaType type, TaskId t1, TaskId t2,
                                OutcomeSet evidence1, OutcomeSet evidence2,
                                OutcomeSet nonchoice = {});

}  // namespace dilemma
