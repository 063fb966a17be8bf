#pragma once

/// @file model_io.hpp
/// JSON documents for the three knowledge models, the result document, the
/// scoring constants file, and DOT export of causality graphs.
///
/// Every document carries `"format_version": 1`. Conditions are written as
/// three-element arrays `["subject", "predicate", object]` where the object is
/// a JSON boolean, a JSON number or a quoted identifier.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dilemma/candidate.hpp"
#include "dilemma/knowledge.hpp"
#include "dilemma/scoring.hpp"

namespace dilemma {

inline constexpr int kFormatVersion = 1;

TaskModel parse_task_model(std::string_view text);
CausalityGraph parse_causality_graph(std::string_view text);
WorldModel parse_world_model(std::string_view text);
ScoringConfig parse_scoring_config(std::string_view text);

std::string serialize_task_model(const TaskModel& tm);
std::string serialize_causality_graph(const CausalityGraph& cg);
std::string serialize_world_model(const WorldModel& wm);

/// Graphviz rendering; nodes sorted by id, edges by (from, to).
std::string export_dot(const CausalityGraph& cg);

struct ConsequenceSummary {
  NodeId node;
  Category category = Category::kGravity;
  int severity = 0;

  friend bool operator==(const ConsequenceSummary&,
                         const ConsequenceSummary&) = default;
};

struct ResultEntry {
  TaskId task_a;
  TaskId task_b;
  DilemmaType type = DilemmaType::kObligation;
  ScoreBreakdown score;
  std::vector<ConsequenceSummary> consequences;
  ConditionSet goal_state;

  friend bool operator==(const ResultEntry&, const ResultEntry&) = default;
};

struct ResultDocument {
  DilemmaFilter dilemma_type = DilemmaFilter::kBoth;
  std::vector<ResultEntry> candidates;
  /// Goal state of the top candidate; absent when there is none.
  std::optional<GoalState> goal;

  friend bool operator==(const ResultDocument&,
                         const ResultDocument&) = default;
};

/// Builds the result for ranked (scored) candidates.
ResultDocument make_result(const std::vector<DilemmaCandidate>& ranked,
                           const TaskModel& tm, DilemmaFilter filter);

std::string write_result(const ResultDocument& doc);
ResultDocument parse_result(std::string_view text);

/// Reads a whole file; throws Error if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

ModelBundle load_bundle(const std::filesystem::path& tasks,
                        const std::filesystem::path& causality,
                        const std::filesystem::path& world);

}  // namespace dilemma
