#include "dilemma/candidate.hpp"

namespace dilemma {

std::string_view to_string(DilemmaType t) {
  return t == DilemmaType::kObligation ? "obligation" : "prohibition";
}

std::string_view to_string(DilemmaFilter f) {
  switch (f) {
    case DilemmaFilter::kObligation:
      return "obligation";
    case DilemmaFilter::kProhibition:
      return "prohibition";
    case DilemmaFilter::kBoth:
      return "both";
  }
  return "?";
}

std::optional<DilemmaType> dilemma_type_from_string(std::string_view s) {
  if (s == "obligation") return DilemmaType::kObligation;
  if (s == "prohibition") return DilemmaType::kProhibition;
  return std::nullopt;
}

std::optional<DilemmaFilter> dilemma_filter_from_string(std::string_view s) {
  if (s == "obligation") return DilemmaFilter::kObligation;
  if (s == "prohibition") return DilemmaFilter::kProhibition;
  if (s == "both") return DilemmaFilter::kBoth;
  return std::nullopt;
}

bool admits(DilemmaFilter f, DilemmaType t) {
  if (f == DilemmaFilter::kBoth) return true;
  return (f == DilemmaFilter::kObligation) == (t == DilemmaType::kObligation);
}

double ScoreBreakdown::raw_availability() const {
  auto it = details.find("raw_availability");
  return it == details.end() ? 0.0 : it->second;
}

std::string DilemmaCandidate::describe() const {
  return std::string(to_string(type)) + " {" + task_a + ", " + task_b + "}";
}

DilemmaCandidate make_candidate(DilemmaType type, TaskId t1, TaskId t2,
                                OutcomeSet evidence1, OutcomeSet evidence2,
                                OutcomeSet nonchoice) {
  if (t2 < t1) {
    std::swap(t1, t2);
    std::swap(evidence1, evidence2);
  }
  DilemmaCandidate c;
  c.type = type;
  c.task_a = std::move(t1);
  c.task_b = std::move(t2);
  c.evidence_a = std::move(evidence1);
  c.evidence_b = std::move(evidence2);
  c.nonchoice_evidence = std::move(nonchoice);
  return c;
}

}  // namespace dilemma
