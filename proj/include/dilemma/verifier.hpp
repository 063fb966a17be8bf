#pragma once

/// @file verifier.hpp
/// Brute-force checker for the obligation and prohibition conditions.
///
/// The verifier does not look at selection paths. It replays concrete
/// scenarios through Propagator and asks whether a consequence is actually
/// triggered *because of* the task under test: a consequence counts for a
/// source only when a chain of active nodes leads to it from that source
/// without crossing any other barrier. Scenarios are built as
///
///   obligation, omit t:   every task except t performed
///   prohibition, do t:    every task except the other one performed
///   prohibition, neither: every task except both performed
///
/// with ambient context drawn from the subsets of root EVENT nodes.

#include <optional>
#include <string>
#include <vector>

#include "dilemma/candidate.hpp"
#include "dilemma/causal_reasoner.hpp"
#include "dilemma/knowledge.hpp"

namespace dilemma {

class ModelTooLarge : public Error {
 public:
  using Error::Error;
};

/// Pair verification needs two distinct tasks.
class InvalidPair : public Error {
 public:
  using Error::Error;
};

/// Largest number of root events whose subsets are enumerated (2^16
/// scenarios).
inline constexpr std::size_t kMaxAmbientRoots = 16;

struct VerificationCheck {
  std::string name;
  bool passed = false;
  std::optional<ActivationScenario> scenario;
  std::optional<ConsequenceOutcome> outcome;
};

struct VerificationReport {
  TaskId task_a;
  TaskId task_b;
  DilemmaType claimed_type = DilemmaType::kObligation;
  std::vector<VerificationCheck> checks;
  /// Every consequence witnessed per side, for building candidates.
  OutcomeSet evidence_a;
  OutcomeSet evidence_b;
  OutcomeSet nonchoice_evidence;

  bool holds() const;
};

VerificationReport verify_obligation(const ModelBundle& bundle,
                                     const TaskId& t1, const TaskId& t2);
VerificationReport verify_prohibition(const ModelBundle& bundle,
                                      const TaskId& t1, const TaskId& t2);

/// Every unordered task pair passing a verifier and both compatibility
/// filters, sorted by (type, task_a, task_b).
std::vector<DilemmaCandidate> enumerate_dilemmas(const ModelBundle& bundle);

}  // namespace dilemma
