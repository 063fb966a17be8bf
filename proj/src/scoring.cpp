/// @file scoring.cpp

#include "dilemma/scoring.hpp"

#include <algorithm>
#include <cmath>

namespace dilemma {

// ---------------------------------------------------------------------------
// Instruction
// ---------------------------------------------------------------------------

PedagogicalInstruction PedagogicalInstruction::with_criticality(int k) {
  if (k < 0 || k > kMaxSeverity) {
    throw InvalidInstruction("criticality must be within 0.." +
                             std::to_string(kMaxSeverity));
  }
  PedagogicalInstruction instr;
  instr.gravity_min = std::max(0, k - 1);
  instr.gravity_max = std::min(kMaxSeverity, k + 1);
  return instr;
}

void PedagogicalInstruction::validate() const {
  auto in_scale = [](int g) { return g >= 0 && g <= kMaxSeverity; };
  if (!in_scale(gravity_min) || !in_scale(gravity_max)) {
    throw InvalidInstruction("gravity bounds must be within 0.." +
                             std::to_string(kMaxSeverity));
  }
  if (gravity_min > gravity_max) {
    throw InvalidInstruction("gravity_min exceeds gravity_max");
  }
  if (gravity_gap_target < 0) {
    throw InvalidInstruction("gravity gap target must be non-negative");
  }
  auto unit = [](double w) { return w >= 0.0 && w <= 1.0; };
  if (!unit(weight_pedagogical) || !unit(weight_scenaristic)) {
    throw InvalidInstruction("weights must be within [0, 1]");
  }
  if (weight_pedagogical == 0.0 && weight_scenaristic == 0.0) {
    throw InvalidInstruction("weights must not both be zero");
  }
}

// ---------------------------------------------------------------------------
// Fits
// ---------------------------------------------------------------------------

namespace {

int max_severity(const OutcomeSet& outcomes) {
  int g = 0;
  for (const auto& o : outcomes) g = std::max(g, o.severity);
  return g;
}

}  // namespace

FitResult pedagogical_fit(const DilemmaCandidate& c,
                          const PedagogicalInstruction& instr,
                          const ScoringConfig& config) {
  const int ga = max_severity(c.evidence_a);
  const int gb = max_severity(c.evidence_b);

  const double bounds =
      (instr.gravity_min <= std::min(ga, gb) &&
       std::max(ga, gb) <= instr.gravity_max)
          ? 1.0
          : 0.0;

  const double deviation =
      std::abs(std::abs(ga - gb) - instr.gravity_gap_target);
  const double gap = std::clamp(1.0 - deviation / config.gravity_scale, 0.0, 1.0);

  std::set<Category> present;
  for (const auto* set : {&c.evidence_a, &c.evidence_b, &c.nonchoice_evidence})
    for (const auto& o : *set) present.insert(o.category);
  const double category =
      std::includes(present.begin(), present.end(),
                    instr.required_categories.begin(),
                    instr.required_categories.end())
          ? 1.0
          : 0.0;

  FitResult r;
  r.fit = bounds * category * gap;
  r.details = {{"bounds_term", bounds},
               {"gap_term", gap},
               {"category_term", category}};
  return r;
}

FitResult scenario_fit(const DilemmaCandidate& c, const TaskModel& tm,
                       const WorldModel& wm, const CausalityGraph& cg,
                       const ScoringConfig& config) {
  ConditionSet preconditions = tm.at(c.task_a).preconditions_contextual;
  const auto& more = tm.at(c.task_b).preconditions_contextual;
  preconditions.insert(more.begin(), more.end());

  double log_sum = 0.0;
  bool starved = false;
  double raw = 0.0;
  for (const Condition& cond : preconditions) {
    std::optional<std::int64_t> count;
    auto mention = [&](const std::string& term) {
      if (auto cls = wm.class_of(term)) {
        std::int64_t n = wm.count(*cls);
        count = count ? std::min(*count, n) : n;
      }
    };
    mention(cond.subject);
    if (cond.object.kind() == Literal::Kind::kIdentifier)
      mention(cond.object.as_identifier());
    if (!count) continue;  // neutral condition contributes 1
    raw += static_cast<double>(*count);
    double factor = std::min(1.0, static_cast<double>(*count) / 1.0);
    if (factor <= 0.0) {
      starved = true;
    } else {
      log_sum += std::log(factor);
    }
  }
  double availability = 1.0;
  if (starved) {
    availability = 0.0;
  } else if (!preconditions.empty()) {
    availability =
        std::exp(log_sum / static_cast<double>(preconditions.size()));
  }

  double lead = 0.0;
  for (const auto* set : {&c.evidence_a, &c.evidence_b, &c.nonchoice_evidence})
    for (const auto& o : *set)
      for (const NodeId& id : o.via) {
        auto it = cg.nodes.find(id);
        if (it != cg.nodes.end() && it->second.lead_time)
          lead = std::max(lead, *it->second.lead_time);
      }
  const double temporality = 1.0 / (1.0 + lead / config.tau_seconds);

  FitResult r;
  r.fit = availability * temporality;
  r.details = {{"availability_term", availability},
               {"temporality_term", temporality},
               {"raw_availability", raw}};
  return r;
}

// ---------------------------------------------------------------------------
// Ranking
// ---------------------------------------------------------------------------

namespace {

// Totals are compared after rounding so that rescaling both weights cannot
// reorder candidates through last-bit differences.
long long comparable(double v) { return std::llround(v * 1e12); }

}  // namespace

std::vector<DilemmaCandidate> rank(std::vector<DilemmaCandidate> candidates,
                                   const PedagogicalInstruction& instr,
                                   const ModelBundle& bundle,
                                   const ScoringConfig& config) {
  instr.validate();
  const double wp = instr.weight_pedagogical;
  const double ws = instr.weight_scenaristic;
  for (DilemmaCandidate& c : candidates) {
    FitResult ped = pedagogical_fit(c, instr, config);
    FitResult scen = scenario_fit(c, bundle.task_model, bundle.world,
                                  bundle.causality, config);
    ScoreBreakdown s;
    s.pedagogical_fit = ped.fit;
    s.scenario_fit = scen.fit;
    s.total = (wp * ped.fit + ws * scen.fit) / (wp + ws);
    s.details = ped.details;
    s.details.insert(scen.details.begin(), scen.details.end());
    c.score = std::move(s);
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const DilemmaCandidate& a, const DilemmaCandidate& b) {
              const ScoreBreakdown& sa = a.score.value();
              const ScoreBreakdown& sb = b.score.value();
              auto ta = comparable(sa.total);
              auto tb = comparable(sb.total);
              if (ta != tb) return ta > tb;
              double ra = sa.raw_availability();
              double rb = sb.raw_availability();
              if (ra != rb) return ra > rb;
              return std::tie(a.task_a, a.task_b, a.type) <
                     std::tie(b.task_a, b.task_b, b.type);
            });
  return candidates;
}

GoalState extract_goal_state(const DilemmaCandidate& c, const TaskModel& tm) {
  GoalState goal;
  goal.task_a = c.task_a;
  goal.task_b = c.task_b;
  goal.conditions = tm.at(c.task_a).preconditions_contextual;
  const auto& more = tm.at(c.task_b).preconditions_contextual;
  goal.conditions.insert(more.begin(), more.end());
  if (condition_set_conflict(goal.conditions, goal.conditions)) {
    throw ConflictingGoal("goal state for " + c.describe() +
                          " contains conflicting conditions");
  }
  return goal;
}

}  // namespace dilemma
