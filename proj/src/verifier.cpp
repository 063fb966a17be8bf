/// @file verifier.cpp

#include "dilemma/verifier.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>

#include "dilemma/generator.hpp"

namespace dilemma {

bool VerificationReport::holds() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(),
                     [](const VerificationCheck& c) { return c.passed; });
}

namespace {

using Index = std::size_t;
using State = Propagator::State;

class Checker {
 public:
  explicit Checker(const ModelBundle& bundle)
      : bundle_(bundle), prop_(bundle.causality) {
    roots_ = prop_.root_events();
    if (roots_.size() > kMaxAmbientRoots) {
      throw ModelTooLarge("causality graph has " +
                          std::to_string(roots_.size()) +
                          " root events; ambient enumeration is capped at " +
                          std::to_string(kMaxAmbientRoots));
    }
    masks_.resize(std::size_t{1} << roots_.size());
    for (std::size_t m = 0; m < masks_.size(); ++m) masks_[m] = m;
    std::stable_sort(masks_.begin(), masks_.end(), [](auto a, auto b) {
      return std::popcount(a) < std::popcount(b);
    });
    for (const auto& [id, node] : bundle.task_model.nodes) tasks_.insert(id);
    for (Index i = 0; i < prop_.size(); ++i) {
      const CausalNode& n = prop_.node(i);
      if (!n.task_ref) continue;
      if (n.kind == NodeKind::kBarrier) barriers_[*n.task_ref].push_back(i);
      if (n.kind == NodeKind::kAction) actions_[*n.task_ref].push_back(i);
    }
  }

  const TaskModel& tasks() const { return bundle_.task_model; }

  // Omitting `task` with everything else performed.
  VerificationCheck omission(const TaskId& task, OutcomeSet* evidence) {
    auto cached = omission_cache_.find(task);
    if (cached == omission_cache_.end()) {
      ActivationScenario base{without({task}), {}};
      Sources src{lookup(barriers_, task), {}, false};
      cached = omission_cache_.emplace(task, search(base, src)).first;
    }
    VerificationCheck check = cached->second.check;
    check.name = "omitting " + task + " leads to a negative consequence";
    *evidence = cached->second.evidence;
    return check;
  }

  // Performing `task` while the alternative `other` is left undone.
  VerificationCheck performance(const TaskId& task, const TaskId& other,
                                OutcomeSet* evidence) {
    ActivationScenario base{without({other}), {}};
    Sources src{lookup(actions_, task), {}, false};
    Found f = search(base, src);
    f.check.name = "performing " + task + " leads to a negative consequence";
    *evidence = std::move(f.evidence);
    return f.check;
  }

  // Performing neither task.
  VerificationCheck nonchoice(const TaskId& t1, const TaskId& t2,
                              OutcomeSet* evidence) {
    ActivationScenario base{without({t1, t2}), {}};
    Sources src{lookup(barriers_, t1), lookup(barriers_, t2), true};
    Found f = search(base, src);
    f.check.name = "performing neither " + t1 + " nor " + t2 +
                   " leads to a negative consequence";
    *evidence = std::move(f.evidence);
    return f.check;
  }

 private:
  // Single: a consequence is attributed to `first`. Joint: it must hang
  // below an AND gate fed by both sets, so an empty side never matches.
  struct Sources {
    std::vector<Index> first;
    std::vector<Index> second;
    bool joint = false;
  };

  struct Found {
    VerificationCheck check;
    OutcomeSet evidence;
  };

  static std::vector<Index> lookup(
      const std::map<TaskId, std::vector<Index>>& m, const TaskId& t) {
    auto it = m.find(t);
    return it == m.end() ? std::vector<Index>{} : it->second;
  }

  std::set<TaskId> without(std::initializer_list<TaskId> excluded) const {
    std::set<TaskId> out = tasks_;
    for (const TaskId& t : excluded) out.erase(t);
    return out;
  }

  // Active nodes reachable from active `sources` through active nodes. With
  // `barrier_free`, no BARRIER outside `sources` is entered.
  std::map<Index, Index> chase(const State& s, const std::vector<Index>& sources,
                               bool barrier_free) const {
    std::map<Index, Index> parent;
    std::deque<Index> queue;
    for (Index src : sources) {
      if (s.active[src] && parent.emplace(src, src).second)
        queue.push_back(src);
    }
    while (!queue.empty()) {
      Index cur = queue.front();
      queue.pop_front();
      for (Index next : prop_.successors(cur)) {
        if (!s.active[next]) continue;
        if (barrier_free && prop_.node(next).kind == NodeKind::kBarrier)
          continue;
        if (parent.emplace(next, cur).second) queue.push_back(next);
      }
    }
    return parent;
  }

  std::vector<NodeId> path_to(const std::map<Index, Index>& parent,
                              Index end) const {
    std::vector<NodeId> via;
    for (Index cur = end;;) {
      via.push_back(prop_.ids()[cur]);
      Index up = parent.at(cur);
      if (up == cur) break;
      cur = up;
    }
    std::reverse(via.begin(), via.end());
    return via;
  }

  ConsequenceOutcome outcome(Index i, std::vector<NodeId> via) const {
    const CausalNode& n = prop_.node(i);
    return {n.id, n.category.value_or(Category::kGravity),
            n.severity.value_or(0), std::move(via)};
  }

  OutcomeSet attribute(const State& s, const Sources& src) const {
    OutcomeSet out;
    if (!src.joint) {
      auto parent = chase(s, src.first, /*barrier_free=*/true);
      for (const auto& [i, p] : parent) {
        if (prop_.node(i).kind == NodeKind::kConsequence)
          out.push_back(outcome(i, path_to(parent, i)));
      }
    } else {
      auto from_first = chase(s, src.first, false);
      auto from_second = chase(s, src.second, false);
      for (const auto& [g, p] : from_first) {
        const CausalNode& n = prop_.node(g);
        if (n.kind != NodeKind::kGate || n.gate_type != GateType::kAnd ||
            !from_second.contains(g))
          continue;
        std::vector<NodeId> lead = path_to(from_first, g);
        auto onward = chase(s, {g}, true);
        for (const auto& [i, q] : onward) {
          if (prop_.node(i).kind != NodeKind::kConsequence) continue;
          std::vector<NodeId> via = lead;
          std::vector<NodeId> tail = path_to(onward, i);
          via.insert(via.end(), tail.begin() + 1, tail.end());
          merge_outcomes(out, {outcome(i, std::move(via))});
        }
      }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.node < b.node; });
    return out;
  }

  ActivationScenario with_ambient(const ActivationScenario& base,
                                  std::size_t mask) const {
    ActivationScenario s = base;
    for (std::size_t k = 0; k < roots_.size(); ++k) {
      if (mask & (std::size_t{1} << k)) s.ambient_events.insert(roots_[k]);
    }
    return s;
  }

  // Truth only grows with ambient context, so the full root set decides the
  // verdict; the ordered sweep then finds the smallest witnessing context.
  Found search(const ActivationScenario& base, const Sources& src) const {
    Found f;
    const std::size_t full = masks_.size() - 1;
    ActivationScenario widest = with_ambient(base, full);
    f.evidence = attribute(prop_.run(widest), src);
    if (f.evidence.empty()) return f;
    for (std::size_t mask : masks_) {
      ActivationScenario s = with_ambient(base, mask);
      OutcomeSet hits = attribute(prop_.run(s), src);
      if (hits.empty()) continue;
      f.check.passed = true;
      f.check.scenario = std::move(s);
      f.check.outcome = hits.front();
      return f;
    }
    return f;  // unreachable while propagation stays monotone
  }

  const ModelBundle& bundle_;
  Propagator prop_;
  std::vector<NodeId> roots_;
  std::vector<std::size_t> masks_;
  std::set<TaskId> tasks_;
  std::map<TaskId, std::vector<Index>> barriers_;
  std::map<TaskId, std::vector<Index>> actions_;
  std::map<TaskId, Found> omission_cache_;
};

void check_pair(const TaskModel& tm, const TaskId& t1, const TaskId& t2) {
  if (!tm.contains(t1)) throw UnknownTask(t1);
  if (!tm.contains(t2)) throw UnknownTask(t2);
  if (t1 == t2) throw InvalidPair("a dilemma needs two distinct tasks");
}

VerificationReport obligation(Checker& checker, TaskId t1, TaskId t2) {
  if (t2 < t1) std::swap(t1, t2);
  VerificationReport r;
  r.task_a = t1;
  r.task_b = t2;
  r.claimed_type = DilemmaType::kObligation;
  r.checks.push_back(checker.omission(t1, &r.evidence_a));
  r.checks.push_back(checker.omission(t2, &r.evidence_b));
  VerificationCheck exclusive;
  exclusive.name = "postconditions of " + t1 + " and " + t2 + " conflict";
  exclusive.passed = condition_set_conflict(
      checker.tasks().at(t1).postconditions,
      checker.tasks().at(t2).postconditions);
  r.checks.push_back(std::move(exclusive));
  return r;
}

VerificationReport prohibition(Checker& checker, TaskId t1, TaskId t2) {
  if (t2 < t1) std::swap(t1, t2);
  VerificationReport r;
  r.task_a = t1;
  r.task_b = t2;
  r.claimed_type = DilemmaType::kProhibition;
  r.checks.push_back(checker.performance(t1, t2, &r.evidence_a));
  r.checks.push_back(checker.performance(t2, t1, &r.evidence_b));
  r.checks.push_back(checker.nonchoice(t1, t2, &r.nonchoice_evidence));
  return r;
}

DilemmaCandidate to_candidate(const VerificationReport& r) {
  return make_candidate(r.claimed_type, r.task_a, r.task_b, r.evidence_a,
                        r.evidence_b, r.nonchoice_evidence);
}

}  // namespace

VerificationReport verify_obligation(const ModelBundle& bundle,
                                     const TaskId& t1, const TaskId& t2) {
  check_pair(bundle.task_model, t1, t2);
  Checker checker(bundle);
  return obligation(checker, t1, t2);
}

VerificationReport verify_prohibition(const ModelBundle& bundle,
                                      const TaskId& t1, const TaskId& t2) {
  check_pair(bundle.task_model, t1, t2);
  Checker checker(bundle);
  return prohibition(checker, t1, t2);
}

std::vector<DilemmaCandidate> enumerate_dilemmas(const ModelBundle& bundle) {
  const TaskModel& tm = bundle.task_model;
  if (tm.nodes.size() < 2) return {};
  Checker checker(bundle);
  std::vector<DilemmaCandidate> out;
  for (auto i = tm.nodes.begin(); i != tm.nodes.end(); ++i) {
    for (auto j = std::next(i); j != tm.nodes.end(); ++j) {
      DilemmaCandidate probe =
          make_candidate(DilemmaType::kObligation, i->first, j->first, {}, {});
      if (!contextually_compatible(tm, probe) ||
          !temporally_compatible(tm, probe))
        continue;
      VerificationReport ob = obligation(checker, i->first, j->first);
      if (ob.holds()) out.push_back(to_candidate(ob));
      VerificationReport pr = prohibition(checker, i->first, j->first);
      if (pr.holds()) out.push_back(to_candidate(pr));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.key() < b.key(); });
  return out;
}

}  // namespace dilemma
