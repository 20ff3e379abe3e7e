#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bf/action_label.hpp"

namespace bf {

/// Summation value of a clustered summand. All summations in the models
/// range over threads (or pairs of threads); subset-valued parts of a
/// state are recovered from the state itself by the guard.
struct SumValue {
  int p = 0;
  int px = 0;
  auto operator<=>(const SumValue&) const = default;
};

/// One summand family of a clustered linear process equation: a finite
/// summation domain, a guard, and the label / next-state functions.
/// (state, value) fully determines label and successor.
template <class State>
struct Summand {
  std::string id;
  std::function<std::vector<SumValue>(const State&)> domain;
  std::function<bool(const State&, const SumValue&)> guard;
  std::function<ActionLabel(const State&, const SumValue&)> label;
  std::function<State(const State&, const SumValue&)> next;
};

template <class State>
struct Lpe {
  State initial;
  std::vector<Summand<State>> summands;
};

/// An enabled transition, with the summand instance that produced it so
/// that guards can be re-evaluated independently.
template <class State>
struct Step {
  ActionLabel label;
  State target;
  std::size_t summand = 0;
  SumValue value{};
};

/// Finite labeled transition system. `states` holds exactly the states
/// reachable from `initial` (index 0 for explored systems), in discovery
/// order.
template <class State>
struct Lts {
  std::vector<State> states;
  std::size_t initial = 0;
  struct Transition {
    std::size_t src;
    ActionLabel label;
    std::size_t dst;
  };
  std::vector<Transition> transitions;
};

struct StateLimitError : std::runtime_error {
  std::size_t limit;
  explicit StateLimitError(std::size_t n)
      : std::runtime_error("state limit exceeded: " + std::to_string(n)),
        limit(n) {}
};

/// All transitions enabled in state `d`, with duplicates collapsed under
/// label and target-state equality. Order is deterministic in summand
/// order, first occurrence wins.
template <class State>
std::vector<Step<State>> enabled(const Lpe<State>& lpe, const State& d) {
  std::vector<Step<State>> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < lpe.summands.size(); ++i) {
    const auto& sm = lpe.summands[i];
    for (const SumValue& e : sm.domain(d)) {
      if (!sm.guard(d, e)) continue;
      ActionLabel lab = sm.label(d, e);
      State nxt = sm.next(d, e);
      if (!seen.emplace(lab.key(), nxt.key()).second) continue;
      out.push_back(Step<State>{std::move(lab), std::move(nxt), i, e});
    }
  }
  return out;
}

/// Breadth-first reachability. Throws StateLimitError once more than
/// `state_limit` distinct states are found. The returned set of states
/// and transitions does not depend on summand order; state indices do.
template <class State>
Lts<State> explore(const Lpe<State>& lpe, std::size_t state_limit) {
  if (state_limit == 0) throw std::invalid_argument("state limit must be positive");
  Lts<State> lts;
  std::unordered_map<std::string, std::size_t> index;
  auto intern = [&](const State& s) {
    std::string k = s.key();
    auto it = index.find(k);
    if (it != index.end()) return it->second;
    if (lts.states.size() >= state_limit) throw StateLimitError(state_limit);
    std::size_t id = lts.states.size();
    lts.states.push_back(s);
    index.emplace(std::move(k), id);
    return id;
  };
  intern(lpe.initial);
  lts.initial = 0;
  for (std::size_t cur = 0; cur < lts.states.size(); ++cur) {
    State d = lts.states[cur];  // copy: the vector may grow below
    for (auto& st : enabled(lpe, d)) {
      std::size_t dst = intern(st.target);
      lts.transitions.push_back({cur, std::move(st.label), dst});
    }
  }
  return lts;
}

template <class State>
struct InvariantCounterexample {
  State state;
  std::optional<ActionLabel> label;   // empty: violated at the initial state
  std::optional<State> successor;
};

template <class State>
struct InvariantVerdict {
  bool holds = true;
  std::optional<InvariantCounterexample<State>> counterexample;
};

/// Checks that `pred` is inductive over the reachable transitions: the
/// initial state is evaluated first, then every transition from a state
/// satisfying `pred` must lead to a state satisfying `pred`. The first
/// violation in BFS order is reported.
template <class State, class Pred>
InvariantVerdict<State> check_invariant(const Lpe<State>& lpe, Pred&& pred,
                                        std::size_t state_limit) {
  if (!pred(lpe.initial)) {
    return {false, InvariantCounterexample<State>{lpe.initial, {}, {}}};
  }
  std::vector<State> states{lpe.initial};
  std::unordered_map<std::string, std::size_t> index{{lpe.initial.key(), 0}};
  for (std::size_t cur = 0; cur < states.size(); ++cur) {
    State d = states[cur];
    for (auto& st : enabled(lpe, d)) {
      if (!pred(st.target)) {
        return {false, InvariantCounterexample<State>{d, st.label, st.target}};
      }
      std::string k = st.target.key();
      if (index.emplace(std::move(k), states.size()).second) {
        if (states.size() >= state_limit) throw StateLimitError(state_limit);
        states.push_back(st.target);
      }
    }
  }
  return {};
}

}  // namespace bf
