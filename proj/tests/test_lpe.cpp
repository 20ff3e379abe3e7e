#include <algorithm>
#include <random>
#include <set>
#include <tuple>

#include <doctest.h>

#include "bf/lpe.hpp"
#include "bf/models.hpp"
#include "oracle_explore.hpp"

using namespace bf;

namespace {

struct ToyState {
  int v = 0;
  bool operator==(const ToyState&) const = default;
  std::string key() const { return std::to_string(v); }
};

Lpe<ToyState> toy_counter(int bound, bool enabled_at_all) {
  Lpe<ToyState> lpe;
  lpe.initial = {0};
  Summand<ToyState> s;
  s.id = "tick";
  s.domain = [](const ToyState&) { return std::vector<SumValue>{{1, 0}}; };
  s.guard = [bound, enabled_at_all](const ToyState& d, const SumValue&) {
    return enabled_at_all && d.v < bound;
  };
  s.label = [](const ToyState&, const SumValue&) { return ActionLabel::visible("tick", 1); };
  s.next = [](const ToyState& d, const SumValue&) { return ToyState{d.v + 1}; };
  lpe.summands.push_back(std::move(s));
  return lpe;
}

template <class State>
auto canonical(const Lts<State>& lts) {
  std::set<std::string> states;
  for (const auto& s : lts.states) states.insert(s.key());
  std::multiset<std::tuple<std::string, std::string, std::string>> trans;
  for (const auto& t : lts.transitions)
    trans.insert({lts.states[t.src].key(), t.label.key(), lts.states[t.dst].key()});
  return std::make_pair(states, trans);
}

}  // namespace

TEST_CASE("enabled on the initial implementation state, one thread") {
  auto lpe = impl_lpe(1);
  auto steps = enabled(lpe, lpe.initial);
  REQUIRE(steps.size() == 2);
  std::set<std::string> labels;
  for (const auto& st : steps) labels.insert(st.label.str());
  CHECK(labels == std::set<std::string>{"enter_shared_call(p1)", "enter_exclusive_call(p1)"});
  for (const auto& st : steps) {
    if (st.label.name == "enter_shared_call")
      CHECK(st.target.sub[0] == Substate::simple(Substate::Tag::ES2));
    else
      CHECK(st.target.sub[0] == Substate::simple(Substate::Tag::EE));
    CHECK(st.target.busy == 0);
    CHECK(st.target.mtx == false);
  }
}

TEST_CASE("enabled is empty when all guards are false") {
  auto lpe = toy_counter(5, false);
  CHECK(enabled(lpe, lpe.initial).empty());
}

TEST_CASE("enabled includes the improbable self-loop next to a writer") {
  auto lpe = spec_lpe(2);
  SpecState st;
  st.s = {Node::ES, Node::Exclusive};
  bool found = false;
  for (const auto& step : enabled(lpe, st))
    if (step.label.is_internal() && step.label.name == "improbable" && step.target == st)
      found = true;
  CHECK(found);
}

TEST_CASE("enabled is pure") {
  auto lpe = impl_lpe(2);
  auto lts = explore(lpe, 100000);
  for (std::size_t i = 0; i < lts.states.size(); i += 7) {
    auto a = enabled(lpe, lts.states[i]);
    auto b = enabled(lpe, lts.states[i]);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k].label == b[k].label);
      CHECK(a[k].target == b[k].target);
    }
  }
}

TEST_CASE("explore finds the eleven specification states for one thread") {
  auto lts = explore(spec_lpe(1), 1000000);
  CHECK(lts.states.size() == 11);
  CHECK(lts.initial == 0);
}

TEST_CASE("explore matches the independent enumerator") {
  for (int n : {1, 2}) {
    auto lts = explore(impl_lpe(n), 1000000);
    auto counts = oracle::oracle_enumerate(n);
    CHECK(lts.states.size() == counts.states);
    CHECK(lts.transitions.size() == counts.transitions);
  }
  // one thread: hand enumeration gives 16 reachable states
  CHECK(explore(impl_lpe(1), 1000000).states.size() == 16);
}

TEST_CASE("explore reports overflow when the limit is hit") {
  CHECK_THROWS_AS(explore(impl_lpe(1), 1), StateLimitError);
  CHECK_THROWS_AS(explore(toy_counter(5, true), 3), StateLimitError);
  CHECK(explore(toy_counter(5, true), 6).states.size() == 6);
  CHECK_THROWS_AS(explore(toy_counter(5, true), 0), std::invalid_argument);
}

TEST_CASE("exploration result does not depend on summand order") {
  auto reference = canonical(explore(impl_lpe(2), 100000));
  std::mt19937 rng(7);
  for (int round = 0; round < 3; ++round) {
    auto lpe = impl_lpe(2);
    std::shuffle(lpe.summands.begin(), lpe.summands.end(), rng);
    CHECK(canonical(explore(lpe, 100000)) == reference);
  }
}

TEST_CASE("transitions connect only reachable states") {
  auto lts = explore(impl_lpe(2), 100000);
  for (const auto& t : lts.transitions) {
    CHECK(t.src < lts.states.size());
    CHECK(t.dst < lts.states.size());
  }
}

TEST_CASE("fuzz: every enabled step re-satisfies its summand guard") {
  auto lpe = impl_lpe(2);
  auto lts = explore(lpe, 100000);
  std::mt19937 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, lts.states.size() - 1);
  for (int i = 0; i < 200; ++i) {
    const ImplState& d = lts.states[pick(rng)];
    for (const auto& st : enabled(lpe, d)) {
      const auto& sm = lpe.summands[st.summand];
      REQUIRE(sm.guard(d, st.value));
      CHECK(sm.label(d, st.value) == st.label);
      CHECK(sm.next(d, st.value) == st.target);
    }
  }
}

TEST_CASE("check_invariant accepts a vacuous invariant") {
  auto verdict = check_invariant(impl_lpe(2), [](const ImplState&) { return true; }, 100000);
  CHECK(verdict.holds);
}

TEST_CASE("check_invariant reports the initial state first") {
  auto verdict = check_invariant(impl_lpe(1), [](const ImplState& d) { return d.mtx; }, 1000);
  REQUIRE(!verdict.holds);
  CHECK(!verdict.counterexample->label.has_value());
  CHECK(verdict.counterexample->state == impl_lpe(1).initial);
}

TEST_CASE("check_invariant finds the broken busy store") {
  auto verdict =
      check_invariant(mutate_impl(2, "skip-busy-store"), invariant_pred(InvariantKind::Busy),
                      1000000);
  REQUIRE(!verdict.holds);
  REQUIRE(verdict.counterexample->label.has_value());
  // first failure on the enter_shared path: the store that should set busy
  CHECK(verdict.counterexample->label->name.find("store(Busy") == 0);
  CHECK(busy_invariant(verdict.counterexample->state));
  CHECK(!busy_invariant(*verdict.counterexample->successor));
}

TEST_CASE("check_invariant holds for the three invariants at two threads") {
  for (auto kind : {InvariantKind::Mutex, InvariantKind::Busy, InvariantKind::Forbidden})
    CHECK(check_invariant(impl_lpe(2), invariant_pred(kind), 1000000).holds);
}
