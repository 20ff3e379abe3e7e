#include <set>

#include <doctest.h>

#include "bf/conesfoci.hpp"
#include "bf/models.hpp"

using namespace bf;
using Tag = Substate::Tag;

namespace {

// Follows one enabled step by summand id and thread, failing the test if
// it is not enabled.
ImplState step_by(const Lpe<ImplState>& lpe, const ImplState& d, const char* id, int p) {
  for (const auto& st : enabled(lpe, d))
    if (lpe.summands[st.summand].id == id && st.value.p == p) return st.target;
  FAIL("step not enabled: ", id);
  return d;
}

}  // namespace

TEST_CASE("thread count validation") {
  CHECK_THROWS_AS(impl_lpe(0), std::invalid_argument);
  CHECK_THROWS_AS(spec_lpe(0), std::invalid_argument);
  CHECK_THROWS_AS(impl_lpe(-3), std::invalid_argument);
}

TEST_CASE("lock acquisition reaches SAF with the mutex held") {
  auto lpe = impl_lpe(1);
  ImplState d = step_by(lpe, lpe.initial, "enter_exclusive_call", 1);
  CHECK(d.sub[0].tag == Tag::EE);
  d = step_by(lpe, d, "ee_lock", 1);
  CHECK(d.sub[0] == Substate::saf(0));
  CHECK(d.mtx);
}

TEST_CASE("storing a forbidden flag in SAF records the stored thread") {
  auto lpe = impl_lpe(2);
  ImplState d = lpe.initial;
  d.sub[0] = Substate::saf(0);
  d.mtx = true;
  bool found = false;
  for (const auto& st : enabled(lpe, d)) {
    if (st.label.is_internal() && st.label.name == "store(Forbidden(p2), true, p1)") {
      found = true;
      CHECK(st.target.sub[0] == Substate::saf_store(2, 0));
      CHECK(mask_has(st.target.forbidden, 2));
      CHECK(!mask_has(st.target.forbidden, 1));
    }
  }
  CHECK(found);
}

TEST_CASE("specification guards follow the external behavior graph") {
  auto lpe = spec_lpe(2);
  SpecState blocked{{Node::ES, Node::LOS}};
  for (const auto& st : enabled(lpe, blocked))
    CHECK(st.label.name != "tau_es_loe");
  SpecState open{{Node::ES, Node::Free}};
  std::set<std::string> labels;
  for (const auto& st : enabled(lpe, open)) labels.insert(st.label.str());
  CHECK(labels.count("tau_es_loe(p1)") == 1);
  CHECK(labels.count("improbable") == 0);
}

TEST_CASE("the SAF self-loop is enabled unconditionally") {
  auto lpe = spec_lpe(2);
  SpecState st{{Node::SAF, Node::Free}};
  bool found = false;
  for (const auto& step : enabled(lpe, st))
    if (step.label.is_internal() && step.target == st) found = true;
  CHECK(found);
}

TEST_CASE("invariant predicates hold at the initial state") {
  auto d = impl_lpe(3).initial;
  CHECK(invariant_pred(InvariantKind::Mutex)(d));
  CHECK(invariant_pred(InvariantKind::Busy)(d));
  CHECK(invariant_pred(InvariantKind::Forbidden)(d));
}

TEST_CASE("the mutex predicate rejects a stuck mutex bit") {
  ImplState d = impl_lpe(2).initial;
  d.mtx = true;  // nobody in the fenced set
  CHECK(!mutex_invariant(d));
}

TEST_CASE("derive_flags matches the invariant sets") {
  SUBCASE("all free") {
    std::vector<Substate> sub(3, Substate::simple(Tag::Free));
    CHECK(derive_flags(sub) == Flags{});
  }
  SUBCASE("one writer inside") {
    std::vector<Substate> sub{Substate::simple(Tag::Exclusive), Substate::simple(Tag::Free),
                              Substate::simple(Tag::Free)};
    Flags f = derive_flags(sub);
    CHECK(f.mtx);
    CHECK(f.forbidden == full_mask(3));
    CHECK(f.busy == 0);
  }
  SUBCASE("reader locked off the writer") {
    std::vector<Substate> sub{Substate::simple(Tag::LOE), Substate::simple(Tag::Free)};
    Flags f = derive_flags(sub);
    CHECK(mask_has(f.busy, 1));
    CHECK(!mask_has(f.busy, 2));
    CHECK(!f.mtx);
  }
  SUBCASE("two threads in the fenced set is inconsistent") {
    std::vector<Substate> sub{Substate::simple(Tag::Exclusive),
                              Substate::simple(Tag::Exclusive)};
    CHECK_THROWS_AS(derive_flags(sub), std::invalid_argument);
  }
}

TEST_CASE("derived flags equal stored flags on every reachable state") {
  auto lts = explore(impl_lpe(2), 1000000);
  for (const ImplState& d : lts.states) {
    Flags f = derive_flags(d.sub);
    CHECK(f == Flags{d.busy, d.forbidden, d.mtx});
  }
}

TEST_CASE("at most one thread occupies the mutex-fenced set") {
  auto lts = explore(impl_lpe(3), 1000000);
  for (const ImplState& d : lts.states) {
    int in_m = 0;
    for (const Substate& t : d.sub)
      if (in_mutex_set(t)) ++in_m;
    CHECK(in_m <= 1);
  }
}

TEST_CASE("visible labels name the thread whose substate changed") {
  auto lts = explore(impl_lpe(2), 1000000);
  for (const auto& t : lts.transitions) {
    if (!t.label.in_act()) continue;
    REQUIRE(t.label.params.size() == 1);
    int p = t.label.params[0];
    const ImplState& a = lts.states[t.src];
    const ImplState& b = lts.states[t.dst];
    CHECK(!(a.sub[p - 1] == b.sub[p - 1]));
    for (int q = 1; q <= 2; ++q)
      if (q != p) CHECK(a.sub[q - 1] == b.sub[q - 1]);
  }
}

TEST_CASE("canonical encodings round-trip") {
  auto impl = explore(impl_lpe(2), 1000000);
  for (const ImplState& d : impl.states) {
    std::string k = d.key();
    CHECK(decode_impl_state(k) == d);
    CHECK(decode_impl_state(k).key() == k);
  }
  auto spec = explore(spec_lpe(2), 1000000);
  for (const SpecState& s : spec.states) {
    std::string k = s.key();
    CHECK(decode_spec_state(k) == s);
    CHECK(decode_spec_state(k).key() == k);
  }
  CHECK_THROWS_AS(decode_impl_state("garbage"), std::invalid_argument);
  CHECK_THROWS_AS(decode_spec_state(""), std::invalid_argument);
}

TEST_CASE("mutations change exactly the named summand") {
  SUBCASE("unknown names are rejected with the valid list") {
    CHECK_THROWS_WITH_AS(mutate_spec(2, "no-such-thing"),
                         doctest::Contains("drop-spec-improbable-saf"), std::invalid_argument);
    CHECK_THROWS_AS(mutate_impl(2, "drop-spec-improbable-saf"), std::invalid_argument);
  }
  SUBCASE("dropping the SAF loop removes internal steps at SAF states") {
    auto lts = explore(mutate_spec(2, "drop-spec-improbable-saf"), 100000);
    for (const auto& t : lts.transitions) {
      if (!t.label.is_internal()) continue;
      for (Node nd : lts.states[t.src].s) CHECK(nd != Node::SAF);
    }
  }
  SUBCASE("the busy store mutation keeps the transition but not the flag") {
    auto lpe = mutate_impl(1, "skip-busy-store");
    ImplState d = lpe.initial;
    d.sub[0] = Substate::simple(Tag::ES2);
    auto steps = enabled(lpe, d);
    REQUIRE(steps.size() == 1);
    CHECK(steps[0].target.sub[0].tag == Tag::ES1);
    CHECK(steps[0].target.busy == 0);
  }
  SUBCASE("swapping the ES guards flips both edges") {
    auto lpe = mutate_spec(2, "swap-es-guard");
    SpecState open{{Node::ES, Node::Free}};
    std::set<std::string> open_labels;
    for (const auto& st : enabled(lpe, open)) open_labels.insert(st.label.str());
    CHECK(open_labels.count("improbable") == 1);
    CHECK(open_labels.count("tau_es_loe(p1)") == 0);
    SpecState blocked{{Node::ES, Node::Exclusive}};
    std::set<std::string> blocked_labels;
    for (const auto& st : enabled(lpe, blocked)) blocked_labels.insert(st.label.str());
    CHECK(blocked_labels.count("tau_es_loe(p1)") == 1);
    CHECK(blocked_labels.count("improbable") == 0);
  }
  SUBCASE("the mutation table lists all five") {
    CHECK(mutation_names().size() == 5);
    CHECK(mutation_targets_spec("drop-spec-improbable-le"));
    CHECK(!mutation_targets_spec("skip-busy-store"));
    CHECK_THROWS_AS(mutation_targets_spec("nope"), std::invalid_argument);
  }
}

TEST_CASE("substate and state rendering") {
  CHECK(Substate::saf(0).str(2) == "SAF_{}");
  CHECK(Substate::saf_store(2, 1).str(2) == "SAF_store(p2,{p1})");
  CHECK(Substate::le(3).str(2) == "LE_{p1,p2}");
  ImplState d = impl_lpe(2).initial;
  CHECK(d.str() == "<Free, Free | busy={} forbidden={} mtx=0>");
  SpecState s{{Node::SAF, Node::Free}};
  CHECK(s.str() == "<SAF, Free>");
}
