#pragma once

// Independent brute-force enumerator for the implementation model, used as
// an oracle against the engine's explore(). Kept deliberately separate
// from the production model: set-based state representation, string
// rendering for identity, depth-first traversal.

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

struct OSub {
  enum Kind {
    Free, ES1, ES2, ES3, ES4, LOE, Shared, LS1, LS2, EE,
    SafU, SafStore, SafUndo, LOS1, LOS2, Excl, Le, OE1, OE2
  };
  Kind kind = Free;
  int px = 0;
  std::set<int> u;

  std::string render() const {
    std::string s = std::to_string(static_cast<int>(kind)) + ":" + std::to_string(px) + ":";
    for (int x : u) s += std::to_string(x) + ",";
    return s;
  }
};

struct OState {
  std::vector<OSub> subs;
  std::set<int> busy, forb;
  bool mtx = false;

  std::string render() const {
    std::string s;
    for (const auto& t : subs) s += t.render() + "|";
    s += "B";
    for (int x : busy) s += std::to_string(x);
    s += "F";
    for (int x : forb) s += std::to_string(x);
    s += mtx ? "M" : "m";
    return s;
  }
};

struct OracleCounts {
  std::size_t states = 0;
  std::size_t transitions = 0;
};

// (label text, successor) pairs; label text granularity mirrors the model's
// action parameters so that per-state duplicates collapse identically.
inline std::vector<std::pair<std::string, OState>> oracle_successors(const OState& st, int n) {
  std::vector<std::pair<std::string, OState>> out;
  auto P = [n] {
    std::set<int> all;
    for (int i = 1; i <= n; ++i) all.insert(i);
    return all;
  }();

  for (int p = 1; p <= n; ++p) {
    const OSub& s = st.subs[p - 1];
    auto go = [&](std::string label, OSub ns, auto&& tweak) {
      OState next = st;
      next.subs[p - 1] = std::move(ns);
      tweak(next);
      out.emplace_back(std::move(label), std::move(next));
    };
    auto nop = [](OState&) {};
    std::string ps = std::to_string(p);

    switch (s.kind) {
      case OSub::Free:
        go("enter_shared_call " + ps, {OSub::ES2, 0, {}}, nop);
        go("enter_exclusive_call " + ps, {OSub::EE, 0, {}}, nop);
        break;
      case OSub::ES2:
        go("store busy true " + ps, {OSub::ES1, 0, {}},
           [&](OState& x) { x.busy.insert(p); });
        break;
      case OSub::ES1:
        if (st.forb.count(p))
          go("load forb true " + ps, {OSub::ES4, 0, {}}, nop);
        else
          go("tau_es_loe " + ps, {OSub::LOE, 0, {}}, nop);
        break;
      case OSub::ES4:
        go("store busy false " + ps, {OSub::ES3, 0, {}},
           [&](OState& x) { x.busy.erase(p); });
        break;
      case OSub::ES3:
        go("improbable " + ps, {OSub::ES2, 0, {}}, nop);
        break;
      case OSub::LOE:
        go("enter_shared_return " + ps, {OSub::Shared, 0, {}}, nop);
        break;
      case OSub::Shared:
        go("leave_shared_call " + ps, {OSub::LS2, 0, {}}, nop);
        break;
      case OSub::LS2:
        go("store busy false " + ps, {OSub::LS1, 0, {}},
           [&](OState& x) { x.busy.erase(p); });
        break;
      case OSub::LS1:
        go("leave_shared_return " + ps, {OSub::Free, 0, {}}, nop);
        break;
      case OSub::EE:
        if (!st.mtx)
          go("tau_ee_saf " + ps, {OSub::SafU, 0, {}}, [](OState& x) { x.mtx = true; });
        break;
      case OSub::SafU:
        for (int px = 1; px <= n; ++px)
          go("store forb true " + std::to_string(px) + " by " + ps, {OSub::SafStore, px, s.u},
             [&](OState& x) { x.forb.insert(px); });
        break;
      case OSub::SafStore: {
        std::set<int> rest = P;
        rest.erase(s.px);
        if (st.busy.count(s.px)) {
          go("load busy true " + std::to_string(s.px) + " by " + ps,
             {OSub::SafUndo, s.px, s.u}, nop);
        } else if (s.u == rest) {
          go("tau_saf_los " + ps, {OSub::LOS2, 0, {}}, nop);
        } else {
          std::set<int> bigger = s.u;
          bigger.insert(s.px);
          go("load busy false " + std::to_string(s.px) + " by " + ps,
             {OSub::SafU, 0, std::move(bigger)}, nop);
        }
        std::set<int> smaller = s.u;
        smaller.erase(s.px);
        go("store forb false " + std::to_string(s.px) + " by " + ps,
           {OSub::SafU, 0, std::move(smaller)}, [&](OState& x) { x.forb.erase(s.px); });
        break;
      }
      case OSub::SafUndo: {
        std::set<int> smaller = s.u;
        smaller.erase(s.px);
        go("store forb false " + std::to_string(s.px) + " by " + ps,
           {OSub::SafU, 0, std::move(smaller)}, [&](OState& x) { x.forb.erase(s.px); });
        break;
      }
      case OSub::LOS2:
        go("internal " + ps, {OSub::LOS1, 0, {}}, nop);
        break;
      case OSub::LOS1:
        go("enter_exclusive_return " + ps, {OSub::Excl, 0, {}}, nop);
        break;
      case OSub::Excl:
        go("leave_exclusive_call " + ps, {OSub::Le, 0, P}, nop);
        break;
      case OSub::Le:
        for (int px = 1; px <= n; ++px) {
          if (s.u == std::set<int>{px}) {
            go("tau_le_oe " + ps, {OSub::OE2, 0, {}}, [&](OState& x) { x.forb.erase(px); });
          } else {
            std::set<int> smaller = s.u;
            smaller.erase(px);
            go("store forb false " + std::to_string(px) + " by " + ps,
               {OSub::Le, 0, std::move(smaller)}, [&](OState& x) { x.forb.erase(px); });
          }
          std::set<int> bigger = s.u;
          bigger.insert(px);
          go("store forb true " + std::to_string(px) + " by " + ps,
             {OSub::Le, 0, std::move(bigger)}, [&](OState& x) { x.forb.insert(px); });
        }
        break;
      case OSub::OE2:
        go("unlock " + ps, {OSub::OE1, 0, {}}, [](OState& x) { x.mtx = false; });
        break;
      case OSub::OE1:
        go("leave_exclusive_return " + ps, {OSub::Free, 0, {}}, nop);
        break;
    }
  }
  return out;
}

inline OracleCounts oracle_enumerate(int n) {
  OState init;
  init.subs.assign(n, {});
  std::set<std::string> visited{init.render()};
  std::vector<OState> stack{init};
  OracleCounts counts;
  while (!stack.empty()) {
    OState cur = std::move(stack.back());
    stack.pop_back();
    ++counts.states;
    std::set<std::pair<std::string, std::string>> dedup;
    for (auto& [label, next] : oracle_successors(cur, n)) {
      if (!dedup.emplace(label, next.render()).second) continue;
      ++counts.transitions;
      if (visited.insert(next.render()).second) stack.push_back(next);
    }
  }
  return counts;
}

}  // namespace oracle
