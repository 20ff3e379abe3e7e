#include "bf/conesfoci.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace bf {

using Tag = Substate::Tag;

Node substate_node(const Substate& t) {
  switch (t.tag) {
    case Tag::Free:      return Node::Free;
    case Tag::ES1:
    case Tag::ES2:
    case Tag::ES3:
    case Tag::ES4:       return Node::ES;
    case Tag::LOE:       return Node::LOE;
    case Tag::Shared:    return Node::Shared;
    case Tag::LS1:
    case Tag::LS2:       return Node::LS;
    case Tag::EE:        return Node::EE;
    case Tag::SafU:
    case Tag::SafStore:
    case Tag::SafUndo:   return Node::SAF;
    case Tag::LOS1:
    case Tag::LOS2:      return Node::LOS;
    case Tag::Exclusive: return Node::Exclusive;
    case Tag::Le:        return Node::LE;
    case Tag::OE1:
    case Tag::OE2:       return Node::OE;
  }
  throw std::invalid_argument("substate_node: malformed substate");
}

SpecState state_mapping(const ImplState& d) {
  SpecState s;
  s.s.reserve(d.sub.size());
  for (const Substate& t : d.sub) s.s.push_back(substate_node(t));
  return s;
}

bool sub_focus(const Substate& t, int p) {
  switch (t.tag) {
    case Tag::Free:
    case Tag::ES1:
    case Tag::LOE:
    case Tag::Shared:
    case Tag::LS1:
    case Tag::EE:
    case Tag::LOS1:
    case Tag::Exclusive:
    case Tag::OE1:
      return true;
    case Tag::SafU:
      return t.set == 0;
    case Tag::Le:
      return t.set == thread_bit(p);
    default:
      return false;
  }
}

bool focus(const ImplState& d) {
  for (int p = 1; p <= d.n(); ++p)
    if (!sub_focus(d.sub[p - 1], p)) return false;
  return true;
}

std::string_view cone_label_name(ConeLabel c) {
  return c == ConeLabel::Divergent ? "divergent" : "non-divergent";
}

ConeLabel cone_label(const SpecState& s) {
  bool in_es = false, in_los_excl = false;
  for (Node nd : s.s) {
    if (nd == Node::SAF || nd == Node::LE) return ConeLabel::Divergent;
    if (nd == Node::ES) in_es = true;
    if (nd == Node::LOS || nd == Node::Exclusive) in_los_excl = true;
  }
  return in_es && in_los_excl ? ConeLabel::Divergent : ConeLabel::NonDivergent;
}

// ---------------------------------------------------------------------------
// State ordering

std::vector<Substate> enumerate_substates(int n) {
  std::vector<Substate> out;
  const std::uint16_t full = full_mask(n);
  for (Tag t : {Tag::Free, Tag::ES1, Tag::ES2, Tag::ES3, Tag::ES4, Tag::LOE, Tag::Shared,
                Tag::LS1, Tag::LS2, Tag::EE, Tag::LOS1, Tag::LOS2, Tag::Exclusive, Tag::OE1,
                Tag::OE2})
    out.push_back(Substate::simple(t));
  for (std::uint16_t u = 0; u < full; ++u) out.push_back(Substate::saf(u));
  for (int px = 1; px <= n; ++px)
    for (std::uint16_t u = 0; u < full; ++u) out.push_back(Substate::saf_store(px, u));
  for (int px = 1; px <= n; ++px)
    for (std::uint16_t u = 0; u < full; ++u) out.push_back(Substate::saf_undo(px, u));
  for (std::uint16_t u = 1; u <= full; ++u) out.push_back(Substate::le(u));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

bool proper_subset(std::uint16_t a, std::uint16_t b) { return a != b && (a & ~b) == 0; }

// Generator edges (lo strictly below hi) of thread p's substate order.
std::vector<std::pair<Substate, Substate>> order_generators(int n, int p) {
  std::vector<std::pair<Substate, Substate>> edges;
  auto chain = [&edges](Tag a, Tag b) {
    edges.emplace_back(Substate::simple(a), Substate::simple(b));
  };
  chain(Tag::ES1, Tag::ES2);
  chain(Tag::ES2, Tag::ES3);
  chain(Tag::ES3, Tag::ES4);
  chain(Tag::LS1, Tag::LS2);
  chain(Tag::LOS1, Tag::LOS2);
  chain(Tag::OE1, Tag::OE2);
  const std::uint16_t full = full_mask(n);
  for (int px = 1; px <= n; ++px) {
    for (std::uint16_t u = 0; u < full; ++u) {
      if (mask_has(u, px))
        edges.emplace_back(Substate::saf_store(px, u), Substate::saf(u));
      edges.emplace_back(Substate::saf(u & static_cast<std::uint16_t>(~thread_bit(px))),
                         Substate::saf_store(px, u));
    }
  }
  for (std::uint16_t u = 0; u < full; ++u)
    for (int px = 1; px <= n; ++px)
      for (std::uint16_t u2 = 0; u2 < full; ++u2)
        edges.emplace_back(Substate::saf(u), Substate::saf_undo(px, u2));
  for (std::uint16_t a = 1; a <= full; ++a) {
    if (!mask_has(a, p)) continue;
    for (std::uint16_t b = 1; b <= full; ++b) {
      if ((proper_subset(a, b)) || !mask_has(b, p))
        if (a != b) edges.emplace_back(Substate::le(a), Substate::le(b));
    }
  }
  return edges;
}

}  // namespace

StateOrder::StateOrder(int n) : StateOrder(n, {}) {}

StateOrder::StateOrder(int n, const std::vector<std::pair<Substate, Substate>>& extra_edges)
    : n_(n), universe_(enumerate_substates(n)) {
  const std::size_t m = universe_.size();
  std::map<Substate, int> index;
  for (std::size_t i = 0; i < m; ++i) index.emplace(universe_[i], static_cast<int>(i));
  lt_.assign(n, std::vector<std::vector<bool>>(m, std::vector<bool>(m, false)));
  for (int p = 1; p <= n; ++p) {
    auto& rel = lt_[p - 1];
    auto edges = order_generators(n, p);
    edges.insert(edges.end(), extra_edges.begin(), extra_edges.end());
    for (const auto& [lo, hi] : edges) rel[index.at(lo)][index.at(hi)] = true;
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t i = 0; i < m; ++i) {
        if (!rel[i][k]) continue;
        for (std::size_t j = 0; j < m; ++j)
          if (rel[k][j]) rel[i][j] = true;
      }
  }
}

int StateOrder::index_of(const Substate& t) const {
  auto it = std::lower_bound(universe_.begin(), universe_.end(), t);
  if (it == universe_.end() || !(*it == t))
    throw std::invalid_argument("substate outside the order universe");
  return static_cast<int>(it - universe_.begin());
}

bool StateOrder::substate_lt(int p, const Substate& a, const Substate& b) const {
  return lt_[p - 1][index_of(a)][index_of(b)];
}

bool StateOrder::lt(const ImplState& a, const ImplState& b) const {
  bool strict = false;
  for (int p = 1; p <= n_; ++p) {
    const Substate& x = a.sub[p - 1];
    const Substate& y = b.sub[p - 1];
    if (x == y) continue;
    if (!substate_lt(p, x, y)) return false;
    strict = true;
  }
  return strict;
}

bool order_lt(const ImplState& a, const ImplState& b) {
  if (a.n() != b.n()) throw std::invalid_argument("order_lt: thread counts differ");
  return StateOrder(a.n()).lt(a, b);
}

std::optional<std::vector<Substate>> find_order_cycle(
    int n, const std::vector<std::pair<Substate, Substate>>& extra) {
  auto universe = enumerate_substates(n);
  std::map<Substate, int> index;
  for (std::size_t i = 0; i < universe.size(); ++i)
    index.emplace(universe[i], static_cast<int>(i));
  for (int p = 1; p <= n; ++p) {
    std::vector<std::vector<int>> adj(universe.size());
    auto edges = order_generators(n, p);
    edges.insert(edges.end(), extra.begin(), extra.end());
    for (const auto& [lo, hi] : edges) adj[index.at(lo)].push_back(index.at(hi));
    // DFS with colors; on a back edge, cut the path at the revisited node.
    std::vector<int> color(universe.size(), 0);
    std::vector<int> path;
    auto dfs = [&](auto&& self, int v) -> std::optional<std::vector<Substate>> {
      color[v] = 1;
      path.push_back(v);
      for (int w : adj[v]) {
        if (color[w] == 1) {
          std::vector<Substate> cycle;
          auto it = std::find(path.begin(), path.end(), w);
          for (; it != path.end(); ++it) cycle.push_back(universe[*it]);
          cycle.push_back(universe[w]);
          return cycle;
        }
        if (color[w] == 0)
          if (auto c = self(self, w)) return c;
      }
      path.pop_back();
      color[v] = 2;
      return std::nullopt;
    };
    for (std::size_t s = 0; s < universe.size(); ++s)
      if (color[s] == 0)
        if (auto c = dfs(dfs, static_cast<int>(s))) return c;
  }
  return std::nullopt;
}

OrderVerdict check_order_wellfounded(int n, std::size_t state_limit) {
  if (auto cycle = find_order_cycle(n)) {
    OrderVerdict v;
    v.well_founded = false;
    v.cycle = *cycle;
    v.detail = "cycle in the order generators:";
    for (const Substate& t : v.cycle) v.detail += " " + t.str(n);
    return v;
  }
  StateOrder order(n);
  Lts<ImplState> lts = explore(impl_lpe(n), state_limit);
  for (const ImplState& d : lts.states) {
    if (order.lt(d, d)) {
      OrderVerdict v;
      v.well_founded = false;
      v.detail = "order not irreflexive at reachable state " + d.str();
      return v;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Requirement checker

std::string_view requirement_name(Requirement r) {
  switch (r) {
    case Requirement::I:        return "I";
    case Requirement::II:       return "II";
    case Requirement::III:      return "III";
    case Requirement::IV:       return "IV";
    case Requirement::V:        return "V";
    case Requirement::VI:       return "VI";
    case Requirement::IDelta:   return "I-delta";
    case Requirement::IIDelta:  return "II-delta";
    case Requirement::IIIDelta: return "III-delta";
    case Requirement::IVDelta:  return "IV-delta";
  }
  return "?";
}

bool RequirementReport::all_pass() const {
  if (precondition_failure) return false;
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

RequirementReport check_requirements(const Lpe<ImplState>& impl, const Lpe<SpecState>& spec,
                                     const std::function<bool(const ImplState&)>& invariant,
                                     std::size_t state_limit) {
  RequirementReport rep;
  if (!invariant(impl.initial)) {
    rep.precondition_failure = "invariant fails at the initial state";
    return rep;
  }
  if (!(state_mapping(impl.initial) == spec.initial)) {
    rep.precondition_failure = "state mapping does not send the initial state of the "
                               "implementation to the initial state of the specification";
    return rep;
  }
  const int n = impl.initial.n();
  StateOrder order(n);

  struct SpecInfo {
    std::vector<Step<SpecState>> acts;
    std::vector<Step<SpecState>> ints;
  };
  std::unordered_map<std::string, SpecInfo> spec_memo;
  auto spec_info = [&](const SpecState& s) -> const SpecInfo& {
    auto [it, fresh] = spec_memo.try_emplace(s.key());
    if (fresh) {
      for (auto& st : enabled(spec, s)) {
        if (st.label.is_internal())
          it->second.ints.push_back(std::move(st));
        else
          it->second.acts.push_back(std::move(st));
      }
    }
    return it->second;
  };

  auto fail = [&rep](Requirement r, const ImplState& d, std::string detail) {
    RequirementResult& res = rep[r];
    if (!res.pass) return;  // first failure in BFS order wins
    res.pass = false;
    res.state = d.str();
    res.detail = std::move(detail);
  };

  // Bounded BFS over internal steps within the cone of h(from), looking
  // for a state enabling `want`.
  auto int_reachable_enabled = [&](const ImplState& from, const SpecState& cone,
                                   const ActionLabel& want) {
    std::unordered_set<std::string> seen{from.key()};
    std::vector<ImplState> queue{from};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      for (auto& st : enabled(impl, queue[qi])) {
        if (st.label == want) return true;
        if (!st.label.is_internal()) continue;
        if (!(state_mapping(st.target) == cone)) continue;
        if (seen.insert(st.target.key()).second) {
          if (seen.size() > state_limit) throw StateLimitError(state_limit);
          queue.push_back(std::move(st.target));
        }
      }
    }
    return false;
  };

  std::vector<ImplState> states{impl.initial};
  std::unordered_map<std::string, std::size_t> index{{impl.initial.key(), 0}};
  for (std::size_t cur = 0; cur < states.size(); ++cur) {
    const ImplState d = states[cur];
    if (!invariant(d)) {
      rep.precondition_failure = "invariant fails at reachable state " + d.str();
      return rep;
    }
    ++rep.states_checked;

    auto steps = enabled(impl, d);
    for (const auto& st : steps) {
      if (index.emplace(st.target.key(), states.size()).second) {
        if (states.size() >= state_limit) throw StateLimitError(state_limit);
        states.push_back(st.target);
      }
    }

    const SpecState hd = state_mapping(d);
    const SpecInfo& sp = spec_info(hd);
    const bool fc = focus(d);
    const ConeLabel cone = cone_label(hd);

    // I: away from the focus point, some internal step strictly descends.
    if (!fc) {
      bool descending = false;
      for (const auto& st : steps)
        if (st.label.is_internal() && order.lt(st.target, d)) {
          descending = true;
          break;
        }
      if (!descending) fail(Requirement::I, d, "no descending internal step");
    }

    for (const auto& st : steps) {
      if (st.label.is_internal()) {
        // II: internal steps stay inside the cone.
        if (!(state_mapping(st.target) == hd))
          fail(Requirement::II, d,
               "internal step " + st.label.str() + " leaves the cone");
        // IV-delta: in a non-divergent cone every internal step descends.
        if (cone == ConeLabel::NonDivergent && !order.lt(st.target, d))
          fail(Requirement::IVDelta, d,
               "internal step " + st.label.str() + " does not descend");
        continue;
      }
      // IV/V/VI: the same action instance must be enabled in the
      // specification with equal parameters and a related endpoint.
      const Step<SpecState>* match = nullptr;
      for (const auto& sa : sp.acts)
        if (sa.label == st.label) {
          match = &sa;
          break;
        }
      if (!match) {
        fail(Requirement::IV, d,
             "action " + st.label.str() + " is not enabled in the specification state");
        continue;
      }
      if (match->label.params != st.label.params)
        fail(Requirement::V, d, "parameter mismatch for " + st.label.str());
      if (!(state_mapping(st.target) == match->target))
        fail(Requirement::VI, d,
             "endpoints of " + st.label.str() + " are not related");
    }

    // III: from a focus point, every specification action is enabled after
    // finitely many internal steps.
    if (fc && rep[Requirement::III].pass) {
      for (const auto& sa : sp.acts) {
        if (!int_reachable_enabled(d, hd, sa.label))
          fail(Requirement::III, d,
               "specification action " + sa.label.str() +
                   " not enabled after internal steps");
      }
    }

    // I-delta: internal steps of the specification are loops.
    for (const auto& si : sp.ints)
      if (!(si.target == hd))
        fail(Requirement::IDelta, d,
             "specification internal step " + si.label.str() + " is not a loop");

    // II-delta: the cone labeling matches the presence of specification
    // internal steps.
    if ((cone == ConeLabel::Divergent) != !sp.ints.empty())
      fail(Requirement::IIDelta, d,
           std::string("cone labeled ") + std::string(cone_label_name(cone)) +
               (sp.ints.empty() ? " but no specification internal step"
                                : " but a specification internal step is enabled"));

    // III-delta: at focus points, divergence shows exactly in enabled
    // internal steps.
    if (fc) {
      bool has_int = false;
      for (const auto& st : steps)
        if (st.label.is_internal()) {
          has_int = true;
          break;
        }
      if ((cone == ConeLabel::Divergent) != has_int)
        fail(Requirement::IIIDelta, d,
             std::string("cone labeled ") + std::string(cone_label_name(cone)) +
                 (has_int ? " but an internal step is enabled at the focus point"
                          : " but no internal step is enabled at the focus point"));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Witness construction

std::vector<Step<ImplState>> witness_int_path(const ImplState& d, int p_saf) {
  const int n = d.n();
  if (p_saf < 1 || p_saf > n)
    throw std::invalid_argument("witness_int_path: thread index out of range");
  if (!focus(d)) throw std::invalid_argument("witness_int_path: state is not a focus point");
  const Substate& anchor = d.sub[p_saf - 1];
  if (!(anchor.tag == Tag::SafU && anchor.set == 0))
    throw std::invalid_argument("witness_int_path: thread is not at SAF with no lockouts");
  for (const Substate& t : d.sub)
    if (t.tag == Tag::LOE || t.tag == Tag::Shared)
      throw std::invalid_argument(
          "witness_int_path: the specification step to LOS is not enabled in the mapped state");

  const Lpe<ImplState> lpe = impl_lpe(n);
  std::vector<Step<ImplState>> path;
  ImplState cur = d;
  auto take = [&](const char* summand_id, SumValue v) {
    for (auto& st : enabled(lpe, cur)) {
      if (st.value == v && lpe.summands[st.summand].id == summand_id &&
          st.label.is_internal()) {
        cur = st.target;
        path.push_back(std::move(st));
        return;
      }
    }
    throw std::logic_error(std::string("witness step not enabled: ") + summand_id + " at " +
                           cur.str());
  };

  for (int p = 1; p <= n; ++p) {
    if (p == p_saf) continue;
    if (substate_node(cur.sub[p - 1]) == Node::ES) {
      take("saf_store_forbidden_true", {p_saf, p});
      take("es1_load_forbidden_true", {p, 0});
      take("es4_store_busy_false", {p, 0});
      take("saf_load_busy_false_step", {p_saf, p});
    } else {
      take("saf_store_forbidden_true", {p_saf, p});
      take("saf_load_busy_false_step", {p_saf, p});
    }
  }
  take("saf_store_forbidden_true", {p_saf, p_saf});

  for (const auto& st : enabled(lpe, cur))
    if (st.label.kind == LabelKind::TauVisible && st.label.name == "tau_saf_los" &&
        st.label.params == std::vector<int>{p_saf})
      return path;
  throw std::logic_error("witness terminal state does not enable the step to LOS");
}

}  // namespace bf
