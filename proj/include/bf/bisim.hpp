#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bf/lpe.hpp"

namespace bf {

/// Reserved hide-set entry matching every Int-classified label.
inline const std::string kHideAllInt = "*int*";

/// The hide set of the standard verification profile: all internal steps
/// plus the four shared tau edges. What remains are the eight visible
/// call/return actions and tau.
inline std::set<std::string> standard_hide_set() {
  return {kHideAllInt, "tau_es_loe", "tau_ee_saf", "tau_saf_los", "tau_le_oe"};
}

/// Replaces every transition whose label name is in `labels` (and every
/// Int label when the reserved name "*int*" is present) with the silent
/// label tau. States and transition count are unchanged.
template <class State>
Lts<State> hide(const Lts<State>& lts, const std::set<std::string>& labels) {
  const bool all_int = labels.count(kHideAllInt) > 0;
  Lts<State> out = lts;
  for (auto& t : out.transitions) {
    if (t.label.kind == LabelKind::Tau) continue;
    if ((all_int && t.label.kind == LabelKind::Int) || labels.count(t.label.name) > 0)
      t.label = ActionLabel::tau();
  }
  return out;
}

namespace detail {

/// Disjoint union of two LTSs with interned labels; label id 0 is tau.
struct CombinedLts {
  static constexpr std::uint32_t kTau = 0;
  std::size_t na = 0, nb = 0;
  std::size_t init_a = 0, init_b = 0;  // combined indices
  struct Edge {
    std::uint32_t src, dst, label;
  };
  std::vector<Edge> edges;            // sorted by src
  std::vector<std::uint32_t> first;   // CSR offsets, size n()+1

  std::size_t n() const { return na + nb; }

  template <class SA, class SB>
  static CombinedLts build(const Lts<SA>& a, const Lts<SB>& b) {
    CombinedLts g;
    g.na = a.states.size();
    g.nb = b.states.size();
    g.init_a = a.initial;
    g.init_b = g.na + b.initial;
    std::map<std::string, std::uint32_t> ids;
    auto intern = [&ids](const ActionLabel& lab) -> std::uint32_t {
      if (lab.kind == LabelKind::Tau) return kTau;
      auto [it, fresh] = ids.emplace(lab.key(), static_cast<std::uint32_t>(ids.size() + 1));
      (void)fresh;
      return it->second;
    };
    g.edges.reserve(a.transitions.size() + b.transitions.size());
    for (const auto& t : a.transitions)
      g.edges.push_back({static_cast<std::uint32_t>(t.src), static_cast<std::uint32_t>(t.dst),
                         intern(t.label)});
    for (const auto& t : b.transitions)
      g.edges.push_back({static_cast<std::uint32_t>(g.na + t.src),
                         static_cast<std::uint32_t>(g.na + t.dst), intern(t.label)});
    std::sort(g.edges.begin(), g.edges.end(), [](const Edge& x, const Edge& y) {
      if (x.src != y.src) return x.src < y.src;
      if (x.label != y.label) return x.label < y.label;
      return x.dst < y.dst;
    });
    g.first.assign(g.n() + 1, 0);
    for (const auto& e : g.edges) g.first[e.src + 1]++;
    for (std::size_t i = 1; i < g.first.size(); ++i) g.first[i] += g.first[i - 1];
    return g;
  }
};

struct SccResult {
  std::vector<std::uint32_t> comp;  // component id per state
  std::size_t count = 0;            // ids in reverse topological order
};

/// Iterative Tarjan. Component ids increase from successors to
/// predecessors: every edge u->v crossing components has comp[v] < comp[u].
inline SccResult strongly_connected(std::size_t n,
                                    const std::vector<std::vector<std::uint32_t>>& adj) {
  constexpr std::uint32_t kNone = 0xffffffffu;
  SccResult res;
  res.comp.assign(n, kNone);
  std::vector<std::uint32_t> index(n, kNone), low(n, 0), stack;
  std::vector<bool> on(n, false);
  std::uint32_t next = 0;
  struct Frame {
    std::uint32_t v;
    std::size_t ei;
  };
  std::vector<Frame> call;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (index[s] != kNone) continue;
    index[s] = low[s] = next++;
    stack.push_back(s);
    on[s] = true;
    call.push_back({s, 0});
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.ei < adj[f.v].size()) {
        std::uint32_t w = adj[f.v][f.ei++];
        if (index[w] == kNone) {
          index[w] = low[w] = next++;
          stack.push_back(w);
          on[w] = true;
          call.push_back({w, 0});
        } else if (on[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        std::uint32_t v = f.v;
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
        if (low[v] == index[v]) {
          auto cid = static_cast<std::uint32_t>(res.count++);
          while (true) {
            std::uint32_t w = stack.back();
            stack.pop_back();
            on[w] = false;
            res.comp[w] = cid;
            if (w == v) break;
          }
        }
      }
    }
  }
  return res;
}

/// Per-state divergence with respect to a block assignment: true iff the
/// state reaches, via tau steps that stay inside its block, a tau cycle
/// inside that block.
inline std::vector<bool> block_divergence(const CombinedLts& g,
                                          const std::vector<std::uint32_t>& block) {
  const std::size_t n = g.n();
  std::vector<std::vector<std::uint32_t>> inert(n);
  std::vector<bool> self_loop(n, false);
  for (const auto& e : g.edges) {
    if (e.label != CombinedLts::kTau || block[e.src] != block[e.dst]) continue;
    if (e.src == e.dst)
      self_loop[e.src] = true;
    else
      inert[e.src].push_back(e.dst);
  }
  SccResult scc = strongly_connected(n, inert);
  std::vector<std::uint32_t> comp_size(scc.count, 0);
  for (std::size_t v = 0; v < n; ++v) comp_size[scc.comp[v]]++;
  std::vector<char> comp_div(scc.count, 0);
  for (std::size_t v = 0; v < n; ++v)
    if (self_loop[v] || comp_size[scc.comp[v]] > 1) comp_div[scc.comp[v]] = 1;
  std::vector<std::vector<std::uint32_t>> members(scc.count);
  for (std::uint32_t v = 0; v < n; ++v) members[scc.comp[v]].push_back(v);
  for (std::size_t c = 0; c < scc.count; ++c) {
    if (comp_div[c]) continue;
    for (std::uint32_t v : members[c]) {
      for (std::uint32_t w : inert[v])
        if (comp_div[scc.comp[w]]) {
          comp_div[c] = 1;
          break;
        }
      if (comp_div[c]) break;
    }
  }
  std::vector<bool> div(n, false);
  for (std::size_t v = 0; v < n; ++v) div[v] = comp_div[scc.comp[v]] != 0;
  return div;
}

struct RefineOutcome {
  std::vector<std::uint32_t> block;
  std::size_t count = 0;
};

/// Signature refinement. Signature of a state: the (label, target block)
/// pairs reachable through block-internal tau steps followed by one
/// non-inert step, plus (optionally) the divergence bit recomputed each
/// round against the current blocks. Terminates at the coarsest stable
/// partition.
inline RefineOutcome signature_refine(const CombinedLts& g, bool divergence) {
  const std::size_t n = g.n();
  RefineOutcome out;
  out.block.assign(n, 0);
  out.count = n == 0 ? 0 : 1;
  if (n == 0) return out;
  using Sig = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
  for (;;) {
    const auto& block = out.block;
    std::vector<std::vector<std::uint32_t>> inert(n);
    for (const auto& e : g.edges)
      if (e.label == CombinedLts::kTau && block[e.src] == block[e.dst] && e.src != e.dst)
        inert[e.src].push_back(e.dst);
    SccResult scc = strongly_connected(n, inert);
    std::vector<std::vector<std::uint32_t>> members(scc.count);
    for (std::uint32_t v = 0; v < n; ++v) members[scc.comp[v]].push_back(v);

    std::vector<Sig> comp_sig(scc.count);
    for (std::size_t c = 0; c < scc.count; ++c) {
      std::set<std::pair<std::uint32_t, std::uint32_t>> acc;
      for (std::uint32_t v : members[c]) {
        for (std::uint32_t i = g.first[v]; i < g.first[v + 1]; ++i) {
          const auto& e = g.edges[i];
          if (e.label == CombinedLts::kTau && block[e.dst] == block[v]) {
            if (scc.comp[e.dst] != c)
              acc.insert(comp_sig[scc.comp[e.dst]].begin(), comp_sig[scc.comp[e.dst]].end());
          } else {
            acc.insert({e.label, block[e.dst]});
          }
        }
      }
      comp_sig[c].assign(acc.begin(), acc.end());
    }

    std::vector<bool> div(n, false);
    if (divergence) div = block_divergence(g, block);

    std::map<std::tuple<std::uint32_t, bool, const Sig*>, std::uint32_t,
             decltype([](const auto& x, const auto& y) {
               if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) < std::get<0>(y);
               if (std::get<1>(x) != std::get<1>(y)) return std::get<1>(x) < std::get<1>(y);
               return *std::get<2>(x) < *std::get<2>(y);
             })>
        ids;
    std::vector<std::uint32_t> next(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
      auto key = std::make_tuple(block[v], static_cast<bool>(div[v]), &comp_sig[scc.comp[v]]);
      auto [it, fresh] = ids.emplace(key, static_cast<std::uint32_t>(ids.size()));
      (void)fresh;
      next[v] = it->second;
    }
    if (ids.size() == out.count) return out;
    out.block = std::move(next);
    out.count = ids.size();
  }
}

}  // namespace detail

/// Result of an equivalence check: the final partition over both state
/// sets. When equivalent, the induced relation (same-block pairs) is a
/// witness relating the two initial states; when not, the initial states
/// themselves are the distinguishing pair.
struct EquivalenceVerdict {
  bool equivalent = false;
  std::size_t block_count = 0;
  std::vector<std::size_t> block_a, block_b;
  std::size_t init_a = 0, init_b = 0;

  std::vector<std::pair<std::size_t, std::size_t>> relation() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < block_a.size(); ++i)
      for (std::size_t j = 0; j < block_b.size(); ++j)
        if (block_a[i] == block_b[j]) out.emplace_back(i, j);
    return out;
  }
  std::pair<std::size_t, std::size_t> distinguishing_pair() const { return {init_a, init_b}; }
};

namespace detail {

template <class SA, class SB>
EquivalenceVerdict refine_verdict(const Lts<SA>& a, const Lts<SB>& b, bool divergence) {
  CombinedLts g = CombinedLts::build(a, b);
  RefineOutcome r = signature_refine(g, divergence);
  EquivalenceVerdict v;
  v.block_count = r.count;
  v.block_a.assign(g.na, 0);
  v.block_b.assign(g.nb, 0);
  for (std::size_t i = 0; i < g.na; ++i) v.block_a[i] = r.block[i];
  for (std::size_t j = 0; j < g.nb; ++j) v.block_b[j] = r.block[g.na + j];
  v.init_a = a.initial;
  v.init_b = b.initial;
  v.equivalent = v.block_a[a.initial] == v.block_b[b.initial];
  return v;
}

}  // namespace detail

/// Branching bisimilarity of the two initial states.
template <class SA, class SB>
EquivalenceVerdict branching_bisim(const Lts<SA>& a, const Lts<SB>& b) {
  return detail::refine_verdict(a, b, false);
}

/// Divergence-preserving branching bisimilarity of the two initial states.
template <class SA, class SB>
EquivalenceVerdict dpbb(const Lts<SA>& a, const Lts<SB>& b) {
  return detail::refine_verdict(a, b, true);
}

struct RelationCheck {
  bool ok = true;
  std::string detail;
};

namespace detail {

inline std::vector<std::vector<std::uint32_t>> tau_closures(const CombinedLts& g) {
  const std::size_t n = g.n();
  std::vector<std::vector<std::uint32_t>> clo(n);
  std::vector<std::uint32_t> mark(n, 0xffffffffu);
  for (std::uint32_t s = 0; s < n; ++s) {
    std::vector<std::uint32_t> queue{s};
    mark[s] = s;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      std::uint32_t v = queue[qi];
      for (std::uint32_t i = g.first[v]; i < g.first[v + 1]; ++i) {
        const auto& e = g.edges[i];
        if (e.label != CombinedLts::kTau || mark[e.dst] == s) continue;
        mark[e.dst] = s;
        queue.push_back(e.dst);
      }
    }
    clo[s] = std::move(queue);
  }
  return clo;
}

/// Direct re-check of the definition on same-block pairs: the visible
/// transfer conditions in both directions and, when `divergence` is set,
/// the divergence transfer conditions decided via block-internal tau-cycle
/// reachability.
template <class SA, class SB>
RelationCheck verify_relation(const Lts<SA>& a, const Lts<SB>& b, const EquivalenceVerdict& v,
                              bool divergence) {
  CombinedLts g = CombinedLts::build(a, b);
  const std::size_t n = g.n();
  std::vector<std::uint32_t> block(n, 0);
  for (std::size_t i = 0; i < g.na; ++i) block[i] = static_cast<std::uint32_t>(v.block_a[i]);
  for (std::size_t j = 0; j < g.nb; ++j)
    block[g.na + j] = static_cast<std::uint32_t>(v.block_b[j]);
  auto clo = tau_closures(g);
  std::vector<bool> div = divergence ? block_divergence(g, block) : std::vector<bool>(n, false);
  std::vector<bool> has_inert_tau(n, false);
  for (const auto& e : g.edges)
    if (e.label == CombinedLts::kTau && block[e.src] == block[e.dst]) has_inert_tau[e.src] = true;

  auto moves_matched = [&](std::uint32_t s, std::uint32_t t) -> bool {
    // every s --l--> s' is matched from t: l == tau with s' still related,
    // or t ==tau*==> t' --l--> t'' with s ~ t' and s' ~ t''
    for (std::uint32_t i = g.first[s]; i < g.first[s + 1]; ++i) {
      const auto& e = g.edges[i];
      if (e.label == CombinedLts::kTau && block[e.dst] == block[t]) continue;
      bool ok = false;
      for (std::uint32_t tp : clo[t]) {
        if (block[tp] != block[s]) continue;
        for (std::uint32_t k = g.first[tp]; k < g.first[tp + 1] && !ok; ++k) {
          const auto& f = g.edges[k];
          if (f.label == e.label && block[f.dst] == block[e.dst]) ok = true;
        }
        if (ok) break;
      }
      if (!ok) return false;
    }
    return true;
  };

  for (std::size_t i = 0; i < g.na; ++i) {
    for (std::size_t j = 0; j < g.nb; ++j) {
      if (v.block_a[i] != v.block_b[j]) continue;
      auto u = static_cast<std::uint32_t>(i);
      auto w = static_cast<std::uint32_t>(g.na + j);
      if (!moves_matched(u, w))
        return {false, "B1 fails for pair (" + std::to_string(i) + "," + std::to_string(j) + ")"};
      if (!moves_matched(w, u))
        return {false, "B2 fails for pair (" + std::to_string(i) + "," + std::to_string(j) + ")"};
      if (divergence) {
        if (div[u] && !has_inert_tau[w])
          return {false,
                  "D1 fails for pair (" + std::to_string(i) + "," + std::to_string(j) + ")"};
        if (div[w] && !has_inert_tau[u])
          return {false,
                  "D2 fails for pair (" + std::to_string(i) + "," + std::to_string(j) + ")"};
      }
    }
  }
  if (v.equivalent && v.block_a[v.init_a] != v.block_b[v.init_b])
    return {false, "witness relation does not relate the initial states"};
  return {};
}

}  // namespace detail

template <class SA, class SB>
RelationCheck verify_dpbb_relation(const Lts<SA>& a, const Lts<SB>& b,
                                   const EquivalenceVerdict& v) {
  return detail::verify_relation(a, b, v, true);
}

template <class SA, class SB>
RelationCheck verify_branching_relation(const Lts<SA>& a, const Lts<SB>& b,
                                        const EquivalenceVerdict& v) {
  return detail::verify_relation(a, b, v, false);
}

struct OracleSizeError : std::runtime_error {
  std::size_t limit;
  explicit OracleSizeError(std::size_t n)
      : std::runtime_error("oracle size guard exceeded: " + std::to_string(n) + " states"),
        limit(n) {}
};

/// Greatest-fixpoint relation computed by the naive oracle: pairs over the
/// disjoint union of both state sets that survived deletion.
struct NaiveDpbbRelation {
  std::size_t na = 0, nb = 0;
  std::size_t iterations = 0;
  bool initials_related = false;
  std::vector<char> rel;  // row-major over (na+nb)^2

  bool related(std::size_t u, std::size_t v) const { return rel[u * (na + nb) + v] != 0; }
  /// Related (a-state, b-state) index pairs.
  std::vector<std::pair<std::size_t, std::size_t>> cross_pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j)
        if (related(i, na + j)) out.emplace_back(i, j);
    return out;
  }
};

namespace detail {

inline NaiveDpbbRelation naive_oracle_core(const CombinedLts& g) {
  const std::size_t n = g.n();
  NaiveDpbbRelation res;
  res.na = g.na;
  res.nb = g.nb;
  res.rel.assign(n * n, 1);

  std::vector<std::vector<std::uint32_t>> tau_succ(n);
  for (const auto& e : g.edges)
    if (e.label == CombinedLts::kTau) tau_succ[e.src].push_back(e.dst);
  auto clo = tau_closures(g);

  // States that can reach any tau cycle at all; pairs rooted elsewhere
  // satisfy the divergence conditions vacuously.
  std::vector<bool> can_diverge(n, false);
  {
    SccResult scc = strongly_connected(n, tau_succ);
    std::vector<std::uint32_t> size(scc.count, 0);
    for (std::size_t v = 0; v < n; ++v) size[scc.comp[v]]++;
    std::vector<char> cyc(scc.count, 0);
    for (std::size_t v = 0; v < n; ++v) {
      if (size[scc.comp[v]] > 1) cyc[scc.comp[v]] = 1;
      for (std::uint32_t w : tau_succ[v])
        if (w == v) cyc[scc.comp[v]] = 1;
    }
    for (std::size_t c = 0; c < scc.count; ++c) {
      if (cyc[c]) continue;
      for (std::size_t v = 0; v < n && !cyc[c]; ++v) {
        if (scc.comp[v] != c) continue;
        for (std::uint32_t w : tau_succ[v])
          if (cyc[scc.comp[w]]) {
            cyc[c] = 1;
            break;
          }
      }
    }
    for (std::size_t v = 0; v < n; ++v) can_diverge[v] = cyc[scc.comp[v]] != 0;
  }

  std::vector<char> cur = res.rel;
  auto related = [&cur, n](std::size_t u, std::size_t v) { return cur[u * n + v] != 0; };

  auto moves_matched = [&](std::uint32_t s, std::uint32_t t) {
    for (std::uint32_t i = g.first[s]; i < g.first[s + 1]; ++i) {
      const auto& e = g.edges[i];
      if (e.label == CombinedLts::kTau && related(e.dst, t)) continue;
      bool ok = false;
      for (std::uint32_t tp : clo[t]) {
        if (!related(s, tp)) continue;
        for (std::uint32_t k = g.first[tp]; k < g.first[tp + 1] && !ok; ++k) {
          const auto& f = g.edges[k];
          if (f.label == e.label && related(e.dst, f.dst)) ok = true;
        }
        if (ok) break;
      }
      if (!ok) return false;
    }
    return true;
  };
  auto moves_matched_rev = [&](std::uint32_t s, std::uint32_t t) {
    // mirror: every t --l--> t' matched from s, relation read as (s, .)
    for (std::uint32_t i = g.first[t]; i < g.first[t + 1]; ++i) {
      const auto& e = g.edges[i];
      if (e.label == CombinedLts::kTau && related(s, e.dst)) continue;
      bool ok = false;
      for (std::uint32_t sp : clo[s]) {
        if (!related(sp, t)) continue;
        for (std::uint32_t k = g.first[sp]; k < g.first[sp + 1] && !ok; ++k) {
          const auto& f = g.edges[k];
          if (f.label == e.label && related(f.dst, e.dst)) ok = true;
        }
        if (ok) break;
      }
      if (!ok) return false;
    }
    return true;
  };

  // A bad sequence for the divergence condition lives entirely in V: the
  // states still related to the anchor but not to any of its
  // tau-successors. It exists iff the start lies in V and reaches a tau
  // cycle inside V.
  std::vector<char> in_v(n, 0);
  auto bad_divergence = [&](std::uint32_t start, auto&& member) {
    if (!can_diverge[start]) return false;
    if (!member(start)) return false;
    for (std::size_t v = 0; v < n; ++v) in_v[v] = member(v) ? 1 : 0;
    std::vector<std::uint32_t> reached{start};
    std::vector<char> seen(n, 0);
    seen[start] = 1;
    for (std::size_t qi = 0; qi < reached.size(); ++qi)
      for (std::uint32_t w : tau_succ[reached[qi]])
        if (in_v[w] && !seen[w]) {
          seen[w] = 1;
          reached.push_back(w);
        }
    // cycle detection in the reached, V-internal subgraph
    std::vector<std::uint32_t> indeg(n, 0);
    for (std::uint32_t v : reached)
      for (std::uint32_t w : tau_succ[v])
        if (seen[w] && in_v[w]) indeg[w]++;
    std::vector<std::uint32_t> queue;
    for (std::uint32_t v : reached)
      if (indeg[v] == 0) queue.push_back(v);
    std::size_t removed = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      ++removed;
      for (std::uint32_t w : tau_succ[queue[qi]])
        if (seen[w] && in_v[w] && --indeg[w] == 0) queue.push_back(w);
    }
    return removed < reached.size();
  };

  for (;;) {
    ++res.iterations;
    std::vector<char> next = cur;
    bool changed = false;
    for (std::uint32_t u = 0; u < n; ++u) {
      for (std::uint32_t v = 0; v < n; ++v) {
        if (!cur[u * n + v]) continue;
        bool keep = moves_matched(u, v) && moves_matched_rev(u, v);
        if (keep) {
          keep = !bad_divergence(u, [&](std::uint32_t w) {
            if (!related(w, v)) return false;
            for (std::uint32_t t : tau_succ[v])
              if (related(w, t)) return false;
            return true;
          });
        }
        if (keep) {
          keep = !bad_divergence(v, [&](std::uint32_t w) {
            if (!related(u, w)) return false;
            for (std::uint32_t s : tau_succ[u])
              if (related(s, w)) return false;
            return true;
          });
        }
        if (!keep) {
          next[u * n + v] = 0;
          changed = true;
        }
      }
    }
    cur = std::move(next);
    if (!changed) break;
  }
  res.rel = std::move(cur);
  res.initials_related = res.rel[g.init_a * n + g.init_b] != 0;
  return res;
}

}  // namespace detail

/// Independent oracle: computes the greatest fixpoint by starting from the
/// full relation over the disjoint-union state set and deleting pairs that
/// violate any of the four transfer conditions until stable. Refuses
/// inputs beyond `size_guard` combined states.
template <class SA, class SB>
NaiveDpbbRelation naive_dpbb_oracle(const Lts<SA>& a, const Lts<SB>& b,
                                    std::size_t size_guard = 2000) {
  if (a.states.size() + b.states.size() > size_guard) throw OracleSizeError(size_guard);
  return detail::naive_oracle_core(detail::CombinedLts::build(a, b));
}

}  // namespace bf
