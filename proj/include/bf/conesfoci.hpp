#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "bf/models.hpp"

namespace bf {

/// Substate-to-node mapping: each substate goes to the node whose substate
/// family contains it.
Node substate_node(const Substate& t);

/// State mapping h: applies the substate mapping pointwise; flags are
/// dropped.
SpecState state_mapping(const ImplState& d);

/// Sub-focus condition for one thread.
bool sub_focus(const Substate& t, int p);

/// Focus condition: every thread sits at its sub-focus substate.
bool focus(const ImplState& d);

enum class ConeLabel { Divergent, NonDivergent };
std::string_view cone_label_name(ConeLabel c);

/// A cone is divergent iff some thread is in SAF or LE, or some thread is
/// in ES while another is in LOS or Exclusive.
ConeLabel cone_label(const SpecState& s);

/// Strict well-founded order on implementation states: the pointwise
/// product of the per-thread substate orders (every component equal or
/// below, at least one strictly below). The per-thread orders are the
/// transitive closures of a fixed generating relation, checked acyclic by
/// check_order_wellfounded.
class StateOrder {
 public:
  explicit StateOrder(int n);
  StateOrder(int n, const std::vector<std::pair<Substate, Substate>>& extra_edges);

  int n() const { return n_; }
  /// a strictly below b in thread `p`'s substate order.
  bool substate_lt(int p, const Substate& a, const Substate& b) const;
  bool lt(const ImplState& a, const ImplState& b) const;

 private:
  int n_;
  std::vector<Substate> universe_;
  std::vector<std::vector<std::vector<bool>>> lt_;  // [thread-1][a][b]
  int index_of(const Substate& t) const;
};

/// Convenience wrapper around StateOrder for one-off comparisons.
bool order_lt(const ImplState& a, const ImplState& b);

/// All substates for n threads, in canonical order.
std::vector<Substate> enumerate_substates(int n);

/// Searches the per-thread generator graphs (plus optional injected edges)
/// for a cycle; empty result means acyclic.
std::optional<std::vector<Substate>> find_order_cycle(
    int n, const std::vector<std::pair<Substate, Substate>>& extra = {});

struct OrderVerdict {
  bool well_founded = true;
  std::string detail;
  std::vector<Substate> cycle;
};

/// Confirms the generator graph is acyclic (hence the order well-founded
/// on the finite substate universe) and that the strict order is
/// irreflexive on the reachable states of the implementation.
OrderVerdict check_order_wellfounded(int n, std::size_t state_limit = 5'000'000);

enum class Requirement { I, II, III, IV, V, VI, IDelta, IIDelta, IIIDelta, IVDelta };
constexpr int kRequirementCount = 10;
std::string_view requirement_name(Requirement r);

struct RequirementResult {
  bool pass = true;
  std::string state;   // first failing state, BFS order
  std::string detail;
};

struct RequirementReport {
  std::array<RequirementResult, kRequirementCount> results;
  std::size_t states_checked = 0;
  /// Set when a hypothesis of the framework fails (invariant violated at a
  /// reachable state, or the mapped initial states differ); reported
  /// distinctly from requirement failures.
  std::optional<std::string> precondition_failure;

  RequirementResult& operator[](Requirement r) { return results[static_cast<int>(r)]; }
  const RequirementResult& operator[](Requirement r) const {
    return results[static_cast<int>(r)];
  }
  bool all_pass() const;
};

/// Evaluates the ten requirements literally on every reachable
/// implementation state satisfying the invariant, quantifying over
/// summands and summation values. Action instances are paired between the
/// models by label name and thread parameters.
RequirementReport check_requirements(const Lpe<ImplState>& impl, const Lpe<SpecState>& spec,
                                     const std::function<bool(const ImplState&)>& invariant,
                                     std::size_t state_limit);

/// Concrete internal path from a focus state with `p_saf` at SAF with no
/// lockouts to a state enabling the step to LOS: per remaining thread the
/// four-step sequence when it is inside ES, the two-step sequence
/// otherwise, then the final store of p_saf's own forbidden flag. Every
/// step is validated against the enabled transitions.
std::vector<Step<ImplState>> witness_int_path(const ImplState& d, int p_saf);

}  // namespace bf
