#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "bf/lpe.hpp"

namespace bf {

/// Nodes of the external behavior, one per protocol phase.
enum class Node : std::uint8_t {
  Free, ES, LOE, Shared, LS, EE, SAF, LOS, Exclusive, LE, OE
};
constexpr int kNodeCount = 11;
std::string_view node_name(Node n);

// Thread-set bitmasks: bit p-1 stands for thread p.
inline std::uint16_t thread_bit(int p) { return static_cast<std::uint16_t>(1u << (p - 1)); }
inline bool mask_has(std::uint16_t m, int p) { return (m & thread_bit(p)) != 0; }
inline std::uint16_t full_mask(int n) { return static_cast<std::uint16_t>((1u << n) - 1); }
std::string mask_str(std::uint16_t m, int n);

/// Per-thread protocol location. SafU / SafStore / SafUndo carry the set
/// of threads already locked out (strict subset of all threads) and, for
/// the store/undo forms, the thread whose forbidden flag is in flight.
/// Le carries the nonempty set of threads whose forbidden flag is still
/// set while the writer backs out.
struct Substate {
  enum class Tag : std::uint8_t {
    Free, ES1, ES2, ES3, ES4, LOE, Shared, LS1, LS2, EE,
    SafU, SafStore, SafUndo, LOS1, LOS2, Exclusive, Le, OE1, OE2
  };
  Tag tag = Tag::Free;
  std::uint8_t px = 0;     // SafStore/SafUndo only
  std::uint16_t set = 0;   // SafU/SafStore/SafUndo/Le only

  auto operator<=>(const Substate&) const = default;

  static constexpr Substate simple(Tag t) { return {t, 0, 0}; }
  static Substate saf(std::uint16_t u) { return {Tag::SafU, 0, u}; }
  static Substate saf_store(int px, std::uint16_t u) {
    return {Tag::SafStore, static_cast<std::uint8_t>(px), u};
  }
  static Substate saf_undo(int px, std::uint16_t u) {
    return {Tag::SafUndo, static_cast<std::uint8_t>(px), u};
  }
  static Substate le(std::uint16_t u) { return {Tag::Le, 0, u}; }

  std::string str(int n) const;
};

/// State of the linearized implementation: one substate per thread plus
/// the flag maps and the mutex bit.
struct ImplState {
  std::vector<Substate> sub;   // sub[i] is thread i+1
  std::uint16_t busy = 0;
  std::uint16_t forbidden = 0;
  bool mtx = false;

  bool operator==(const ImplState&) const = default;
  int n() const { return static_cast<int>(sub.size()); }
  std::string key() const;   // canonical encoding, thread-index order
  std::string str() const;
};
ImplState decode_impl_state(std::string_view key);

/// State of the external behavior: the node each thread occupies.
struct SpecState {
  std::vector<Node> s;

  bool operator==(const SpecState&) const = default;
  int n() const { return static_cast<int>(s.size()); }
  std::string key() const;
  std::string str() const;
};
SpecState decode_spec_state(std::string_view key);

/// Linear process equation of the implementation for n threads. All
/// substates start Free, both flag maps false, mutex free.
Lpe<ImplState> impl_lpe(int n);

/// Linear process equation of the external behavior for n threads.
Lpe<SpecState> spec_lpe(int n);

// Named model mutations (negative-test generators).
Lpe<ImplState> mutate_impl(int n, const std::string& name);
Lpe<SpecState> mutate_spec(int n, const std::string& name);
const std::vector<std::string>& mutation_names();
bool mutation_targets_spec(const std::string& name);

enum class InvariantKind { Mutex, Busy, Forbidden };

// The three flag/mutex consistency laws, decidable by direct set
// membership over the substates.
bool mutex_invariant(const ImplState& d);
bool busy_invariant(const ImplState& d);
bool forbidden_invariant(const ImplState& d);
std::function<bool(const ImplState&)> invariant_pred(InvariantKind which);
std::function<bool(const ImplState&)> all_invariants_pred();

// Substate-set memberships used by the invariants.
bool in_mutex_set(const Substate& t);                 // M
bool in_busy_set(const Substate& t);                  // B
bool forces_forbidden(const Substate& t, int p);      // t in F(p)

struct Flags {
  std::uint16_t busy = 0;
  std::uint16_t forbidden = 0;
  bool mtx = false;
  bool operator==(const Flags&) const = default;
};

/// The unique flag assignment implied by the invariants. Throws
/// std::invalid_argument when more than one thread sits in the
/// mutex-fenced set.
Flags derive_flags(const std::vector<Substate>& sub);

}  // namespace bf
