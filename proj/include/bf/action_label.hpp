#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace bf {

/// Classification of transition labels.
///
/// Visible labels are the externally observable actions (the call/return
/// events of the lock interface). TauVisible labels are silent steps that
/// are still part of the action alphabet: they correspond to the guarded,
/// externally meaningful tau edges shared between implementation and
/// specification. Int labels are internal steps that never leave their
/// cone; they are silent and excluded from the alphabet. Tau is the
/// distinguished silent label produced by hiding.
enum class LabelKind : std::uint8_t { Visible, TauVisible, Int, Tau };

struct ActionLabel {
  LabelKind kind = LabelKind::Tau;
  std::string name;
  std::vector<int> params;  // thread indices, 1-based

  auto operator<=>(const ActionLabel&) const = default;

  bool is_silent() const { return kind == LabelKind::Tau; }
  bool is_internal() const { return kind == LabelKind::Int; }
  /// True for labels that belong to the action alphabet Act (Visible and
  /// TauVisible); Int and Tau are excluded.
  bool in_act() const {
    return kind == LabelKind::Visible || kind == LabelKind::TauVisible;
  }

  std::string str() const;
  /// Stable text key: distinguishes labels that render identically but
  /// differ in kind.
  std::string key() const;

  static ActionLabel visible(std::string name, int p) {
    return {LabelKind::Visible, std::move(name), {p}};
  }
  static ActionLabel tau_visible(std::string name, int p) {
    return {LabelKind::TauVisible, std::move(name), {p}};
  }
  static ActionLabel internal(std::string name) {
    return {LabelKind::Int, std::move(name), {}};
  }
  static ActionLabel tau() { return {}; }
};

inline std::string thread_name(int p) { return "p" + std::to_string(p); }

inline std::string ActionLabel::str() const {
  switch (kind) {
    case LabelKind::Tau:
      return "tau";
    case LabelKind::Int:
      return name;
    default: {
      std::string out = name;
      out += '(';
      for (std::size_t i = 0; i < params.size(); ++i) {
        if (i > 0) out += ',';
        out += thread_name(params[i]);
      }
      out += ')';
      return out;
    }
  }
}

inline std::string ActionLabel::key() const {
  std::string out(1, static_cast<char>('0' + static_cast<int>(kind)));
  out += str();
  return out;
}

}  // namespace bf
