#include "bf/models.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace bf {

namespace {

constexpr int kMaxThreads = 16;

void require_thread_count(int n, const char* what) {
  if (n < 1) throw std::invalid_argument(std::string(what) + ": thread count must be at least 1");
  if (n > kMaxThreads) throw std::invalid_argument(std::string(what) + ": thread count exceeds 16");
}

constexpr std::array<std::string_view, kNodeCount> kNodeNames = {
    "Free", "ES", "LOE", "Shared", "LS", "EE", "SAF", "LOS", "Exclusive", "LE", "OE"};

std::string simple_tag_name(Substate::Tag t) {
  switch (t) {
    case Substate::Tag::Free:      return "Free";
    case Substate::Tag::ES1:       return "ES_1";
    case Substate::Tag::ES2:       return "ES_2";
    case Substate::Tag::ES3:       return "ES_3";
    case Substate::Tag::ES4:       return "ES_4";
    case Substate::Tag::LOE:       return "LOE";
    case Substate::Tag::Shared:    return "Shared";
    case Substate::Tag::LS1:       return "LS_1";
    case Substate::Tag::LS2:       return "LS_2";
    case Substate::Tag::EE:        return "EE";
    case Substate::Tag::LOS1:      return "LOS_1";
    case Substate::Tag::LOS2:      return "LOS_2";
    case Substate::Tag::Exclusive: return "Exclusive";
    case Substate::Tag::OE1:       return "OE_1";
    case Substate::Tag::OE2:       return "OE_2";
    default:                       return {};
  }
}

}  // namespace

std::string_view node_name(Node n) { return kNodeNames[static_cast<int>(n)]; }

std::string mask_str(std::uint16_t m, int n) {
  std::string out = "{";
  bool first = true;
  for (int p = 1; p <= n; ++p) {
    if (!mask_has(m, p)) continue;
    if (!first) out += ',';
    out += thread_name(p);
    first = false;
  }
  out += '}';
  return out;
}

std::string Substate::str(int n) const {
  switch (tag) {
    case Tag::SafU:     return "SAF_" + mask_str(set, n);
    case Tag::SafStore: return "SAF_store(" + thread_name(px) + "," + mask_str(set, n) + ")";
    case Tag::SafUndo:  return "SAF_undo(" + thread_name(px) + "," + mask_str(set, n) + ")";
    case Tag::Le:       return "LE_" + mask_str(set, n);
    default:            return simple_tag_name(tag);
  }
}

std::string ImplState::key() const {
  std::string out;
  out.reserve(2 + sub.size() * 4 + 5);
  out += static_cast<char>('I');
  out += static_cast<char>(sub.size());
  for (const Substate& t : sub) {
    out += static_cast<char>(t.tag);
    out += static_cast<char>(t.px);
    out += static_cast<char>(t.set & 0xff);
    out += static_cast<char>(t.set >> 8);
  }
  out += static_cast<char>(busy & 0xff);
  out += static_cast<char>(busy >> 8);
  out += static_cast<char>(forbidden & 0xff);
  out += static_cast<char>(forbidden >> 8);
  out += static_cast<char>(mtx ? 1 : 0);
  return out;
}

ImplState decode_impl_state(std::string_view key) {
  auto fail = [] { throw std::invalid_argument("malformed implementation state encoding"); };
  if (key.size() < 2 || key[0] != 'I') fail();
  int n = static_cast<unsigned char>(key[1]);
  if (n < 1 || n > kMaxThreads || key.size() != static_cast<std::size_t>(2 + n * 4 + 5)) fail();
  ImplState d;
  d.sub.resize(n);
  std::size_t pos = 2;
  auto u8 = [&] { return static_cast<std::uint8_t>(key[pos++]); };
  auto u16 = [&] {
    std::uint16_t lo = static_cast<std::uint8_t>(key[pos++]);
    std::uint16_t hi = static_cast<std::uint8_t>(key[pos++]);
    return static_cast<std::uint16_t>(lo | (hi << 8));
  };
  for (int i = 0; i < n; ++i) {
    d.sub[i].tag = static_cast<Substate::Tag>(u8());
    d.sub[i].px = u8();
    d.sub[i].set = u16();
  }
  d.busy = u16();
  d.forbidden = u16();
  d.mtx = u8() != 0;
  return d;
}

std::string ImplState::str() const {
  std::string out = "<";
  for (int p = 1; p <= n(); ++p) {
    if (p > 1) out += ", ";
    out += sub[p - 1].str(n());
  }
  out += " | busy=" + mask_str(busy, n());
  out += " forbidden=" + mask_str(forbidden, n());
  out += " mtx=";
  out += (mtx ? '1' : '0');
  out += '>';
  return out;
}

std::string SpecState::key() const {
  std::string out;
  out.reserve(2 + s.size());
  out += 'S';
  out += static_cast<char>(s.size());
  for (Node nd : s) out += static_cast<char>(nd);
  return out;
}

SpecState decode_spec_state(std::string_view key) {
  auto fail = [] { throw std::invalid_argument("malformed specification state encoding"); };
  if (key.size() < 2 || key[0] != 'S') fail();
  int n = static_cast<unsigned char>(key[1]);
  if (n < 1 || n > kMaxThreads || key.size() != static_cast<std::size_t>(2 + n)) fail();
  SpecState st;
  st.s.resize(n);
  for (int i = 0; i < n; ++i) {
    auto v = static_cast<unsigned char>(key[2 + i]);
    if (v >= kNodeCount) fail();
    st.s[i] = static_cast<Node>(v);
  }
  return st;
}

std::string SpecState::str() const {
  std::string out = "<";
  for (int p = 1; p <= n(); ++p) {
    if (p > 1) out += ", ";
    out += node_name(s[p - 1]);
  }
  out += '>';
  return out;
}

// ---------------------------------------------------------------------------
// Invariant sets

bool in_mutex_set(const Substate& t) {
  switch (t.tag) {
    case Substate::Tag::SafU:
    case Substate::Tag::SafStore:
    case Substate::Tag::SafUndo:
    case Substate::Tag::LOS1:
    case Substate::Tag::LOS2:
    case Substate::Tag::Exclusive:
    case Substate::Tag::Le:
    case Substate::Tag::OE2:
      return true;
    default:
      return false;
  }
}

bool in_busy_set(const Substate& t) {
  switch (t.tag) {
    case Substate::Tag::LOE:
    case Substate::Tag::Shared:
    case Substate::Tag::ES1:
    case Substate::Tag::ES4:
    case Substate::Tag::LS2:
      return true;
    default:
      return false;
  }
}

bool forces_forbidden(const Substate& t, int p) {
  switch (t.tag) {
    case Substate::Tag::LOS1:
    case Substate::Tag::LOS2:
    case Substate::Tag::Exclusive:
      return true;
    case Substate::Tag::Le:
    case Substate::Tag::SafU:
      return mask_has(t.set, p);
    case Substate::Tag::SafStore:
    case Substate::Tag::SafUndo:
      return t.px == p || mask_has(t.set, p);
    default:
      return false;
  }
}

bool mutex_invariant(const ImplState& d) {
  int in_m = 0;
  for (const Substate& t : d.sub)
    if (in_mutex_set(t)) ++in_m;
  return in_m <= 1 && (in_m == 1) == d.mtx;
}

bool busy_invariant(const ImplState& d) {
  for (int p = 1; p <= d.n(); ++p)
    if (in_busy_set(d.sub[p - 1]) != mask_has(d.busy, p)) return false;
  return true;
}

bool forbidden_invariant(const ImplState& d) {
  for (int p = 1; p <= d.n(); ++p) {
    bool expect = false;
    for (const Substate& t : d.sub)
      if (forces_forbidden(t, p)) { expect = true; break; }
    if (expect != mask_has(d.forbidden, p)) return false;
  }
  return true;
}

std::function<bool(const ImplState&)> invariant_pred(InvariantKind which) {
  switch (which) {
    case InvariantKind::Mutex:     return [](const ImplState& d) { return mutex_invariant(d); };
    case InvariantKind::Busy:      return [](const ImplState& d) { return busy_invariant(d); };
    case InvariantKind::Forbidden: return [](const ImplState& d) { return forbidden_invariant(d); };
  }
  throw std::invalid_argument("unknown invariant kind");
}

std::function<bool(const ImplState&)> all_invariants_pred() {
  return [](const ImplState& d) {
    return mutex_invariant(d) && busy_invariant(d) && forbidden_invariant(d);
  };
}

Flags derive_flags(const std::vector<Substate>& sub) {
  const int n = static_cast<int>(sub.size());
  Flags f;
  int in_m = 0;
  for (const Substate& t : sub)
    if (in_mutex_set(t)) ++in_m;
  if (in_m > 1)
    throw std::invalid_argument("derive_flags: more than one thread in the mutex-fenced set");
  f.mtx = in_m == 1;
  for (int p = 1; p <= n; ++p) {
    if (in_busy_set(sub[p - 1])) f.busy |= thread_bit(p);
    for (const Substate& t : sub) {
      if (forces_forbidden(t, p)) {
        f.forbidden |= thread_bit(p);
        break;
      }
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Implementation LPE

namespace {

using Tag = Substate::Tag;

std::string bool_str(bool b) { return b ? "true" : "false"; }

std::string store_label(const char* flag, int owner, bool value, int actor) {
  return "store(" + std::string(flag) + "(" + thread_name(owner) + "), " + bool_str(value) +
         ", " + thread_name(actor) + ")";
}

std::string load_label(const char* flag, int owner, bool value, int actor) {
  return "load(" + std::string(flag) + "(" + thread_name(owner) + "), " + bool_str(value) +
         ", " + thread_name(actor) + ")";
}

std::vector<SumValue> thread_values(int n) {
  std::vector<SumValue> out;
  out.reserve(n);
  for (int p = 1; p <= n; ++p) out.push_back({p, 0});
  return out;
}

std::vector<SumValue> thread_pair_values(int n) {
  std::vector<SumValue> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (int p = 1; p <= n; ++p)
    for (int px = 1; px <= n; ++px) out.push_back({p, px});
  return out;
}

ImplState with_sub(ImplState d, int p, Substate t) {
  d.sub[p - 1] = t;
  return d;
}

struct ImplOptions {
  bool skip_busy_store = false;  // drop the flag update of the ES_2 busy store
};

Lpe<ImplState> build_impl_lpe(int n, const ImplOptions& opt) {
  require_thread_count(n, "impl_lpe");

  Lpe<ImplState> lpe;
  lpe.initial.sub.assign(n, Substate::simple(Tag::Free));

  auto one = thread_values(n);
  auto pairs = thread_pair_values(n);
  auto dom1 = [one](const ImplState&) { return one; };
  auto dom2 = [pairs](const ImplState&) { return pairs; };
  const std::uint16_t all = full_mask(n);

  auto tag_is = [](Tag t) {
    return [t](const ImplState& d, const SumValue& e) { return d.sub[e.p - 1].tag == t; };
  };
  // Guard for the SAF store/undo families: the summation px must name the
  // flag recorded in the substate.
  auto saf_form = [](Tag t) {
    return [t](const ImplState& d, const SumValue& e) {
      const Substate& s = d.sub[e.p - 1];
      return s.tag == t && s.px == e.px;
    };
  };

  auto add = [&lpe](Summand<ImplState> s) { lpe.summands.push_back(std::move(s)); };

  auto visible = [](std::string name) {
    return [name](const ImplState&, const SumValue& e) { return ActionLabel::visible(name, e.p); };
  };
  auto tau_vis = [](std::string name) {
    return [name](const ImplState&, const SumValue& e) {
      return ActionLabel::tau_visible(name, e.p);
    };
  };

  add({"enter_shared_call", dom1, tag_is(Tag::Free), visible("enter_shared_call"),
       [](const ImplState& d, const SumValue& e) {
         return with_sub(d, e.p, Substate::simple(Tag::ES2));
       }});
  add({"enter_exclusive_call", dom1, tag_is(Tag::Free), visible("enter_exclusive_call"),
       [](const ImplState& d, const SumValue& e) {
         return with_sub(d, e.p, Substate::simple(Tag::EE));
       }});

  // ES_2 --store busy true--> ES_1. The flag update is what the
  // skip-busy-store mutation removes.
  const bool set_busy = !opt.skip_busy_store;
  add({"es2_store_busy_true", dom1, tag_is(Tag::ES2),
       [](const ImplState&, const SumValue& e) {
         return ActionLabel::internal(store_label("Busy", e.p, true, e.p));
       },
       [set_busy](const ImplState& d, const SumValue& e) {
         ImplState r = with_sub(d, e.p, Substate::simple(Tag::ES1));
         if (set_busy) r.busy |= thread_bit(e.p);
         return r;
       }});
  add({"es1_load_forbidden_true", dom1,
       [](const ImplState& d, const SumValue& e) {
         return d.sub[e.p - 1].tag == Tag::ES1 && mask_has(d.forbidden, e.p);
       },
       [](const ImplState&, const SumValue& e) {
         return ActionLabel::internal(load_label("Forbidden", e.p, true, e.p));
       },
       [](const ImplState& d, const SumValue& e) {
         return with_sub(d, e.p, Substate::simple(Tag::ES4));
       }});
  add({"es1_load_forbidden_false", dom1,
       [](const ImplState& d, const SumValue& e) {
         return d.sub[e.p - 1].tag == Tag::ES1 && !mask_has(d.forbidden, e.p);
       },
       tau_vis("tau_es_loe"),
       [](const ImplState& d, const SumValue& e) {
         return with_sub(d, e.p, Substate::simple(Tag::LOE));
       }});
  add({"es4_store_busy_false", dom1, tag_is(Tag::ES4),
       [](const ImplState&, const SumValue& e) {
         return ActionLabel::internal(store_label("Busy", e.p, false, e.p));
       },
       [](const ImplState& d, const SumValue& e) {
         ImplState r = with_sub(d, e.p, Substate::simple(Tag::ES3));
         r.busy &= static_cast<std::uint16_t>(~thread_bit(e.p));
         return r;
       }});
  add({"es3_improbable", dom1, tag_is(Tag::ES3),
       [](const ImplState&, const SumValue&) { return ActionLabel::internal("improbable"); },
       [](const ImplState& d, const SumValue& e) {
         return with_sub(d, e.p, Substate::simple(Tag::ES2));
       }});
  add({"enter_shared_return", dom1, tag_is(Tag::LOE), visible("enter_shared_return"),
       [](const ImplState& d, const SumValue& e) {
         return with_sub(d, e.p, Substate::simple(Tag::Shared));
       }});

  add({"leave_shared_call", dom1, tag_is(Tag::Shared), visible("leave_shared_call"),
       [](const ImplState& d, const SumValue& e) {
         return with_sub(d, e.p, Substate::simple(Tag::LS2));
       }});
  add({"ls2_store_busy_false", dom1, tag_is(Tag::LS2),
       [](const ImplState&, const SumValue& e) {
         return ActionLabel::internal(store_label("Busy", e.p, false, e.p));
       },
       [](const ImplState& d, const SumValue& e) {
         ImplState r = with_sub(d, e.p, Substate::simple(Tag::LS1));
         r.busy &= static_cast<std::uint16_t>(~thread_bit(e.p));
         return r;
       }});
  add({"leave_shared_return", dom1, tag_is(Tag::LS1), visible("leave_shared_return"),
       [](const ImplState& d, const SumValue& e) {
         return with_sub(d, e.p, Substate::simple(Tag::Free));
       }});

  add({"ee_lock", dom1,
       [](const ImplState& d, const SumValue& e) {
         return d.sub[e.p - 1].tag == Tag::EE && !d.mtx;
       },
       tau_vis("tau_ee_saf"),
       [](const ImplState& d, const SumValue& e) {
         ImplState r = with_sub(d, e.p, Substate::saf(0));
         r.mtx = true;
         return r;
       }});

  add({"saf_store_forbidden_true", dom2, tag_is(Tag::SafU),
       [](const ImplState&, const SumValue& e) {
         return ActionLabel::internal(store_label("Forbidden", e.px, true, e.p));
       },
       [](const ImplState& d, const SumValue& e) {
         ImplState r = with_sub(d, e.p, Substate::saf_store(e.px, d.sub[e.p - 1].set));
         r.forbidden |= thread_bit(e.px);
         return r;
       }});
  add({"saf_load_busy_true", dom2,
       [saf_form](const ImplState& d, const SumValue& e) {
         return saf_form(Tag::SafStore)(d, e) && mask_has(d.busy, e.px);
       },
       [](const ImplState&, const SumValue& e) {
         return ActionLabel::internal(load_label("Busy", e.px, true, e.p));
       },
       [](const ImplState& d, const SumValue& e) {
         return with_sub(d, e.p, Substate::saf_undo(e.px, d.sub[e.p - 1].set));
       }});
  add({"saf_load_busy_false_last", dom2,
       [saf_form, all](const ImplState& d, const SumValue& e) {
         return saf_form(Tag::SafStore)(d, e) && !mask_has(d.busy, e.px) &&
                d.sub[e.p - 1].set == static_cast<std::uint16_t>(all & ~thread_bit(e.px));
       },
       tau_vis("tau_saf_los"),
       [](const ImplState& d, const SumValue& e) {
         return with_sub(d, e.p, Substate::simple(Tag::LOS2));
       }});
  add({"saf_load_busy_false_step", dom2,
       [saf_form, all](const ImplState& d, const SumValue& e) {
         return saf_form(Tag::SafStore)(d, e) && !mask_has(d.busy, e.px) &&
                d.sub[e.p - 1].set != static_cast<std::uint16_t>(all & ~thread_bit(e.px));
       },
       [](const ImplState&, const SumValue& e) {
         return ActionLabel::internal(load_label("Busy", e.px, false, e.p));
       },
       [](const ImplState& d, const SumValue& e) {
         return with_sub(d, e.p,
                         Substate::saf(d.sub[e.p - 1].set | thread_bit(e.px)));
       }});
  add({"saf_store_forbidden_false", dom2, saf_form(Tag::SafStore),
       [](const ImplState&, const SumValue& e) {
         return ActionLabel::internal(store_label("Forbidden", e.px, false, e.p));
       },
       [](const ImplState& d, const SumValue& e) {
         ImplState r = with_sub(
             d, e.p, Substate::saf(d.sub[e.p - 1].set & static_cast<std::uint16_t>(~thread_bit(e.px))));
         r.forbidden &= static_cast<std::uint16_t>(~thread_bit(e.px));
         return r;
       }});
  add({"saf_undo_store_forbidden_false", dom2, saf_form(Tag::SafUndo),
       [](const ImplState&, const SumValue& e) {
         return ActionLabel::internal(store_label("Forbidden", e.px, false, e.p));
       },
       [](const ImplState& d, const SumValue& e) {
         ImplState r = with_sub(
             d, e.p, Substate::saf(d.sub[e.p - 1].set & static_cast<std::uint16_t>(~thread_bit(e.px))));
         r.forbidden &= static_cast<std::uint16_t>(~thread_bit(e.px));
         return r;
       }});

  add({"los2_internal", dom1, tag_is(Tag::LOS2),
       [](const ImplState&, const SumValue&) { return ActionLabel::internal("internal"); },
       [](const ImplState& d, const SumValue& e) {
         return with_sub(d, e.p, Substate::simple(Tag::LOS1));
       }});
  add({"enter_exclusive_return", dom1, tag_is(Tag::LOS1), visible("enter_exclusive_return"),
       [](const ImplState& d, const SumValue& e) {
         return with_sub(d, e.p, Substate::simple(Tag::Exclusive));
       }});

  add({"leave_exclusive_call", dom1, tag_is(Tag::Exclusive), visible("leave_exclusive_call"),
       [all](const ImplState& d, const SumValue& e) {
         return with_sub(d, e.p, Substate::le(all));
       }});
  add({"le_store_forbidden_false_last", dom2,
       [](const ImplState& d, const SumValue& e) {
         const Substate& s = d.sub[e.p - 1];
         return s.tag == Tag::Le && s.set == thread_bit(e.px);
       },
       tau_vis("tau_le_oe"),
       [](const ImplState& d, const SumValue& e) {
         ImplState r = with_sub(d, e.p, Substate::simple(Tag::OE2));
         r.forbidden &= static_cast<std::uint16_t>(~thread_bit(e.px));
         return r;
       }});
  add({"le_store_forbidden_false", dom2,
       [](const ImplState& d, const SumValue& e) {
         const Substate& s = d.sub[e.p - 1];
         return s.tag == Tag::Le && s.set != thread_bit(e.px);
       },
       [](const ImplState&, const SumValue& e) {
         return ActionLabel::internal(store_label("Forbidden", e.px, false, e.p));
       },
       [](const ImplState& d, const SumValue& e) {
         ImplState r = with_sub(
             d, e.p, Substate::le(d.sub[e.p - 1].set & static_cast<std::uint16_t>(~thread_bit(e.px))));
         r.forbidden &= static_cast<std::uint16_t>(~thread_bit(e.px));
         return r;
       }});
  add({"le_store_forbidden_true", dom2, tag_is(Tag::Le),
       [](const ImplState&, const SumValue& e) {
         return ActionLabel::internal(store_label("Forbidden", e.px, true, e.p));
       },
       [](const ImplState& d, const SumValue& e) {
         ImplState r = with_sub(d, e.p, Substate::le(d.sub[e.p - 1].set | thread_bit(e.px)));
         r.forbidden |= thread_bit(e.px);
         return r;
       }});

  add({"oe2_unlock", dom1, tag_is(Tag::OE2),
       [](const ImplState&, const SumValue& e) {
         return ActionLabel::internal("unlock(" + thread_name(e.p) + ")");
       },
       [](const ImplState& d, const SumValue& e) {
         ImplState r = with_sub(d, e.p, Substate::simple(Tag::OE1));
         r.mtx = false;
         return r;
       }});
  add({"leave_exclusive_return", dom1, tag_is(Tag::OE1), visible("leave_exclusive_return"),
       [](const ImplState& d, const SumValue& e) {
         return with_sub(d, e.p, Substate::simple(Tag::Free));
       }});

  return lpe;
}

// ---------------------------------------------------------------------------
// Specification LPE

struct SpecOptions {
  bool drop_es_improbable = false;
  bool drop_saf_improbable = false;
  bool drop_le_improbable = false;
  bool swap_es_guard = false;
};

bool any_at(const SpecState& st, std::initializer_list<Node> nodes) {
  for (Node nd : st.s)
    for (Node want : nodes)
      if (nd == want) return true;
  return false;
}

SpecState with_node(SpecState st, int p, Node nd) {
  st.s[p - 1] = nd;
  return st;
}

Lpe<SpecState> build_spec_lpe(int n, const SpecOptions& opt) {
  require_thread_count(n, "spec_lpe");

  Lpe<SpecState> lpe;
  lpe.initial.s.assign(n, Node::Free);

  auto one = thread_values(n);
  auto dom1 = [one](const SpecState&) { return one; };

  auto add = [&lpe](Summand<SpecState> s) { lpe.summands.push_back(std::move(s)); };
  auto at = [](Node nd) {
    return [nd](const SpecState& st, const SumValue& e) { return st.s[e.p - 1] == nd; };
  };
  auto move_to = [](Node nd) {
    return [nd](const SpecState& st, const SumValue& e) { return with_node(st, e.p, nd); };
  };
  auto self = [](const SpecState& st, const SumValue&) { return st; };
  auto visible = [](std::string name) {
    return [name](const SpecState&, const SumValue& e) { return ActionLabel::visible(name, e.p); };
  };
  auto tau_vis = [](std::string name) {
    return [name](const SpecState&, const SumValue& e) {
      return ActionLabel::tau_visible(name, e.p);
    };
  };
  auto improbable = [](const SpecState&, const SumValue&) {
    return ActionLabel::internal("improbable");
  };

  // Readers side. The ES self-loop fires only while a writer holds or is
  // acquiring the lock; the step to LOE only while none does.
  std::function<bool(const SpecState&, const SumValue&)> es_busy_writer =
      [at](const SpecState& st, const SumValue& e) {
        return at(Node::ES)(st, e) && any_at(st, {Node::LOS, Node::Exclusive});
      };
  std::function<bool(const SpecState&, const SumValue&)> es_no_writer =
      [at](const SpecState& st, const SumValue& e) {
        return at(Node::ES)(st, e) && !any_at(st, {Node::LOS, Node::Exclusive});
      };
  if (opt.swap_es_guard) std::swap(es_busy_writer, es_no_writer);

  add({"spec_enter_shared_call", dom1, at(Node::Free), visible("enter_shared_call"),
       move_to(Node::ES)});
  if (!opt.drop_es_improbable)
    add({"spec_es_improbable", dom1, es_busy_writer, improbable, self});
  add({"spec_es_loe", dom1, es_no_writer, tau_vis("tau_es_loe"), move_to(Node::LOE)});
  add({"spec_enter_shared_return", dom1, at(Node::LOE), visible("enter_shared_return"),
       move_to(Node::Shared)});
  add({"spec_leave_shared_call", dom1, at(Node::Shared), visible("leave_shared_call"),
       move_to(Node::LS)});
  add({"spec_leave_shared_return", dom1, at(Node::LS), visible("leave_shared_return"),
       move_to(Node::Free)});

  // Writer side.
  add({"spec_enter_exclusive_call", dom1, at(Node::Free), visible("enter_exclusive_call"),
       move_to(Node::EE)});
  add({"spec_ee_saf", dom1,
       [at](const SpecState& st, const SumValue& e) {
         return at(Node::EE)(st, e) &&
                !any_at(st, {Node::SAF, Node::LOS, Node::LE, Node::Exclusive});
       },
       tau_vis("tau_ee_saf"), move_to(Node::SAF)});
  if (!opt.drop_saf_improbable)
    add({"spec_saf_improbable", dom1, at(Node::SAF), improbable, self});
  add({"spec_saf_los", dom1,
       [at](const SpecState& st, const SumValue& e) {
         return at(Node::SAF)(st, e) && !any_at(st, {Node::LOE, Node::Shared});
       },
       tau_vis("tau_saf_los"), move_to(Node::LOS)});
  add({"spec_enter_exclusive_return", dom1, at(Node::LOS), visible("enter_exclusive_return"),
       move_to(Node::Exclusive)});
  add({"spec_leave_exclusive_call", dom1, at(Node::Exclusive), visible("leave_exclusive_call"),
       move_to(Node::LE)});
  if (!opt.drop_le_improbable)
    add({"spec_le_improbable", dom1, at(Node::LE), improbable, self});
  add({"spec_le_oe", dom1, at(Node::LE), tau_vis("tau_le_oe"), move_to(Node::OE)});
  add({"spec_leave_exclusive_return", dom1, at(Node::OE), visible("leave_exclusive_return"),
       move_to(Node::Free)});

  return lpe;
}

const std::vector<std::string> kMutations = {
    "drop-spec-improbable-saf", "drop-spec-improbable-le", "drop-spec-improbable-es",
    "skip-busy-store", "swap-es-guard"};

[[noreturn]] void unknown_mutation(const std::string& name) {
  std::string msg = "unknown mutation '" + name + "'; valid mutations:";
  for (const auto& m : kMutations) msg += " " + m;
  throw std::invalid_argument(msg);
}

}  // namespace

Lpe<ImplState> impl_lpe(int n) { return build_impl_lpe(n, {}); }

Lpe<SpecState> spec_lpe(int n) { return build_spec_lpe(n, {}); }

Lpe<ImplState> mutate_impl(int n, const std::string& name) {
  if (name == "skip-busy-store") return build_impl_lpe(n, {.skip_busy_store = true});
  unknown_mutation(name);
}

Lpe<SpecState> mutate_spec(int n, const std::string& name) {
  SpecOptions opt;
  if (name == "drop-spec-improbable-saf")
    opt.drop_saf_improbable = true;
  else if (name == "drop-spec-improbable-le")
    opt.drop_le_improbable = true;
  else if (name == "drop-spec-improbable-es")
    opt.drop_es_improbable = true;
  else if (name == "swap-es-guard")
    opt.swap_es_guard = true;
  else
    unknown_mutation(name);
  return build_spec_lpe(n, opt);
}

const std::vector<std::string>& mutation_names() { return kMutations; }

bool mutation_targets_spec(const std::string& name) {
  if (name == "skip-busy-store") return false;
  if (std::find(kMutations.begin(), kMutations.end(), name) == kMutations.end())
    unknown_mutation(name);
  return true;
}

}  // namespace bf
