#pragma once

// Abstract objects and the value store. An object tracks a map of exactly
// known properties plus three summaries for properties only known by key
// category (numeric keys, special keys, all other keys). Store slots carry
// a multiplicity bit so strong updates stay sound.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "njs/domains.hpp"
#include "njs/ecma.hpp"
#include "njs/ir.hpp"
#include "njs/tags.hpp"

namespace njs::dom {

struct PropVal {
  BValue val;
  bool maybe_absent = false;
  bool enumerable = true;

  // A property that can hold no value at all is definitely absent.
  bool definitely_absent() const { return val.is_bot(); }
};

inline bool leq(const PropVal& a, const PropVal& b) {
  return leq(a.val, b.val) && (!a.maybe_absent || b.maybe_absent) &&
         (!a.enumerable || b.enumerable);
}
inline PropVal join(const PropVal& a, const PropVal& b) {
  return {join(a.val, b.val), a.maybe_absent || b.maybe_absent,
          a.enumerable || b.enumerable};
}

// Abstract environments bind a variable to the set of cells it may name;
// paths that captured different binding instances join pointwise.
using AbsEnv = std::map<std::string, AddrSet>;

inline bool leq_env(const AbsEnv& a, const AbsEnv& b) {
  for (const auto& [x, s] : a) {
    auto it = b.find(x);
    if (it == b.end() || !leq(s, it->second)) return false;
  }
  return true;
}

inline AbsEnv join_env(const AbsEnv& a, const AbsEnv& b) {
  AbsEnv out = a;
  for (const auto& [x, s] : b) {
    auto [it, fresh] = out.emplace(x, s);
    if (!fresh) it->second = join(it->second, s);
  }
  return out;
}

struct AbsClosure {
  AbsEnv env;
  ir::MethPtr meth;

  friend bool operator==(const AbsClosure& a, const AbsClosure& b) {
    return a.meth->id == b.meth->id && a.env == b.env;
  }
  friend bool operator<(const AbsClosure& a, const AbsClosure& b) {
    if (a.meth->id != b.meth->id) return a.meth->id < b.meth->id;
    return a.env < b.env;
  }
};

struct AbsObject {
  ClassTag cls = ClassTag::Object;
  std::map<std::string, PropVal> exact;
  BValue num_summary;    // values under untracked numeric keys
  BValue spl_summary;    // values under untracked special keys
  BValue other_summary;  // values under every other untracked key
  std::vector<AbsClosure> closures;  // sorted, unique
  std::uint32_t natives = 0;         // bitmask over NativeId
  AddrSet proto_addrs;
  bool proto_null = false;
  BValue prim;  // wrapper payload for String/Boolean/Number classes

  const BValue& summary(StrCat c) const {
    switch (c) {
      case StrCat::Num: return num_summary;
      case StrCat::Spl: return spl_summary;
      default: return other_summary;
    }
  }
  BValue& summary(StrCat c) {
    switch (c) {
      case StrCat::Num: return num_summary;
      case StrCat::Spl: return spl_summary;
      default: return other_summary;
    }
  }

  void add_closure(AbsClosure c) {
    auto it = std::lower_bound(closures.begin(), closures.end(), c);
    if (it == closures.end() || !(*it == c)) closures.insert(it, std::move(c));
  }
  bool has_native(NativeId id) const {
    return natives & (1u << static_cast<unsigned>(id));
  }
  void add_native(NativeId id) {
    if (id != NativeId::None) natives |= 1u << static_cast<unsigned>(id);
  }
  bool callable() const { return !closures.empty() || natives != 0; }

  friend bool operator==(const AbsObject& a, const AbsObject& b) {
    return a.cls == b.cls && a.exact == b.exact &&
           a.num_summary == b.num_summary && a.spl_summary == b.spl_summary &&
           a.other_summary == b.other_summary && a.closures == b.closures &&
           a.natives == b.natives && a.proto_addrs == b.proto_addrs &&
           a.proto_null == b.proto_null && a.prim == b.prim;
  }
  friend bool operator!=(const AbsObject& a, const AbsObject& b) {
    return !(a == b);
  }
};

inline bool operator==(const PropVal& a, const PropVal& b) {
  return a.val == b.val && a.maybe_absent == b.maybe_absent &&
         a.enumerable == b.enumerable;
}

inline bool leq(const AbsObject& a, const AbsObject& b) {
  if (a.cls != b.cls) return false;
  for (const auto& [k, pa] : a.exact) {
    auto it = b.exact.find(k);
    if (it != b.exact.end()) {
      if (!leq(pa, it->second)) return false;
    } else {
      if (!leq(pa.val, b.summary(classify_str(k)))) return false;
    }
  }
  for (const auto& [k, pb] : b.exact) {
    if (a.exact.count(k)) continue;
    if (!pb.maybe_absent) return false;  // a gives no presence guarantee
    if (!leq(a.summary(classify_str(k)), pb.val)) return false;
  }
  if (!leq(a.num_summary, b.num_summary)) return false;
  if (!leq(a.spl_summary, b.spl_summary)) return false;
  if (!leq(a.other_summary, b.other_summary)) return false;
  if (!std::includes(b.closures.begin(), b.closures.end(), a.closures.begin(),
                     a.closures.end()))
    return false;
  if (a.natives & ~b.natives) return false;
  if (!leq(a.proto_addrs, b.proto_addrs)) return false;
  if (a.proto_null && !b.proto_null) return false;
  return leq(a.prim, b.prim);
}

inline AbsObject join(const AbsObject& a, const AbsObject& b) {
  if (a.cls != b.cls)
    throw std::logic_error("class mismatch joining objects at one address");
  AbsObject out;
  out.cls = a.cls;
  for (const auto& [k, pa] : a.exact) {
    auto it = b.exact.find(k);
    if (it != b.exact.end()) {
      out.exact.emplace(k, join(pa, it->second));
    } else {
      const BValue& s = b.summary(classify_str(k));
      out.exact.emplace(k, PropVal{join(pa.val, s), true,
                                   pa.enumerable || !s.is_bot()});
    }
  }
  for (const auto& [k, pb] : b.exact) {
    if (out.exact.count(k)) continue;
    const BValue& s = a.summary(classify_str(k));
    out.exact.emplace(k, PropVal{join(pb.val, s), true,
                                 pb.enumerable || !s.is_bot()});
  }
  out.num_summary = join(a.num_summary, b.num_summary);
  out.spl_summary = join(a.spl_summary, b.spl_summary);
  out.other_summary = join(a.other_summary, b.other_summary);
  out.closures = a.closures;
  for (const auto& c : b.closures) out.add_closure(c);
  out.natives = a.natives | b.natives;
  out.proto_addrs = join(a.proto_addrs, b.proto_addrs);
  out.proto_null = a.proto_null || b.proto_null;
  out.prim = join(a.prim, b.prim);
  return out;
}

// ------------------------------------------------------------------- store

struct OSlot {
  std::variant<BValue, AbsObject> payload;
  bool many = false;  // true once the address has been allocated twice

  bool is_cell() const { return payload.index() == 0; }
  friend bool operator==(const OSlot& a, const OSlot& b) {
    return a.many == b.many && a.payload == b.payload;
  }
};

inline bool leq(const OSlot& a, const OSlot& b) {
  if (a.many && !b.many) return false;
  if (a.payload.index() != b.payload.index()) return false;
  if (a.is_cell())
    return leq(std::get<BValue>(a.payload), std::get<BValue>(b.payload));
  return leq(std::get<AbsObject>(a.payload), std::get<AbsObject>(b.payload));
}

inline OSlot join(const OSlot& a, const OSlot& b) {
  if (a.payload.index() != b.payload.index())
    throw std::logic_error("cell joined with object at one address");
  OSlot out;
  out.many = a.many || b.many;
  if (a.is_cell())
    out.payload = join(std::get<BValue>(a.payload), std::get<BValue>(b.payload));
  else
    out.payload =
        join(std::get<AbsObject>(a.payload), std::get<AbsObject>(b.payload));
  return out;
}

struct AbsStore {
  std::map<AbsAddr, OSlot> slots;

  bool has(const AbsAddr& a) const { return slots.count(a) != 0; }

  const OSlot& slot(const AbsAddr& a) const {
    auto it = slots.find(a);
    if (it == slots.end())
      throw std::logic_error("read of unmapped address");
    return it->second;
  }
  OSlot& slot(const AbsAddr& a) {
    auto it = slots.find(a);
    if (it == slots.end())
      throw std::logic_error("read of unmapped address");
    return it->second;
  }

  const BValue& cell(const AbsAddr& a) const {
    return std::get<BValue>(slot(a).payload);
  }
  const AbsObject& obj(const AbsAddr& a) const {
    return std::get<AbsObject>(slot(a).payload);
  }
  AbsObject& obj_mut(const AbsAddr& a) {
    return std::get<AbsObject>(slot(a).payload);
  }

  // Allocation: a second allocation at the same abstract address folds the
  // payloads together and drops the slot to summary multiplicity.
  void alloc(const AbsAddr& a, OSlot fresh) {
    auto it = slots.find(a);
    if (it == slots.end()) {
      slots.emplace(a, std::move(fresh));
    } else {
      it->second = join(it->second, fresh);
      it->second.many = true;
    }
  }

  // Weak or strong cell write depending on slot multiplicity.
  void write_cell(const AbsAddr& a, const BValue& v) {
    OSlot& s = slot(a);
    BValue& cur = std::get<BValue>(s.payload);
    cur = s.many ? join(cur, v) : v;
  }

  friend bool operator==(const AbsStore& a, const AbsStore& b) {
    return a.slots == b.slots;
  }
  friend bool operator!=(const AbsStore& a, const AbsStore& b) {
    return !(a.slots == b.slots);
  }
};

inline bool leq(const AbsStore& a, const AbsStore& b) {
  for (const auto& [addr, sa] : a.slots) {
    auto it = b.slots.find(addr);
    if (it == b.slots.end() || !leq(sa, it->second)) return false;
  }
  return true;
}

inline AbsStore join(const AbsStore& a, const AbsStore& b) {
  AbsStore out = a;
  for (const auto& [addr, sb] : b.slots) {
    auto it = out.slots.find(addr);
    if (it == out.slots.end())
      out.slots.emplace(addr, sb);
    else
      it->second = join(it->second, sb);
  }
  return out;
}

// -------------------------------------------------------- property access

// Join of everything the chain can yield for the key; undefined joins in
// whenever the whole chain may miss.
inline BValue lookup_prop(const AbsStore& store, const AddrSet& bases,
                          const AbsStr& key) {
  BValue out;
  if (key.is_bot()) return out;
  std::set<AbsAddr> visited;
  std::vector<AbsAddr> work(bases.v.begin(), bases.v.end());
  bool may_miss_all = false;
  while (!work.empty()) {
    AbsAddr a = work.back();
    work.pop_back();
    if (!visited.insert(a).second) continue;
    if (!store.has(a)) continue;
    const AbsObject& o = store.obj(a);
    bool chase = true;
    if (key.is_const()) {
      auto it = o.exact.find(key.value);
      if (it != o.exact.end()) {
        out = join(out, it->second.val);
        chase = it->second.maybe_absent;
      } else {
        const BValue& s = o.summary(classify_str(key.value));
        out = join(out, s);
        chase = true;  // membership in a summary is never certain
      }
    } else {
      for (const auto& [k, pv] : o.exact)
        if (str_admits(key, k)) out = join(out, pv.val);
      std::uint8_t cats = detail::cat_set(key.kind);
      if (cats & static_cast<std::uint8_t>(StrCat::Num))
        out = join(out, o.num_summary);
      if (cats & static_cast<std::uint8_t>(StrCat::Spl))
        out = join(out, o.spl_summary);
      if (cats & static_cast<std::uint8_t>(StrCat::Other))
        out = join(out, o.other_summary);
    }
    if (chase) {
      if (o.proto_null) may_miss_all = true;
      for (const auto& p : o.proto_addrs.v) work.push_back(p);
    }
  }
  if (may_miss_all || bases.empty()) out = join(out, BValue::of_undef());
  return out;
}

struct UpdateEffect {
  bool possible_range_error = false;
};

inline bool may_fail_length_check(const BValue& v) {
  AbsNum n = to_num(v);
  if (n.is_bot()) return false;
  if (n.is_const())
    return !ir::num_equal(static_cast<double>(ecma::to_uint32(n.value)),
                          n.value);
  return true;
}

namespace detail {

inline void mark_numeric_maybe_absent(AbsObject& o, double from) {
  for (auto& [k, pv] : o.exact) {
    if (!ecma::is_array_index(k)) continue;
    if (ecma::string_to_num(k) >= from) pv.maybe_absent = true;
  }
}

inline void set_length(AbsObject& o, bool strong, AbsNum len) {
  auto it = o.exact.find("length");
  if (it == o.exact.end()) {
    o.exact.emplace("length",
                    PropVal{BValue::of_num(len), false, false});
    return;
  }
  BValue next = BValue::of_num(len);
  it->second.val = strong ? next : join(it->second.val, next);
}

inline AbsNum length_of(const AbsObject& o) {
  auto it = o.exact.find("length");
  if (it == o.exact.end()) return AbsNum::top();
  return it->second.val.num;
}

// Array index writes pull the length forward when they may land at or past
// the current end.
inline void grow_for_index(AbsObject& o, bool strong, double idx) {
  AbsNum len = length_of(o);
  if (len.is_const() && idx < len.value) return;
  if (len.is_const() && strong) {
    set_length(o, true, AbsNum::of(idx + 1));
    return;
  }
  set_length(o, false, AbsNum::of(idx + 1));
}

inline UpdateEffect write_length(AbsObject& o, bool strong, const BValue& val) {
  UpdateEffect eff;
  eff.possible_range_error = may_fail_length_check(val);
  AbsNum n = to_num(val);
  if (n.is_bot()) return eff;
  if (n.is_const()) {
    if (eff.possible_range_error) return eff;  // the write itself throws
    double u = static_cast<double>(ecma::to_uint32(n.value));
    if (strong) {
      set_length(o, true, AbsNum::of(u));
      for (auto& [k, pv] : o.exact) {
        if (!ecma::is_array_index(k)) continue;
        if (ecma::string_to_num(k) >= u) pv.val = BValue::bot();
      }
    } else {
      set_length(o, false, AbsNum::of(u));
      mark_numeric_maybe_absent(o, u);
    }
  } else {
    set_length(o, false, AbsNum::top());
    mark_numeric_maybe_absent(o, 0);
  }
  return eff;
}

}  // namespace detail

inline UpdateEffect obj_update(AbsObject& o, bool strong, const AbsStr& key,
                               const BValue& val) {
  UpdateEffect eff;
  if (key.is_bot() || val.is_bot()) return eff;
  if (key.is_const()) {
    const std::string& k = key.value;
    if (o.cls == ClassTag::Array && k == "length")
      return detail::write_length(o, strong, val);
    auto it = o.exact.find(k);
    if (strong) {
      if (it != o.exact.end())
        it->second = PropVal{val, false,
                             it->second.enumerable || it->second.maybe_absent};
      else
        o.exact.emplace(k, PropVal{val, false, true});
    } else {
      if (it != o.exact.end()) {
        it->second.val = join(it->second.val, val);
        it->second.enumerable |= it->second.maybe_absent;
      } else {
        const BValue& s = o.summary(classify_str(k));
        o.exact.emplace(k, PropVal{join(s, val), true, true});
      }
    }
    if (o.cls == ClassTag::Array && ecma::is_array_index(k))
      detail::grow_for_index(o, strong, ecma::string_to_num(k));
    return eff;
  }
  // Key only known by category: every matching property may be hit.
  for (auto& [k, pv] : o.exact) {
    if (o.cls == ClassTag::Array && k == "length") continue;
    if (!str_admits(key, k)) continue;
    pv.val = join(pv.val, val);
    pv.enumerable |= pv.maybe_absent;
  }
  std::uint8_t cats = detail::cat_set(key.kind);
  if (cats & static_cast<std::uint8_t>(StrCat::Num))
    o.num_summary = join(o.num_summary, val);
  if (cats & static_cast<std::uint8_t>(StrCat::Spl))
    o.spl_summary = join(o.spl_summary, val);
  if (cats & static_cast<std::uint8_t>(StrCat::Other))
    o.other_summary = join(o.other_summary, val);
  if (o.cls == ClassTag::Array) {
    if (cats & static_cast<std::uint8_t>(StrCat::Num))
      detail::set_length(o, false, AbsNum::top());
    if (cats & static_cast<std::uint8_t>(StrCat::Spl)) {
      eff.possible_range_error = may_fail_length_check(val);
      detail::set_length(o, false, AbsNum::top());
      detail::mark_numeric_maybe_absent(o, 0);
    }
  }
  return eff;
}

inline void obj_delete(AbsObject& o, bool strong, const AbsStr& key) {
  if (key.is_bot()) return;
  if (key.is_const()) {
    const std::string& k = key.value;
    if (o.cls == ClassTag::Array && k == "length") return;  // undeletable
    auto it = o.exact.find(k);
    if (strong) {
      if (it != o.exact.end())
        it->second = PropVal{BValue::bot(), true, it->second.enumerable};
      else
        o.exact.emplace(k, PropVal{BValue::bot(), true, true});
    } else {
      if (it != o.exact.end())
        it->second.maybe_absent = true;
      else {
        const BValue& s = o.summary(classify_str(k));
        o.exact.emplace(k, PropVal{s, true, true});
      }
    }
    return;
  }
  for (auto& [k, pv] : o.exact) {
    if (o.cls == ClassTag::Array && k == "length") continue;
    if (str_admits(key, k)) pv.maybe_absent = true;
  }
}

// Candidate keys a for-in loop over these objects may bind: exact keys as
// constants, summaries as whole categories, across the prototype chain.
inline std::vector<AbsStr> obj_enumerate(const AbsStore& store,
                                         const AddrSet& bases) {
  std::vector<AbsStr> out;
  std::set<std::pair<int, std::string>> seen;
  auto emit = [&](AbsStr s) {
    auto k = std::make_pair(static_cast<int>(s.kind), s.value);
    if (seen.insert(k).second) out.push_back(std::move(s));
  };
  std::set<AbsAddr> visited;
  std::vector<AbsAddr> work(bases.v.begin(), bases.v.end());
  while (!work.empty()) {
    AbsAddr a = work.back();
    work.pop_back();
    if (!visited.insert(a).second) continue;
    if (!store.has(a)) continue;
    const AbsObject& o = store.obj(a);
    for (const auto& [k, pv] : o.exact) {
      if (!pv.enumerable || pv.definitely_absent()) continue;
      emit(AbsStr::of(k));
    }
    if (!o.num_summary.is_bot()) emit(AbsStr::mid(AbsStr::Kind::SNum));
    if (!o.spl_summary.is_bot()) emit(AbsStr::mid(AbsStr::Kind::SSpl));
    if (!o.other_summary.is_bot())
      emit(AbsStr::mid(AbsStr::Kind::SNotNumNorSpl));
    for (const auto& p : o.proto_addrs.v) work.push_back(p);
  }
  return out;
}

}  // namespace njs::dom
