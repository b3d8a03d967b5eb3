#pragma once

// Base value lattices: numbers (constant propagation), booleans (powerset),
// strings (constants plus a category layer separating numeric strings,
// special property names, and everything else), addresses, and the BValue
// product that the interpreters push around.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "njs/ecma.hpp"
#include "njs/ir.hpp"
#include "njs/tags.hpp"

namespace njs::dom {

// ---------------------------------------------------------------- numbers

struct AbsNum {
  enum class Kind : std::uint8_t { Bot, Const, Top } kind = Kind::Bot;
  double value = 0;

  static AbsNum bot() { return {}; }
  static AbsNum top() { return {Kind::Top, 0}; }
  static AbsNum of(double v) {
    if (std::isnan(v)) v = __builtin_nan("");  // canonical NaN bits
    return {Kind::Const, v};
  }
  bool is_bot() const { return kind == Kind::Bot; }
  bool is_top() const { return kind == Kind::Top; }
  bool is_const() const { return kind == Kind::Const; }

  friend bool operator==(const AbsNum& a, const AbsNum& b) {
    if (a.kind != b.kind) return false;
    if (a.kind != Kind::Const) return true;
    return ir::num_equal(a.value, b.value);
  }
  friend bool operator!=(const AbsNum& a, const AbsNum& b) { return !(a == b); }
};

inline bool leq(const AbsNum& a, const AbsNum& b) {
  if (a.is_bot() || b.is_top()) return true;
  if (b.is_bot() || a.is_top()) return false;
  return a == b;
}

inline AbsNum join(const AbsNum& a, const AbsNum& b) {
  if (a.is_bot()) return b;
  if (b.is_bot()) return a;
  if (a == b) return a;
  return AbsNum::top();
}

// ---------------------------------------------------------------- booleans

struct AbsBool {
  std::uint8_t bits = 0;  // 1 = may be true, 2 = may be false

  static AbsBool bot() { return {0}; }
  static AbsBool top() { return {3}; }
  static AbsBool of(bool b) { return {static_cast<std::uint8_t>(b ? 1 : 2)}; }
  bool may_true() const { return bits & 1; }
  bool may_false() const { return bits & 2; }
  bool is_bot() const { return bits == 0; }

  friend bool operator==(AbsBool a, AbsBool b) { return a.bits == b.bits; }
  friend bool operator!=(AbsBool a, AbsBool b) { return a.bits != b.bits; }
};

inline bool leq(AbsBool a, AbsBool b) { return (a.bits & ~b.bits) == 0; }
inline AbsBool join(AbsBool a, AbsBool b) {
  return {static_cast<std::uint8_t>(a.bits | b.bits)};
}
inline AbsBool abs_not(AbsBool a) {
  std::uint8_t r = 0;
  if (a.may_true()) r |= 2;
  if (a.may_false()) r |= 1;
  return {r};
}

// ---------------------------------------------------------------- strings

// Property names of the builtin environment. Used by the category layer:
// a string is "special" when it names builtin machinery, unless it already
// reads as a number ("NaN" and "Infinity" count as numeric first).
inline const std::vector<std::string>& special_strings() {
  static const std::vector<std::string> set = {
      "valueOf", "toString", "hasOwnProperty", "constructor", "prototype",
      "length", "push", "pop", "join", "isNaN", "eval", "Object", "Array",
      "Function", "NaN", "Infinity", "undefined", "print",
  };
  return set;
}

enum class StrCat : std::uint8_t { Num = 1, Spl = 2, Other = 4 };

inline StrCat classify_str(const std::string& s) {
  if (ecma::is_canonical_numeric(s)) return StrCat::Num;
  for (const auto& sp : special_strings())
    if (s == sp) return StrCat::Spl;
  return StrCat::Other;
}

struct AbsStr {
  enum class Kind : std::uint8_t {
    Bot, Const, SNum, SSpl, SNotNumNorSpl, SNotSpl, SNotNum, Top
  } kind = Kind::Bot;
  std::string value;

  static AbsStr bot() { return {}; }
  static AbsStr top() { return {Kind::Top, {}}; }
  static AbsStr of(std::string s) { return {Kind::Const, std::move(s)}; }
  static AbsStr mid(Kind k) { return {k, {}}; }
  bool is_bot() const { return kind == Kind::Bot; }
  bool is_top() const { return kind == Kind::Top; }
  bool is_const() const { return kind == Kind::Const; }

  friend bool operator==(const AbsStr& a, const AbsStr& b) {
    if (a.kind != b.kind) return false;
    if (a.kind != Kind::Const) return true;
    return a.value == b.value;
  }
  friend bool operator!=(const AbsStr& a, const AbsStr& b) { return !(a == b); }
};

namespace detail {
// Non-constant layers as category sets; {Num, Spl} has no kind of its own
// and widens to Top.
inline std::uint8_t cat_set(AbsStr::Kind k) {
  using K = AbsStr::Kind;
  switch (k) {
    case K::SNum: return 1;
    case K::SSpl: return 2;
    case K::SNotNumNorSpl: return 4;
    case K::SNotSpl: return 5;
    case K::SNotNum: return 6;
    case K::Top: return 7;
    default: return 0;
  }
}
inline AbsStr::Kind set_kind(std::uint8_t s) {
  using K = AbsStr::Kind;
  switch (s) {
    case 0: return K::Bot;
    case 1: return K::SNum;
    case 2: return K::SSpl;
    case 3: return K::Top;  // numeric-or-special has no layer of its own
    case 4: return K::SNotNumNorSpl;
    case 5: return K::SNotSpl;
    case 6: return K::SNotNum;
    default: return K::Top;
  }
}
}  // namespace detail

inline AbsStr::Kind category_kind(StrCat c) {
  switch (c) {
    case StrCat::Num: return AbsStr::Kind::SNum;
    case StrCat::Spl: return AbsStr::Kind::SSpl;
    case StrCat::Other: return AbsStr::Kind::SNotNumNorSpl;
  }
  return AbsStr::Kind::Top;
}

inline bool leq(const AbsStr& a, const AbsStr& b) {
  if (a.is_bot()) return true;
  if (b.is_bot()) return false;
  if (a.is_const()) {
    if (b.is_const()) return a.value == b.value;
    std::uint8_t cat = static_cast<std::uint8_t>(classify_str(a.value));
    return (cat & detail::cat_set(b.kind)) == cat;
  }
  if (b.is_const()) return false;
  std::uint8_t sa = detail::cat_set(a.kind), sb = detail::cat_set(b.kind);
  return (sa & ~sb) == 0;
}

inline AbsStr join(const AbsStr& a, const AbsStr& b) {
  if (a.is_bot()) return b;
  if (b.is_bot()) return a;
  if (a.is_const() && b.is_const() && a.value == b.value) return a;
  std::uint8_t sa = a.is_const()
                        ? static_cast<std::uint8_t>(classify_str(a.value))
                        : detail::cat_set(a.kind);
  std::uint8_t sb = b.is_const()
                        ? static_cast<std::uint8_t>(classify_str(b.value))
                        : detail::cat_set(b.kind);
  return AbsStr::mid(detail::set_kind(sa | sb));
}

// Could the abstract string describe this exact concrete string?
inline bool str_admits(const AbsStr& a, const std::string& s) {
  if (a.is_bot()) return false;
  if (a.is_const()) return a.value == s;
  std::uint8_t cat = static_cast<std::uint8_t>(classify_str(s));
  return (cat & detail::cat_set(a.kind)) != 0;
}

// ------------------------------------------------------- string transforms

inline AbsStr str_concat(const AbsStr& a, const AbsStr& b) {
  if (a.is_bot() || b.is_bot()) return AbsStr::bot();
  if (a.is_const() && b.is_const()) return AbsStr::of(a.value + b.value);
  if (a.is_const() && a.value.empty()) return b;
  if (b.is_const() && b.value.empty()) return a;

  std::uint8_t sa = a.is_const()
                        ? static_cast<std::uint8_t>(classify_str(a.value))
                        : detail::cat_set(a.kind);
  std::uint8_t sb = b.is_const()
                        ? static_cast<std::uint8_t>(classify_str(b.value))
                        : detail::cat_set(b.kind);

  // Special results must equal some special name, so try every split.
  bool spl = false;
  for (const auto& sp : special_strings()) {
    if (classify_str(sp) != StrCat::Spl) continue;  // NaN/Infinity are numeric
    for (size_t i = 0; i <= sp.size() && !spl; ++i)
      spl = str_admits(a, sp.substr(0, i)) && str_admits(b, sp.substr(i));
    if (spl) break;
  }

  // Numeric results end in a digit or complete NaN/Infinity; the prefix has
  // to be able to open a numeric spelling.
  auto can_end_numeric = [&]() -> bool {
    if (b.is_const()) {
      const std::string& c = b.value;
      if (!c.empty() && (c.back() >= '0' && c.back() <= '9')) return true;
      for (const char* t : {"NaN", "Infinity", "-Infinity"}) {
        std::string full(t);
        if (c.size() <= full.size() &&
            full.compare(full.size() - c.size(), c.size(), c) == 0) {
          if (str_admits(a, full.substr(0, full.size() - c.size())))
            return true;
        }
      }
      return false;
    }
    return (sb & (1 | 4)) != 0;  // numeric or plain strings can close one
  };
  auto can_open_numeric = [&]() -> bool {
    if (a.is_const()) {
      const std::string& c = a.value;
      for (const char* t : {"NaN", "Infinity", "-Infinity"}) {
        std::string full(t);
        if (c.size() <= full.size() && full.compare(0, c.size(), c) == 0 &&
            str_admits(b, full.substr(c.size())))
          return true;
      }
      for (char ch : c)
        if (!((ch >= '0' && ch <= '9') || ch == '.' || ch == 'e' ||
              ch == 'E' || ch == '+' || ch == '-'))
          return false;
      return true;
    }
    return (sa & (1 | 4)) != 0;
  };
  bool num = can_open_numeric() && can_end_numeric();

  std::uint8_t out = 4;  // plain results are essentially always possible
  if (num) out |= 1;
  if (spl) out |= 2;
  return AbsStr::mid(detail::set_kind(out));
}

inline AbsNum str_tonum(const AbsStr& a) {
  using K = AbsStr::Kind;
  switch (a.kind) {
    case K::Bot: return AbsNum::bot();
    case K::Const: return AbsNum::of(ecma::string_to_num(a.value));
    case K::SSpl: return AbsNum::of(__builtin_nan(""));  // no special parses
    default: return AbsNum::top();
  }
}

inline AbsStr num_tostr(const AbsNum& n) {
  switch (n.kind) {
    case AbsNum::Kind::Bot: return AbsStr::bot();
    case AbsNum::Kind::Const: return AbsStr::of(ecma::num_to_string(n.value));
    default: return AbsStr::mid(AbsStr::Kind::SNum);
  }
}

// --------------------------------------------------------------- addresses

// Abstract address: allocation site, heap context (a trace prefix), and
// what the slot holds. Cells are variable bindings; everything else is an
// object address discriminated by the class its constructor assigned.
struct AbsAddr {
  ir::NodeId site = 0;
  std::uint8_t tag = 0xFF;  // 0xFF = cell, otherwise ClassTag value
  std::vector<std::uint64_t> ctx;

  static AbsAddr cell(ir::NodeId site, std::vector<std::uint64_t> ctx) {
    return {site, 0xFF, std::move(ctx)};
  }
  static AbsAddr object(ir::NodeId site, ClassTag cls,
                        std::vector<std::uint64_t> ctx) {
    return {site, static_cast<std::uint8_t>(cls), std::move(ctx)};
  }
  bool is_cell() const { return tag == 0xFF; }
  ClassTag cls() const { return static_cast<ClassTag>(tag); }

  friend bool operator==(const AbsAddr& a, const AbsAddr& b) {
    return a.site == b.site && a.tag == b.tag && a.ctx == b.ctx;
  }
  friend bool operator<(const AbsAddr& a, const AbsAddr& b) {
    if (a.site != b.site) return a.site < b.site;
    if (a.tag != b.tag) return a.tag < b.tag;
    return a.ctx < b.ctx;
  }
};

inline std::uint64_t fnv1a(std::uint64_t h, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) {
    h ^= (x >> (i * 8)) & 0xFF;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t addr_token(const AbsAddr& a) {
  std::uint64_t h = 14695981039346656037ull;
  h = fnv1a(h, a.site);
  h = fnv1a(h, a.tag);
  for (auto c : a.ctx) h = fnv1a(h, c);
  return h;
}

struct AddrSet {
  std::vector<AbsAddr> v;  // sorted, unique

  static AddrSet of(AbsAddr a) { return {{std::move(a)}}; }
  bool empty() const { return v.empty(); }
  size_t size() const { return v.size(); }
  bool contains(const AbsAddr& a) const {
    return std::binary_search(v.begin(), v.end(), a);
  }
  void insert(const AbsAddr& a) {
    auto it = std::lower_bound(v.begin(), v.end(), a);
    if (it == v.end() || !(*it == a)) v.insert(it, a);
  }
  friend bool operator==(const AddrSet& a, const AddrSet& b) {
    return a.v == b.v;
  }
  friend bool operator!=(const AddrSet& a, const AddrSet& b) {
    return !(a.v == b.v);
  }
  friend bool operator<(const AddrSet& a, const AddrSet& b) {
    return a.v < b.v;
  }
};

inline bool leq(const AddrSet& a, const AddrSet& b) {
  return std::includes(b.v.begin(), b.v.end(), a.v.begin(), a.v.end());
}
inline AddrSet join(const AddrSet& a, const AddrSet& b) {
  AddrSet out;
  std::set_union(a.v.begin(), a.v.end(), b.v.begin(), b.v.end(),
                 std::back_inserter(out.v));
  return out;
}

inline std::uint64_t addrs_token(const AddrSet& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (const auto& a : s.v) h = fnv1a(h, addr_token(a));
  return h;
}

// ------------------------------------------------------------------ BValue

enum TypeBit : std::uint8_t {
  kNumBit = 1, kBoolBit = 2, kStrBit = 4, kAddrBit = 8, kNullBit = 16,
  kUndefBit = 32,
};

struct BValue {
  AbsNum num;
  AbsBool boolean;
  AbsStr str;
  AddrSet addrs;
  bool null_ = false;
  bool undef_ = false;

  static BValue bot() { return {}; }
  static BValue of_num(AbsNum n) {
    BValue b;
    b.num = std::move(n);
    return b;
  }
  static BValue of_num(double v) { return of_num(AbsNum::of(v)); }
  static BValue of_bool(AbsBool x) {
    BValue b;
    b.boolean = x;
    return b;
  }
  static BValue of_bool(bool x) { return of_bool(AbsBool::of(x)); }
  static BValue of_str(AbsStr s) {
    BValue b;
    b.str = std::move(s);
    return b;
  }
  static BValue of_str(std::string s) { return of_str(AbsStr::of(std::move(s))); }
  static BValue of_addr(AbsAddr a) {
    BValue b;
    b.addrs = AddrSet::of(std::move(a));
    return b;
  }
  static BValue of_addrs(AddrSet a) {
    BValue b;
    b.addrs = std::move(a);
    return b;
  }
  static BValue of_null() {
    BValue b;
    b.null_ = true;
    return b;
  }
  static BValue of_undef() {
    BValue b;
    b.undef_ = true;
    return b;
  }

  bool is_bot() const {
    return num.is_bot() && boolean.is_bot() && str.is_bot() && addrs.empty() &&
           !null_ && !undef_;
  }

  std::uint8_t typeset() const {
    std::uint8_t t = 0;
    if (!num.is_bot()) t |= kNumBit;
    if (!boolean.is_bot()) t |= kBoolBit;
    if (!str.is_bot()) t |= kStrBit;
    if (!addrs.empty()) t |= kAddrBit;
    if (null_) t |= kNullBit;
    if (undef_) t |= kUndefBit;
    return t;
  }

  bool may_nonaddr() const {
    return !num.is_bot() || !boolean.is_bot() || !str.is_bot() || null_ ||
           undef_;
  }

  BValue without_addrs() const {
    BValue b = *this;
    b.addrs = {};
    return b;
  }
  BValue only_addrs() const {
    BValue b;
    b.addrs = addrs;
    return b;
  }

  friend bool operator==(const BValue& a, const BValue& b) {
    return a.num == b.num && a.boolean == b.boolean && a.str == b.str &&
           a.addrs == b.addrs && a.null_ == b.null_ && a.undef_ == b.undef_;
  }
  friend bool operator!=(const BValue& a, const BValue& b) { return !(a == b); }
};

inline bool leq(const BValue& a, const BValue& b) {
  return leq(a.num, b.num) && leq(a.boolean, b.boolean) && leq(a.str, b.str) &&
         leq(a.addrs, b.addrs) && (!a.null_ || b.null_) &&
         (!a.undef_ || b.undef_);
}

inline BValue join(const BValue& a, const BValue& b) {
  BValue out;
  out.num = join(a.num, b.num);
  out.boolean = join(a.boolean, b.boolean);
  out.str = join(a.str, b.str);
  out.addrs = join(a.addrs, b.addrs);
  out.null_ = a.null_ || b.null_;
  out.undef_ = a.undef_ || b.undef_;
  return out;
}

// --------------------------------------------------- BValue conversions

// The string ToString applies to every component; objects print as a fixed
// token because pure expressions cannot invoke user toString methods.
inline constexpr const char* kObjectString = "[object]";

inline AbsStr to_str(const BValue& v) {
  AbsStr out = AbsStr::bot();
  out = join(out, num_tostr(v.num));
  if (v.boolean.may_true()) out = join(out, AbsStr::of("true"));
  if (v.boolean.may_false()) out = join(out, AbsStr::of("false"));
  out = join(out, v.str);
  if (!v.addrs.empty()) out = join(out, AbsStr::of(kObjectString));
  if (v.null_) out = join(out, AbsStr::of("null"));
  if (v.undef_) out = join(out, AbsStr::of("undefined"));
  return out;
}

inline AbsNum to_num(const BValue& v) {
  AbsNum out = AbsNum::bot();
  out = join(out, v.num);
  if (v.boolean.may_true()) out = join(out, AbsNum::of(1));
  if (v.boolean.may_false()) out = join(out, AbsNum::of(0));
  out = join(out, str_tonum(v.str));
  if (!v.addrs.empty()) out = join(out, AbsNum::of(__builtin_nan("")));
  if (v.null_) out = join(out, AbsNum::of(0));
  if (v.undef_) out = join(out, AbsNum::of(__builtin_nan("")));
  return out;
}

inline AbsBool to_bool(const BValue& v) {
  AbsBool out = AbsBool::bot();
  switch (v.num.kind) {
    case AbsNum::Kind::Bot: break;
    case AbsNum::Kind::Const:
      out = join(out, AbsBool::of(v.num.value == v.num.value &&
                                  v.num.value != 0));
      break;
    default: out = AbsBool::top();
  }
  out = join(out, v.boolean);
  switch (v.str.kind) {
    case AbsStr::Kind::Bot: break;
    case AbsStr::Kind::Const:
      out = join(out, AbsBool::of(!v.str.value.empty()));
      break;
    case AbsStr::Kind::SNum:
    case AbsStr::Kind::SSpl:
      out = join(out, AbsBool::of(true));  // neither layer contains ""
      break;
    default: out = AbsBool::top();
  }
  if (!v.addrs.empty()) out = join(out, AbsBool::of(true));
  if (v.null_ || v.undef_) out = join(out, AbsBool::of(false));
  return out;
}

}  // namespace njs::dom
