#pragma once

// Concrete runtime values, objects, and the store. Property order is
// insertion order (for-in relies on it); every store slot remembers its
// allocation site and the trace context it was allocated under so states
// can be abstracted later.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "njs/ecma.hpp"
#include "njs/ir.hpp"
#include "njs/tags.hpp"

namespace njs::concrete {

struct ObjAddr {
  std::uint32_t v = 0;
  friend bool operator==(ObjAddr a, ObjAddr b) { return a.v == b.v; }
  friend bool operator!=(ObjAddr a, ObjAddr b) { return a.v != b.v; }
  friend bool operator<(ObjAddr a, ObjAddr b) { return a.v < b.v; }
};
struct CNull {};
struct CUndef {};

using CValue = std::variant<double, bool, std::string, ObjAddr, CNull, CUndef>;

inline bool is_addr(const CValue& v) { return std::holds_alternative<ObjAddr>(v); }
inline bool is_null(const CValue& v) { return std::holds_alternative<CNull>(v); }
inline bool is_undef(const CValue& v) { return std::holds_alternative<CUndef>(v); }

using Env = std::map<std::string, std::uint32_t>;  // var -> cell address

struct CClosure {
  Env env;
  ir::MethPtr meth;
};

struct CProp {
  std::string key;
  CValue val;
  bool enumerable = true;  // builtin machinery stays out of for-in
};

struct CObject {
  ClassTag cls = ClassTag::Object;
  std::vector<CProp> props;  // insertion ordered
  std::optional<CClosure> closure;
  NativeId native = NativeId::None;
  CValue proto = CNull{};
  CValue prim = CUndef{};  // wrapper payload for string/boolean/number

  const CProp* find(const std::string& k) const {
    for (const auto& p : props)
      if (p.key == k) return &p;
    return nullptr;
  }
  // Assignment keeps the flag of an existing property and makes new ones
  // enumerable, mirroring put semantics.
  void set(const std::string& k, CValue v) {
    for (auto& p : props)
      if (p.key == k) {
        p.val = std::move(v);
        return;
      }
    props.push_back(CProp{k, std::move(v), true});
  }
  void set_hidden(const std::string& k, CValue v) {
    for (auto& p : props)
      if (p.key == k) {
        p.val = std::move(v);
        return;
      }
    props.push_back(CProp{k, std::move(v), false});
  }
  bool erase(const std::string& k) {
    for (auto it = props.begin(); it != props.end(); ++it)
      if (it->key == k) {
        props.erase(it);
        return true;
      }
    return false;
  }
};

struct CSlot {
  std::variant<CValue, CObject> payload;
  ir::NodeId site = 0;              // allocation site
  std::vector<std::uint64_t> ctx;   // trace context at allocation
};

struct CStore {
  std::map<std::uint32_t, CSlot> slots;
  std::uint32_t next = 1;

  std::uint32_t alloc(std::variant<CValue, CObject> payload, ir::NodeId site,
                      std::vector<std::uint64_t> ctx) {
    std::uint32_t a = next++;
    slots.emplace(a, CSlot{std::move(payload), site, std::move(ctx)});
    return a;
  }

  CValue& value_at(std::uint32_t a) {
    return std::get<CValue>(slots.at(a).payload);
  }
  const CValue& value_at(std::uint32_t a) const {
    return std::get<CValue>(slots.at(a).payload);
  }
  CObject& obj_at(std::uint32_t a) {
    return std::get<CObject>(slots.at(a).payload);
  }
  const CObject& obj_at(std::uint32_t a) const {
    return std::get<CObject>(slots.at(a).payload);
  }
  const CObject& obj_at(ObjAddr a) const { return obj_at(a.v); }
  CObject& obj_at(ObjAddr a) { return obj_at(a.v); }
};

}  // namespace njs::concrete
