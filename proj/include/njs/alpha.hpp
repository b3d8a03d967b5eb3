#pragma once

// Abstraction from concrete machine data to the analysis domains. Addresses
// abstract to (allocation site, heap-truncated context, payload kind);
// colliding concrete slots fold into one summary slot with the many bit set.

#include <cstdint>

#include "njs/concrete_value.hpp"
#include "njs/dom_object.hpp"
#include "njs/domains.hpp"
#include "njs/trace.hpp"

namespace njs::alpha {

inline dom::AbsAddr alpha_addr(const concrete::CStore& st, std::uint32_t a,
                               unsigned h) {
  const concrete::CSlot& s = st.slots.at(a);
  trace::Ctx ctx = trace::heap_prefix(s.ctx, h);
  if (s.payload.index() == 0) return dom::AbsAddr::cell(s.site, std::move(ctx));
  return dom::AbsAddr::object(s.site,
                              std::get<concrete::CObject>(s.payload).cls,
                              std::move(ctx));
}

inline dom::BValue alpha_value(const concrete::CStore& st,
                               const concrete::CValue& v, unsigned h) {
  struct V {
    const concrete::CStore& st;
    unsigned h;
    dom::BValue operator()(double d) { return dom::BValue::of_num(d); }
    dom::BValue operator()(bool b) { return dom::BValue::of_bool(b); }
    dom::BValue operator()(const std::string& s) {
      return dom::BValue::of_str(s);
    }
    dom::BValue operator()(concrete::ObjAddr a) {
      return dom::BValue::of_addr(alpha_addr(st, a.v, h));
    }
    dom::BValue operator()(concrete::CNull) { return dom::BValue::of_null(); }
    dom::BValue operator()(concrete::CUndef) { return dom::BValue::of_undef(); }
  };
  return std::visit(V{st, h}, v);
}

inline dom::AbsEnv alpha_env(const concrete::CStore& st,
                             const concrete::Env& env, unsigned h) {
  dom::AbsEnv out;
  for (const auto& [x, cell] : env)
    out.emplace(x, dom::AddrSet::of(alpha_addr(st, cell, h)));
  return out;
}

// The single type bit a concrete value occupies, in BValue typeset terms.
inline std::uint8_t concrete_typeset(const concrete::CValue& v) {
  switch (v.index()) {
    case 0: return dom::kNumBit;
    case 1: return dom::kBoolBit;
    case 2: return dom::kStrBit;
    case 3: return dom::kAddrBit;
    case 4: return dom::kNullBit;
    default: return dom::kUndefBit;
  }
}

inline dom::AbsObject alpha_obj(const concrete::CStore& st,
                                const concrete::CObject& o, unsigned h) {
  dom::AbsObject out;
  out.cls = o.cls;
  for (const auto& p : o.props)
    out.exact.emplace(p.key,
                      dom::PropVal{alpha_value(st, p.val, h), false,
                                   p.enumerable});
  if (o.closure)
    out.add_closure(
        dom::AbsClosure{alpha_env(st, o.closure->env, h), o.closure->meth});
  out.add_native(o.native);
  if (concrete::is_addr(o.proto))
    out.proto_addrs.insert(
        alpha_addr(st, std::get<concrete::ObjAddr>(o.proto).v, h));
  else
    out.proto_null = true;
  out.prim = alpha_value(st, o.prim, h);
  return out;
}

inline dom::OSlot alpha_slot(const concrete::CStore& st,
                             const concrete::CSlot& s, unsigned h) {
  dom::OSlot out;
  if (s.payload.index() == 0)
    out.payload = alpha_value(st, std::get<concrete::CValue>(s.payload), h);
  else
    out.payload = alpha_obj(st, std::get<concrete::CObject>(s.payload), h);
  return out;
}

inline dom::AbsStore alpha_store(const concrete::CStore& st, unsigned h) {
  dom::AbsStore out;
  for (const auto& [a, s] : st.slots)
    out.alloc(alpha_addr(st, a, h), alpha_slot(st, s, h));
  return out;
}

}  // namespace njs::alpha
