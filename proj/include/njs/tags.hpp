#pragma once

// Class tags, native function ids, and the reserved allocation sites for
// the builtin environment. Shared by the concrete and abstract halves so
// that addresses line up under abstraction.

#include <cstdint>

#include "njs/ir.hpp"

namespace njs {

enum class ClassTag : std::uint8_t {
  Object, Function, Array, String, Boolean, Number,
  Date, Error, Regexp, Arguments,
};

inline const char* class_name(ClassTag t) {
  switch (t) {
    case ClassTag::Object: return "Object";
    case ClassTag::Function: return "Function";
    case ClassTag::Array: return "Array";
    case ClassTag::String: return "String";
    case ClassTag::Boolean: return "Boolean";
    case ClassTag::Number: return "Number";
    case ClassTag::Date: return "Date";
    case ClassTag::Error: return "Error";
    case ClassTag::Regexp: return "RegExp";
    case ClassTag::Arguments: return "Arguments";
  }
  return "Object";
}

enum class NativeId : std::uint8_t {
  None,
  IsNaN, Eval, Print, Noop,
  CtorObject, CtorArray, CtorFunction,
  ProtoToString, ProtoValueOf, ProtoHasOwn,
  ArrayPush, ArrayPop, ArrayJoin,
};

// Runtime error classes the analyzer reports and the concrete machine
// records when it throws them.
enum class ErrKind : std::uint8_t {
  TypeErrorCallNonFunction,
  TypeErrorPropOnNullUndef,
  RangeErrorArrayLength,
};

inline const char* err_kind_name(ErrKind k) {
  switch (k) {
    case ErrKind::TypeErrorCallNonFunction:
      return "TypeErrorCallNonFunction";
    case ErrKind::TypeErrorPropOnNullUndef:
      return "TypeErrorPropOnNullUndef";
    case ErrKind::RangeErrorArrayLength:
      return "RangeErrorArrayLength";
  }
  return "UnknownError";
}

struct ErrEvent {
  ir::NodeId node = 0;
  ErrKind kind = ErrKind::TypeErrorCallNonFunction;

  friend bool operator==(const ErrEvent& a, const ErrEvent& b) {
    return a.node == b.node && a.kind == b.kind;
  }
  friend bool operator<(const ErrEvent& a, const ErrEvent& b) {
    if (a.node != b.node) return a.node < b.node;
    return a.kind < b.kind;
  }
};

// Reserved sites for objects that exist before the program runs. Program
// node ids are small (parse order from 1), so this range never collides.
namespace builtin_site {
inline constexpr ir::NodeId base = 0x40000000;
inline constexpr ir::NodeId global = base + 0;
inline constexpr ir::NodeId global_cell = base + 1;
inline constexpr ir::NodeId object_proto = base + 2;
inline constexpr ir::NodeId array_proto = base + 3;
inline constexpr ir::NodeId function_proto = base + 4;
inline constexpr ir::NodeId ctor_object = base + 5;
inline constexpr ir::NodeId ctor_array = base + 6;
inline constexpr ir::NodeId ctor_function = base + 7;
inline constexpr ir::NodeId fn_isnan = base + 8;
inline constexpr ir::NodeId fn_eval = base + 9;
inline constexpr ir::NodeId fn_print = base + 10;
inline constexpr ir::NodeId fn_tostring = base + 11;
inline constexpr ir::NodeId fn_valueof = base + 12;
inline constexpr ir::NodeId fn_hasown = base + 13;
inline constexpr ir::NodeId fn_push = base + 14;
inline constexpr ir::NodeId fn_pop = base + 15;
inline constexpr ir::NodeId fn_join = base + 16;
}  // namespace builtin_site

}  // namespace njs
