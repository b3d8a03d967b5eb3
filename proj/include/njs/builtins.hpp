#pragma once

// The initial heap every program starts from: a global object wired to the
// Object/Array/Function constructors, their prototypes, and the few native
// functions the language exposes. Builtin properties are non-enumerable so
// for-in over user objects stays quiet.

#include "njs/concrete_value.hpp"
#include "njs/tags.hpp"

namespace njs::builtins {

struct World {
  concrete::CStore store;
  concrete::Env globals;      // binds the one predefined variable
  concrete::ObjAddr global;   // the global object
  std::uint32_t global_cell = 0;
  concrete::ObjAddr object_proto, array_proto, function_proto;
  concrete::ObjAddr fn_eval;  // the stubbed eval, flagged by the client
};

inline World make_world() {
  using namespace concrete;
  World w;
  auto obj = [&](ir::NodeId site, ClassTag cls,
                 NativeId native = NativeId::None) {
    CObject o;
    o.cls = cls;
    o.native = native;
    return ObjAddr{w.store.alloc(std::move(o), site, {})};
  };

  ObjAddr global = obj(builtin_site::global, ClassTag::Object);
  ObjAddr object_proto = obj(builtin_site::object_proto, ClassTag::Object);
  ObjAddr array_proto = obj(builtin_site::array_proto, ClassTag::Array);
  ObjAddr function_proto =
      obj(builtin_site::function_proto, ClassTag::Function, NativeId::Noop);
  ObjAddr ctor_object =
      obj(builtin_site::ctor_object, ClassTag::Function, NativeId::CtorObject);
  ObjAddr ctor_array =
      obj(builtin_site::ctor_array, ClassTag::Function, NativeId::CtorArray);
  ObjAddr ctor_function = obj(builtin_site::ctor_function, ClassTag::Function,
                              NativeId::CtorFunction);
  ObjAddr fn_isnan =
      obj(builtin_site::fn_isnan, ClassTag::Function, NativeId::IsNaN);
  ObjAddr fn_eval =
      obj(builtin_site::fn_eval, ClassTag::Function, NativeId::Eval);
  ObjAddr fn_print =
      obj(builtin_site::fn_print, ClassTag::Function, NativeId::Print);
  ObjAddr fn_tostring = obj(builtin_site::fn_tostring, ClassTag::Function,
                            NativeId::ProtoToString);
  ObjAddr fn_valueof =
      obj(builtin_site::fn_valueof, ClassTag::Function, NativeId::ProtoValueOf);
  ObjAddr fn_hasown =
      obj(builtin_site::fn_hasown, ClassTag::Function, NativeId::ProtoHasOwn);
  ObjAddr fn_push =
      obj(builtin_site::fn_push, ClassTag::Function, NativeId::ArrayPush);
  ObjAddr fn_pop =
      obj(builtin_site::fn_pop, ClassTag::Function, NativeId::ArrayPop);
  ObjAddr fn_join =
      obj(builtin_site::fn_join, ClassTag::Function, NativeId::ArrayJoin);

  auto& g = w.store.obj_at(global);
  g.proto = object_proto;
  g.set_hidden("undefined", CUndef{});
  g.set_hidden("NaN", __builtin_nan(""));
  g.set_hidden("Infinity", __builtin_inf());
  g.set_hidden("isNaN", fn_isnan);
  g.set_hidden("eval", fn_eval);
  g.set_hidden("print", fn_print);
  g.set_hidden("Object", ctor_object);
  g.set_hidden("Array", ctor_array);
  g.set_hidden("Function", ctor_function);
  g.set_hidden("global", global);

  auto& op = w.store.obj_at(object_proto);
  op.proto = CNull{};
  op.set_hidden("toString", fn_tostring);
  op.set_hidden("valueOf", fn_valueof);
  op.set_hidden("hasOwnProperty", fn_hasown);
  op.set_hidden("constructor", ctor_object);

  auto& ap = w.store.obj_at(array_proto);
  ap.proto = object_proto;
  ap.set_hidden("length", 0.0);
  ap.set_hidden("push", fn_push);
  ap.set_hidden("pop", fn_pop);
  ap.set_hidden("join", fn_join);
  ap.set_hidden("constructor", ctor_array);

  auto& fp = w.store.obj_at(function_proto);
  fp.proto = object_proto;
  fp.set_hidden("constructor", ctor_function);

  auto wire_ctor = [&](ObjAddr ctor, ObjAddr proto) {
    auto& c = w.store.obj_at(ctor);
    c.proto = function_proto;
    c.set_hidden("prototype", proto);
  };
  wire_ctor(ctor_object, object_proto);
  wire_ctor(ctor_array, array_proto);
  wire_ctor(ctor_function, function_proto);

  for (ObjAddr f : {fn_isnan, fn_eval, fn_print, fn_tostring, fn_valueof,
                    fn_hasown, fn_push, fn_pop, fn_join})
    w.store.obj_at(f).proto = function_proto;

  w.global = global;
  w.object_proto = object_proto;
  w.array_proto = array_proto;
  w.function_proto = function_proto;
  w.fn_eval = fn_eval;
  w.global_cell = w.store.alloc(CValue{global}, builtin_site::global_cell, {});
  w.globals = {{"global", w.global_cell}};
  return w;
}

}  // namespace njs::builtins
