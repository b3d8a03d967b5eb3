#pragma once

// The concrete small-step machine. One step per program point: statements
// about to run, then one completion point per finished node. Expressions
// are pure and evaluate in a single call. The machine threads a context
// through calls via a pluggable strategy so its trace lines up with the
// analysis partitions point for point.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "njs/alpha.hpp"
#include "njs/builtins.hpp"
#include "njs/concrete_value.hpp"
#include "njs/ecma.hpp"
#include "njs/ir.hpp"
#include "njs/tags.hpp"
#include "njs/trace.hpp"

namespace njs::concrete {

// ----------------------------------------------------------- conversions

inline bool to_bool(const CValue& v) {
  switch (v.index()) {
    case 0: {
      double d = std::get<double>(v);
      return d == d && d != 0;
    }
    case 1: return std::get<bool>(v);
    case 2: return !std::get<std::string>(v).empty();
    case 3: return true;
    default: return false;  // null, undefined
  }
}

inline double to_num(const CValue& v) {
  switch (v.index()) {
    case 0: return std::get<double>(v);
    case 1: return std::get<bool>(v) ? 1 : 0;
    case 2: return ecma::string_to_num(std::get<std::string>(v));
    case 3: return __builtin_nan("");  // objects never consult valueOf here
    case 4: return 0;
    default: return __builtin_nan("");
  }
}

inline std::string to_str(const CValue& v) {
  switch (v.index()) {
    case 0: return ecma::num_to_string(std::get<double>(v));
    case 1: return std::get<bool>(v) ? "true" : "false";
    case 2: return std::get<std::string>(v);
    case 3: return dom::kObjectString;
    case 4: return "null";
    default: return "undefined";
  }
}

inline bool callable(const CObject& o) {
  return o.closure.has_value() || o.native != NativeId::None;
}

// Own-then-prototype lookup; prototype chains built by this machine are
// acyclic, the depth cap is a pure safety net.
inline const CProp* lookup_chain(const CStore& st, ObjAddr a,
                                 const std::string& k) {
  CValue cur = a;
  for (int depth = 0; depth < 64 && is_addr(cur); ++depth) {
    const CObject& o = st.obj_at(std::get<ObjAddr>(cur));
    if (const CProp* p = o.find(k)) return p;
    cur = o.proto;
  }
  return nullptr;
}

inline bool loose_eq(const CValue& a, const CValue& b) {
  if (a.index() == b.index()) {
    switch (a.index()) {
      case 0: return std::get<double>(a) == std::get<double>(b);
      case 1: return std::get<bool>(a) == std::get<bool>(b);
      case 2: return std::get<std::string>(a) == std::get<std::string>(b);
      case 3: return std::get<ObjAddr>(a) == std::get<ObjAddr>(b);
      default: return true;  // null == null, undefined == undefined
    }
  }
  if ((is_null(a) && is_undef(b)) || (is_undef(a) && is_null(b))) return true;
  if (std::holds_alternative<bool>(a))
    return loose_eq(CValue{std::get<bool>(a) ? 1.0 : 0.0}, b);
  if (std::holds_alternative<bool>(b))
    return loose_eq(a, CValue{std::get<bool>(b) ? 1.0 : 0.0});
  if (std::holds_alternative<double>(a) &&
      std::holds_alternative<std::string>(b))
    return std::get<double>(a) == to_num(b);
  if (std::holds_alternative<std::string>(a) &&
      std::holds_alternative<double>(b))
    return to_num(a) == std::get<double>(b);
  return false;  // mixed object and primitive never compare equal here
}

inline bool strict_eq(const CValue& a, const CValue& b) {
  if (a.index() != b.index()) return false;
  switch (a.index()) {
    case 0: return std::get<double>(a) == std::get<double>(b);
    case 1: return std::get<bool>(a) == std::get<bool>(b);
    case 2: return std::get<std::string>(a) == std::get<std::string>(b);
    case 3: return std::get<ObjAddr>(a) == std::get<ObjAddr>(b);
    default: return true;
  }
}

// ------------------------------------------------------------ completions

struct Completion {
  enum class Kind : std::uint8_t { Normal, Brk, Thrown } kind = Kind::Normal;
  CValue value = CUndef{};
  std::string label;

  static Completion normal(CValue v = CUndef{}) {
    return {Kind::Normal, std::move(v), {}};
  }
  static Completion brk(std::string l, CValue v) {
    return {Kind::Brk, std::move(v), std::move(l)};
  }
  static Completion thrown(CValue v) {
    return {Kind::Thrown, std::move(v), {}};
  }
};

// ------------------------------------------------------------ kont frames

struct SeqK {
  std::vector<ir::StmtPtr> stmts;
  size_t next = 0;
  ir::NodeId node = 0;
};
struct IfK {
  ir::NodeId node = 0;
};
struct WhileK {
  ir::ExpPtr guard;
  ir::StmtPtr body;
  ir::NodeId node = 0;
};
struct LabelK {
  std::string label;
  ir::NodeId node = 0;
};
struct ForK {
  std::vector<std::string> keys;
  size_t next = 0;
  std::string var;
  ir::StmtPtr body;
  ObjAddr obj;
  ir::NodeId node = 0;
};
struct TryK {
  std::string catch_var;
  ir::StmtPtr catch_body;
  ir::StmtPtr finally_body;
  ir::NodeId node = 0;
};
struct CatchK {
  ir::StmtPtr finally_body;
  ir::NodeId node = 0;
};
struct FinallyK {
  Completion pending;
  ir::NodeId node = 0;
};
struct RetK {
  std::string target;
  Env env;
  trace::Ctx saved_ctx;
  bool is_ctor = false;
  CValue recv = CUndef{};
  ir::NodeId site = 0;
  ir::NodeId saved_body = 0;  // caller's activation body node
};
struct DeclK {
  ir::NodeId node = 0;
};

using CFrame = std::variant<SeqK, IfK, WhileK, LabelK, ForK, TryK, CatchK,
                            FinallyK, RetK, DeclK>;

// ------------------------------------------------------------- run result

enum class ResultKind : std::uint8_t { Value, Exception, OutOfFuel };

struct RunResult {
  ResultKind kind = ResultKind::Value;
  CValue value = CUndef{};
  std::string output;
  std::uint64_t steps = 0;
  std::vector<ErrEvent> errors;        // runtime errors the machine threw
  std::vector<ir::NodeId> eval_sites;  // calls that reached the eval stub
};

// ---------------------------------------------------------------- machine

class Machine {
 public:
  struct Options {
    std::uint64_t fuel = 500000;
    trace::StrategyPtr strategy;  // null runs context-insensitively
  };

  using PointHook =
      std::function<void(const Machine&, const trace::PartKey&)>;

  Machine(const ir::Program& prog, Options opt)
      : prog_(prog), opt_(std::move(opt)), world_(builtins::make_world()) {
    store_ = world_.store;
    env_ = world_.globals;
    h_ = opt_.strategy ? opt_.strategy->heap() : 0;
    global_token_ = dom::addrs_token(
        dom::AddrSet::of(alpha::alpha_addr(store_, world_.global.v, h_)));
  }

  PointHook on_point;

  RunResult run() {
    activation_body_ = prog_.decl->id;
    begin_decl(prog_.decl);
    while (!finished_) {
      if (result_.steps >= opt_.fuel) {
        result_.kind = ResultKind::OutOfFuel;
        break;
      }
      step();
    }
    finish_result();
    return result_;
  }

  // State exposed to instrumentation hooks.
  const CStore& store() const { return store_; }
  const Env& env() const { return env_; }
  const trace::Ctx& ctx() const { return ctx_; }
  const std::vector<CFrame>& konts() const { return konts_; }
  ir::NodeId activation_body() const { return activation_body_; }
  const Completion* completion() const {
    return mode_ == Mode::Complete ? &comp_ : nullptr;
  }
  unsigned heap_h() const { return h_; }
  ObjAddr global_addr() const { return world_.global; }
  const builtins::World& world() const { return world_; }

 private:
  enum class Mode : std::uint8_t { RunDecl, RunStmt, ForHead, Complete };

  const ir::Program& prog_;
  Options opt_;
  builtins::World world_;
  CStore store_;
  Env env_;
  trace::Ctx ctx_;
  std::vector<CFrame> konts_;
  Mode mode_ = Mode::RunDecl;
  ir::DeclPtr cur_decl_;
  ir::StmtPtr cur_;
  Completion comp_;
  ir::NodeId comp_node_ = 0;
  ir::NodeId activation_body_ = 0;
  bool finished_ = false;
  RunResult result_;
  unsigned h_ = 0;
  std::uint64_t global_token_ = 0;

  trace::Ctx heap_ctx() const { return trace::heap_prefix(ctx_, h_); }

  void emit(trace::PointKey pk) {
    ++result_.steps;
    if (on_point) on_point(*this, trace::PartKey{std::move(pk), ctx_});
  }

  void set_run(ir::StmtPtr s) {
    mode_ = Mode::RunStmt;
    cur_ = std::move(s);
  }

  void begin_decl(ir::DeclPtr d) {
    mode_ = Mode::RunDecl;
    cur_decl_ = std::move(d);
  }

  void go_complete(ir::NodeId node, Completion c) {
    mode_ = Mode::Complete;
    comp_node_ = node;
    comp_ = std::move(c);
  }

  void record_error(ir::NodeId node, ErrKind kind) {
    result_.errors.push_back({node, kind});
  }

  void finish_result() {
    auto& es = result_.errors;
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
    auto& ev = result_.eval_sites;
    std::sort(ev.begin(), ev.end());
    ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
  }

  void step() {
    switch (mode_) {
      case Mode::RunDecl: return step_decl();
      case Mode::RunStmt: return step_stmt();
      case Mode::ForHead: return step_forhead();
      case Mode::Complete: return step_complete();
    }
  }

  // ------------------------------------------------------------- eval

  CValue eval(const ir::ExpPtr& e) const {
    struct V {
      const Machine& m;
      CValue operator()(const ir::NumLit& x) const { return x.value; }
      CValue operator()(const ir::BoolLit& x) const { return x.value; }
      CValue operator()(const ir::StrLit& x) const { return x.value; }
      CValue operator()(const ir::UndefLit&) const { return CUndef{}; }
      CValue operator()(const ir::NullLit&) const { return CNull{}; }
      CValue operator()(const ir::VarRef& x) const {
        return m.store_.value_at(m.env_.at(x.name));
      }
      CValue operator()(const ir::MethLit&) const { return CUndef{}; }
      CValue operator()(const ir::UnExp& x) const {
        return m.eval_un(x.op, m.eval(x.operand));
      }
      CValue operator()(const ir::BinExp& x) const {
        return m.eval_bin(x.op, m.eval(x.lhs), m.eval(x.rhs));
      }
    };
    return std::visit(V{*this}, e->node);
  }

  CValue eval_un(ir::UnOp op, const CValue& v) const {
    using ir::UnOp;
    switch (op) {
      case UnOp::Neg: return -to_num(v);
      case UnOp::BitNot:
        return static_cast<double>(~ecma::to_int32(to_num(v)));
      case UnOp::Not: return !to_bool(v);
      case UnOp::TypeOf: return type_of(v);
      case UnOp::IsPrim: return !is_addr(v);
      case UnOp::ToBool: return to_bool(v);
      case UnOp::ToStr: return to_str(v);
      case UnOp::ToNum: return to_num(v);
    }
    return CUndef{};
  }

  std::string type_of(const CValue& v) const {
    switch (v.index()) {
      case 0: return "number";
      case 1: return "boolean";
      case 2: return "string";
      case 3:
        return callable(store_.obj_at(std::get<ObjAddr>(v))) ? "function"
                                                             : "object";
      case 4: return "object";
      default: return "undefined";
    }
  }

  CValue eval_bin(ir::BinOp op, const CValue& a, const CValue& b) const {
    using ir::BinOp;
    switch (op) {
      case BinOp::Add: return to_num(a) + to_num(b);
      case BinOp::Sub: return to_num(a) - to_num(b);
      case BinOp::Mul: return to_num(a) * to_num(b);
      case BinOp::Div: return to_num(a) / to_num(b);
      case BinOp::Mod: return std::fmod(to_num(a), to_num(b));
      case BinOp::Shl:
        return static_cast<double>(ecma::to_int32(to_num(a))
                                   << (ecma::to_uint32(to_num(b)) & 31));
      case BinOp::Shr:
        return static_cast<double>(ecma::to_int32(to_num(a)) >>
                                   (ecma::to_uint32(to_num(b)) & 31));
      case BinOp::UShr:
        return static_cast<double>(ecma::to_uint32(to_num(a)) >>
                                   (ecma::to_uint32(to_num(b)) & 31));
      case BinOp::Lt: return to_num(a) < to_num(b);
      case BinOp::Le: return to_num(a) <= to_num(b);
      case BinOp::BitAnd:
        return static_cast<double>(ecma::to_int32(to_num(a)) &
                                   ecma::to_int32(to_num(b)));
      case BinOp::BitOr:
        return static_cast<double>(ecma::to_int32(to_num(a)) |
                                   ecma::to_int32(to_num(b)));
      case BinOp::BitXor:
        return static_cast<double>(ecma::to_int32(to_num(a)) ^
                                   ecma::to_int32(to_num(b)));
      case BinOp::And: return to_bool(a) ? b : a;
      case BinOp::Or: return to_bool(a) ? a : b;
      case BinOp::StrConcat: return to_str(a) + to_str(b);
      case BinOp::StrLt: return to_str(a) < to_str(b);
      case BinOp::StrLe: return to_str(a) <= to_str(b);
      case BinOp::LooseEq: return loose_eq(a, b);
      case BinOp::StrictEq: return strict_eq(a, b);
      case BinOp::Prop: {
        if (!is_addr(a)) return CUndef{};
        const CProp* p =
            lookup_chain(store_, std::get<ObjAddr>(a), to_str(b));
        return p ? p->val : CValue{CUndef{}};
      }
      case BinOp::InstanceOf: {
        if (!is_addr(b) || !callable(store_.obj_at(std::get<ObjAddr>(b))))
          return false;
        const CProp* pp =
            lookup_chain(store_, std::get<ObjAddr>(b), "prototype");
        if (!pp || !is_addr(pp->val)) return false;
        ObjAddr proto = std::get<ObjAddr>(pp->val);
        if (!is_addr(a)) return false;
        CValue cur = store_.obj_at(std::get<ObjAddr>(a)).proto;
        for (int depth = 0; depth < 64 && is_addr(cur); ++depth) {
          if (std::get<ObjAddr>(cur) == proto) return true;
          cur = store_.obj_at(std::get<ObjAddr>(cur)).proto;
        }
        return false;
      }
      case BinOp::In: {
        if (!is_addr(b)) return false;
        return lookup_chain(store_, std::get<ObjAddr>(b), to_str(a)) !=
               nullptr;
      }
    }
    return CUndef{};
  }

  // ----------------------------------------------------------- stepping

  void step_decl() {
    const ir::Decl& d = *cur_decl_;
    emit(trace::at(d.id));
    for (const auto& [x, init] : d.bindings) {
      CValue v = eval(init);
      std::uint32_t cell = store_.alloc(CValue{v}, init->id, heap_ctx());
      env_[x] = cell;
    }
    konts_.push_back(DeclK{d.id});
    set_run(cur_decl_->body);
    cur_decl_.reset();
  }

  void step_stmt() {
    const ir::Stmt& s = *cur_;
    emit(trace::at(s.id));
    std::visit([&](const auto& n) { exec(s.id, n); }, s.node);
  }

  void exec(ir::NodeId id, const ir::SeqStmt& n) {
    if (n.stmts.empty()) {
      go_complete(id, Completion::normal());
      return;
    }
    konts_.push_back(SeqK{n.stmts, 1, id});
    set_run(n.stmts[0]);
  }

  void exec(ir::NodeId id, const ir::IfStmt& n) {
    bool b = to_bool(eval(n.cond));
    konts_.push_back(IfK{id});
    set_run(b ? n.then_branch : n.else_branch);
  }

  void exec(ir::NodeId id, const ir::WhileStmt& n) {
    if (to_bool(eval(n.cond))) {
      konts_.push_back(WhileK{n.cond, n.body, id});
      set_run(n.body);
    } else {
      go_complete(id, Completion::normal());
    }
  }

  void exec(ir::NodeId id, const ir::AssignVar& n) {
    store_.value_at(env_.at(n.var)) = eval(n.value);
    go_complete(id, Completion::normal());
  }

  void exec(ir::NodeId id, const ir::AssignProp& n) {
    CValue ov = eval(n.obj);
    std::string key = to_str(eval(n.key));
    CValue val = eval(n.value);
    if (is_null(ov) || is_undef(ov)) {
      record_error(id, ErrKind::TypeErrorPropOnNullUndef);
      go_complete(id, Completion::thrown(CValue{std::string("TypeError")}));
      return;
    }
    if (!is_addr(ov)) {
      go_complete(id, Completion::normal());  // write to a vanished wrapper
      return;
    }
    CObject& o = store_.obj_at(std::get<ObjAddr>(ov));
    if (o.cls == ClassTag::Array && key == "length") {
      double want = to_num(val);
      double u = static_cast<double>(ecma::to_uint32(want));
      if (u != want) {  // NaN and out-of-range values both land here
        record_error(id, ErrKind::RangeErrorArrayLength);
        go_complete(id,
                    Completion::thrown(CValue{std::string("RangeError")}));
        return;
      }
      std::vector<std::string> dead;
      for (const CProp& p : o.props)
        if (ecma::is_array_index(p.key) && ecma::string_to_num(p.key) >= u)
          dead.push_back(p.key);
      for (const auto& k : dead) o.erase(k);
      o.set_hidden("length", u);
      go_complete(id, Completion::normal());
      return;
    }
    o.set(key, val);
    if (o.cls == ClassTag::Array && ecma::is_array_index(key)) {
      double idx = ecma::string_to_num(key);
      double len =
          to_num(o.find("length") ? o.find("length")->val : CValue{0.0});
      if (idx >= len) o.set_hidden("length", idx + 1);
    }
    go_complete(id, Completion::normal());
  }

  void exec(ir::NodeId id, const ir::CallStmt& n) {
    do_call(id, n.target, eval(n.fun), eval(n.self), eval(n.args), false);
  }

  void exec(ir::NodeId id, const ir::NewCallStmt& n) {
    do_call(id, n.target, eval(n.ctor), CUndef{}, eval(n.args), true);
  }

  void exec(ir::NodeId id, const ir::ToObjStmt& n) {
    CValue v = eval(n.value);
    if (is_addr(v)) {
      store_.value_at(env_.at(n.target)) = v;
      go_complete(id, Completion::normal());
      return;
    }
    if (is_null(v) || is_undef(v)) {
      record_error(id, ErrKind::TypeErrorPropOnNullUndef);
      go_complete(id, Completion::thrown(CValue{std::string("TypeError")}));
      return;
    }
    CObject o;
    o.proto = world_.object_proto;
    o.prim = v;
    switch (v.index()) {
      case 0: o.cls = ClassTag::Number; break;
      case 1: o.cls = ClassTag::Boolean; break;
      default:
        o.cls = ClassTag::String;
        o.set_hidden("length",
                     static_cast<double>(std::get<std::string>(v).size()));
    }
    ObjAddr a{store_.alloc(std::move(o), id, heap_ctx())};
    store_.value_at(env_.at(n.target)) = a;
    go_complete(id, Completion::normal());
  }

  void exec(ir::NodeId id, const ir::DeleteStmt& n) {
    CValue ov = eval(n.obj);
    std::string key = to_str(eval(n.key));
    if (is_null(ov) || is_undef(ov)) {
      record_error(id, ErrKind::TypeErrorPropOnNullUndef);
      go_complete(id, Completion::thrown(CValue{std::string("TypeError")}));
      return;
    }
    bool deleted = true;
    if (is_addr(ov)) {
      CObject& o = store_.obj_at(std::get<ObjAddr>(ov));
      if (o.cls == ClassTag::Array && key == "length")
        deleted = false;
      else
        o.erase(key);  // deleting a missing property still reports true
    }
    store_.value_at(env_.at(n.target)) = deleted;
    go_complete(id, Completion::normal());
  }

  void exec(ir::NodeId id, const ir::NewFunStmt& n) {
    const auto& ml = std::get<ir::MethLit>(n.meth->node);
    CObject proto_obj;
    proto_obj.cls = ClassTag::Object;
    proto_obj.proto = world_.object_proto;
    ObjAddr pa{store_.alloc(std::move(proto_obj), id, heap_ctx())};
    CObject fn;
    fn.cls = ClassTag::Function;
    fn.proto = world_.function_proto;
    fn.closure = CClosure{env_, ml.meth};
    fn.set_hidden("length", n.arity);
    fn.set_hidden("prototype", pa);
    ObjAddr fa{store_.alloc(std::move(fn), id, heap_ctx())};
    store_.obj_at(pa).set_hidden("constructor", fa);
    store_.value_at(env_.at(n.target)) = fa;
    go_complete(id, Completion::normal());
  }

  void exec(ir::NodeId id, const ir::ThrowStmt& n) {
    go_complete(id, Completion::thrown(eval(n.value)));
  }

  void exec(ir::NodeId id, const ir::TryStmt& n) {
    konts_.push_back(TryK{n.catch_var, n.catch_body, n.finally_body, id});
    set_run(n.try_body);
  }

  void exec(ir::NodeId id, const ir::LabelStmt& n) {
    konts_.push_back(LabelK{n.label, id});
    set_run(n.body);
  }

  void exec(ir::NodeId id, const ir::BreakStmt& n) {
    go_complete(id, Completion::brk(n.label, eval(n.value)));
  }

  void exec(ir::NodeId id, const ir::ForInStmt& n) {
    CValue ov = eval(n.obj);
    if (!is_addr(ov)) {
      go_complete(id, Completion::normal());
      return;
    }
    ObjAddr a = std::get<ObjAddr>(ov);
    konts_.push_back(ForK{enum_keys(a), 0, n.var, n.body, a, id});
    mode_ = Mode::ForHead;
  }

  std::vector<std::string> enum_keys(ObjAddr a) const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    CValue cur = a;
    for (int depth = 0; depth < 64 && is_addr(cur); ++depth) {
      const CObject& o = store_.obj_at(std::get<ObjAddr>(cur));
      for (const CProp& p : o.props) {
        if (seen.count(p.key)) continue;  // shadowed, even if hidden
        seen.insert(p.key);
        if (p.enumerable) out.push_back(p.key);
      }
      cur = o.proto;
    }
    return out;
  }

  bool key_visible(ObjAddr a, const std::string& k) const {
    const CProp* p = lookup_chain(store_, a, k);
    return p && p->enumerable;
  }

  void step_forhead() {
    ForK& f = std::get<ForK>(konts_.back());
    emit(trace::at(f.node, "head"));
    while (f.next < f.keys.size() && !key_visible(f.obj, f.keys[f.next]))
      ++f.next;
    if (f.next < f.keys.size()) {
      store_.value_at(env_.at(f.var)) = f.keys[f.next++];
      set_run(f.body);
    } else {
      ir::NodeId node = f.node;
      konts_.pop_back();
      go_complete(node, Completion::normal());
    }
  }

  // --------------------------------------------------------------- calls

  std::array<std::uint8_t, 4> arg_typesets(const CValue& av) const {
    std::array<std::uint8_t, 4> out = {dom::kUndefBit, dom::kUndefBit,
                                       dom::kUndefBit, dom::kUndefBit};
    if (!is_addr(av)) return out;
    const CObject& o = store_.obj_at(std::get<ObjAddr>(av));
    for (int i = 0; i < 4; ++i)
      if (const CProp* p = o.find(std::to_string(i)))
        out[i] = alpha::concrete_typeset(p->val);
    return out;
  }

  ObjAddr fresh_object(ir::NodeId site, CValue proto) {
    CObject o;
    o.cls = ClassTag::Object;
    o.proto = std::move(proto);
    return ObjAddr{store_.alloc(std::move(o), site, heap_ctx())};
  }

  ObjAddr fresh_array(ir::NodeId site) {
    CObject o;
    o.cls = ClassTag::Array;
    o.proto = world_.array_proto;
    o.set_hidden("length", 0.0);
    return ObjAddr{store_.alloc(std::move(o), site, heap_ctx())};
  }

  ObjAddr fresh_codeless_fn(ir::NodeId site) {
    CObject o;
    o.cls = ClassTag::Function;
    o.proto = world_.function_proto;
    return ObjAddr{store_.alloc(std::move(o), site, heap_ctx())};
  }

  void do_call(ir::NodeId id, const std::string& target, CValue fv, CValue sv,
               CValue av, bool is_ctor) {
    if (!is_addr(fv) || !callable(store_.obj_at(std::get<ObjAddr>(fv)))) {
      record_error(id, ErrKind::TypeErrorCallNonFunction);
      go_complete(id, Completion::thrown(CValue{std::string("TypeError")}));
      return;
    }
    ObjAddr faddr = std::get<ObjAddr>(fv);
    NativeId native = store_.obj_at(faddr).native;
    if (!store_.obj_at(faddr).closure) {
      CValue result = CUndef{};
      if (is_ctor) {
        switch (native) {
          case NativeId::CtorArray: result = fresh_array(id); break;
          case NativeId::CtorFunction: result = fresh_codeless_fn(id); break;
          case NativeId::CtorObject:
            result = fresh_object(id, world_.object_proto);
            break;
          default: {
            ObjAddr recv = fresh_object(id, ctor_proto_of(faddr));
            CValue r = apply_native(id, native, recv, av);
            result = is_addr(r) ? r : CValue{recv};
          }
        }
      } else {
        switch (native) {
          case NativeId::CtorArray: result = fresh_array(id); break;
          case NativeId::CtorFunction: result = fresh_codeless_fn(id); break;
          case NativeId::CtorObject:
            result = fresh_object(id, world_.object_proto);
            break;
          default: result = apply_native(id, native, sv, av);
        }
      }
      if (native == NativeId::Eval) result_.eval_sites.push_back(id);
      store_.value_at(env_.at(target)) = result;
      go_complete(id, Completion::normal());
      return;
    }

    const CClosure cl = *store_.obj_at(faddr).closure;
    CValue self_v = sv;
    if (is_ctor)
      self_v = fresh_object(id, ctor_proto_of(faddr));

    trace::CallEvent ev;
    ev.site = id;
    ev.callee = cl.meth->id;
    if (is_addr(self_v))
      ev.self_addrs = dom::AddrSet::of(
          alpha::alpha_addr(store_, std::get<ObjAddr>(self_v).v, h_));
    ev.self_typeset = alpha::concrete_typeset(self_v);
    ev.arg_typesets = arg_typesets(av);
    ev.global_token = global_token_;
    trace::Ctx next_ctx =
        opt_.strategy ? opt_.strategy->on_call(ctx_, ev) : trace::Ctx{};

    konts_.push_back(RetK{target, env_, ctx_, is_ctor, self_v, id,
                          activation_body_});
    env_ = cl.env;
    ctx_ = std::move(next_ctx);
    ir::NodeId body_id = std::holds_alternative<ir::DeclPtr>(cl.meth->body)
                             ? std::get<ir::DeclPtr>(cl.meth->body)->id
                             : std::get<ir::StmtPtr>(cl.meth->body)->id;
    env_["self"] =
        store_.alloc(CValue{self_v}, cl.meth->id, heap_ctx());
    env_["args"] = store_.alloc(CValue{av}, body_id, heap_ctx());
    activation_body_ = body_id;
    if (std::holds_alternative<ir::DeclPtr>(cl.meth->body))
      begin_decl(std::get<ir::DeclPtr>(cl.meth->body));
    else
      set_run(std::get<ir::StmtPtr>(cl.meth->body));
  }

  CValue ctor_proto_of(ObjAddr f) {
    const CProp* p = lookup_chain(store_, f, "prototype");
    if (p && is_addr(p->val)) return p->val;
    return world_.object_proto;
  }

  // -------------------------------------------------------------- natives

  CValue arg0(const CValue& av) const {
    if (!is_addr(av)) return CUndef{};
    const CProp* p = store_.obj_at(std::get<ObjAddr>(av)).find("0");
    return p ? p->val : CValue{CUndef{}};
  }

  CValue apply_native(ir::NodeId id, NativeId native, const CValue& self,
                      const CValue& av) {
    switch (native) {
      case NativeId::IsNaN: return std::isnan(to_num(arg0(av)));
      case NativeId::Eval: return CUndef{};
      case NativeId::Print:
        result_.output += to_str(arg0(av));
        result_.output += '\n';
        return CUndef{};
      case NativeId::ProtoToString: return to_str(self);
      case NativeId::ProtoValueOf: return self;
      case NativeId::ProtoHasOwn: {
        if (!is_addr(self)) return false;
        return store_.obj_at(std::get<ObjAddr>(self))
                   .find(to_str(arg0(av))) != nullptr;
      }
      case NativeId::ArrayPush: {
        if (!is_addr(self)) return CUndef{};
        ObjAddr sa = std::get<ObjAddr>(self);
        const CProp* lp = lookup_chain(store_, sa, "length");
        double n = lp ? to_num(lp->val) : 0;
        if (!(n >= 0) || n > 4294967294.0) n = 0;
        CObject& o = store_.obj_at(sa);
        o.set(ecma::num_to_string(n), arg0(av));
        o.set_hidden("length", n + 1);
        return n + 1;
      }
      case NativeId::ArrayPop: {
        if (!is_addr(self)) return CUndef{};
        ObjAddr sa = std::get<ObjAddr>(self);
        const CProp* lp = lookup_chain(store_, sa, "length");
        double n = lp ? to_num(lp->val) : 0;
        CObject& o = store_.obj_at(sa);
        if (!(n >= 1)) {
          o.set_hidden("length", 0.0);
          return CUndef{};
        }
        std::string k = ecma::num_to_string(n - 1);
        const CProp* p = lookup_chain(store_, sa, k);
        CValue v = p ? p->val : CValue{CUndef{}};
        o.erase(k);
        o.set_hidden("length", n - 1);
        return v;
      }
      case NativeId::ArrayJoin: {
        if (!is_addr(self)) return CValue{std::string()};
        ObjAddr sa = std::get<ObjAddr>(self);
        CValue sepv = arg0(av);
        std::string sep = is_undef(sepv) ? "," : to_str(sepv);
        const CProp* lp = lookup_chain(store_, sa, "length");
        double n = lp ? to_num(lp->val) : 0;
        if (!(n >= 0)) n = 0;
        if (n > 65536) n = 65536;  // cap keeps hostile lengths harmless
        std::string out;
        for (double i = 0; i < n; ++i) {
          if (i > 0) out += sep;
          const CProp* p = lookup_chain(store_, sa, ecma::num_to_string(i));
          if (p && !is_null(p->val) && !is_undef(p->val))
            out += to_str(p->val);
        }
        return out;
      }
      case NativeId::Noop:
      case NativeId::CtorObject:
      case NativeId::CtorArray:
      case NativeId::CtorFunction:
      case NativeId::None: return CUndef{};
    }
    (void)id;
    return CUndef{};
  }

  // ----------------------------------------------------------- completion

  void step_complete() {
    switch (comp_.kind) {
      case Completion::Kind::Normal: emit(trace::after_val(comp_node_)); break;
      case Completion::Kind::Thrown: emit(trace::after_exc(comp_node_)); break;
      case Completion::Kind::Brk: emit(trace::after_jump(comp_node_)); break;
    }
    if (konts_.empty()) {
      finished_ = true;
      if (comp_.kind == Completion::Kind::Normal) {
        result_.kind = ResultKind::Value;
        result_.value = comp_.value;
      } else if (comp_.kind == Completion::Kind::Thrown) {
        result_.kind = ResultKind::Exception;
        result_.value = comp_.value;
      } else {
        throw std::logic_error("break escaped the program");
      }
      return;
    }
    CFrame& top = konts_.back();
    std::visit([&](auto& fr) { unwind(fr); }, top);
  }

  void unwind(SeqK& fr) {
    if (comp_.kind == Completion::Kind::Normal && fr.next < fr.stmts.size()) {
      set_run(fr.stmts[fr.next++]);
      return;
    }
    ir::NodeId node = fr.node;
    Completion c = std::move(comp_);
    konts_.pop_back();
    go_complete(node, std::move(c));
  }

  void unwind(IfK& fr) {
    ir::NodeId node = fr.node;
    Completion c = std::move(comp_);
    konts_.pop_back();
    go_complete(node, std::move(c));
  }

  void unwind(WhileK& fr) {
    if (comp_.kind == Completion::Kind::Normal) {
      if (to_bool(eval(fr.guard))) {
        set_run(fr.body);
        return;
      }
      ir::NodeId node = fr.node;
      konts_.pop_back();
      go_complete(node, Completion::normal());
      return;
    }
    ir::NodeId node = fr.node;
    Completion c = std::move(comp_);
    konts_.pop_back();
    go_complete(node, std::move(c));
  }

  void unwind(LabelK& fr) {
    ir::NodeId node = fr.node;
    if (comp_.kind == Completion::Kind::Brk && comp_.label == fr.label) {
      CValue v = std::move(comp_.value);
      konts_.pop_back();
      go_complete(node, Completion::normal(std::move(v)));
      return;
    }
    Completion c = std::move(comp_);
    konts_.pop_back();
    go_complete(node, std::move(c));
  }

  void unwind(ForK& fr) {
    if (comp_.kind == Completion::Kind::Normal) {
      mode_ = Mode::ForHead;
      return;
    }
    ir::NodeId node = fr.node;
    Completion c = std::move(comp_);
    konts_.pop_back();
    go_complete(node, std::move(c));
  }

  void unwind(TryK& fr) {
    TryK k = std::move(fr);
    konts_.pop_back();
    if (comp_.kind == Completion::Kind::Thrown) {
      std::uint32_t cell =
          store_.alloc(CValue{comp_.value}, k.node, heap_ctx());
      env_[k.catch_var] = cell;
      konts_.push_back(CatchK{k.finally_body, k.node});
      set_run(k.catch_body);
      return;
    }
    konts_.push_back(FinallyK{std::move(comp_), k.node});
    set_run(k.finally_body);
  }

  void unwind(CatchK& fr) {
    CatchK k = std::move(fr);
    konts_.pop_back();
    konts_.push_back(FinallyK{std::move(comp_), k.node});
    set_run(k.finally_body);
  }

  void unwind(FinallyK& fr) {
    FinallyK k = std::move(fr);
    konts_.pop_back();
    if (comp_.kind == Completion::Kind::Normal)
      go_complete(k.node, std::move(k.pending));
    else
      go_complete(k.node, std::move(comp_));  // abrupt finally wins
  }

  void unwind(RetK& fr) {
    RetK k = std::move(fr);
    konts_.pop_back();
    env_ = std::move(k.env);
    ctx_ = std::move(k.saved_ctx);
    activation_body_ = k.saved_body;
    if (comp_.kind == Completion::Kind::Normal) {
      CValue rv = std::move(comp_.value);
      if (k.is_ctor && !is_addr(rv)) rv = k.recv;
      store_.value_at(env_.at(k.target)) = std::move(rv);
      go_complete(k.site, Completion::normal());
      return;
    }
    if (comp_.kind == Completion::Kind::Thrown) {
      go_complete(k.site, std::move(comp_));
      return;
    }
    throw std::logic_error("break crossed a call boundary");
  }

  void unwind(DeclK& fr) {
    ir::NodeId node = fr.node;
    Completion c = std::move(comp_);
    konts_.pop_back();
    go_complete(node, std::move(c));
  }
};

inline RunResult run_program(const ir::Program& p, Machine::Options opt = {}) {
  Machine m(p, std::move(opt));
  return m.run();
}

}  // namespace njs::concrete
