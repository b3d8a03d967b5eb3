#pragma once

// Core IR: a small JavaScript-like language with pure expressions and
// impure statements. Conversions (tobool/tostr/tonum/toobj) are explicit
// operators, method calls take explicit self/args operands, and every node
// carries a NodeId assigned in parse order. NodeIds double as allocation
// sites for the interpreters.

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace njs::ir {

using NodeId = std::uint32_t;

struct Exp;
struct Stmt;
struct Decl;
struct Meth;
using ExpPtr = std::shared_ptr<const Exp>;
using StmtPtr = std::shared_ptr<const Stmt>;
using DeclPtr = std::shared_ptr<const Decl>;
using MethPtr = std::shared_ptr<const Meth>;

enum class BinOp {
  Add, Sub, Mul, Div, Mod,
  Shl, Shr, UShr,
  Lt, Le,
  BitAnd, BitOr, BitXor,
  And, Or,
  StrConcat, StrLt, StrLe,
  LooseEq, StrictEq,
  Prop, InstanceOf, In,
};

enum class UnOp {
  Neg, BitNot, Not, TypeOf, IsPrim, ToBool, ToStr, ToNum,
};

struct NumLit { double value; };
struct BoolLit { bool value; };
struct StrLit { std::string value; };
struct UndefLit {};
struct NullLit {};
struct VarRef { std::string name; };
struct MethLit { MethPtr meth; };
struct BinExp { BinOp op; ExpPtr lhs; ExpPtr rhs; };
struct UnExp { UnOp op; ExpPtr operand; };

struct Exp {
  NodeId id = 0;
  std::variant<NumLit, BoolLit, StrLit, UndefLit, NullLit, VarRef, MethLit,
               BinExp, UnExp>
      node;
};

struct SeqStmt { std::vector<StmtPtr> stmts; };
struct IfStmt { ExpPtr cond; StmtPtr then_branch; StmtPtr else_branch; };
struct WhileStmt { ExpPtr cond; StmtPtr body; };
struct AssignVar { std::string var; ExpPtr value; };
struct AssignProp { ExpPtr obj; ExpPtr key; ExpPtr value; };
struct CallStmt { std::string target; ExpPtr fun; ExpPtr self; ExpPtr args; };
struct ToObjStmt { std::string target; ExpPtr value; };
struct DeleteStmt { std::string target; ExpPtr obj; ExpPtr key; };
struct NewFunStmt { std::string target; ExpPtr meth; double arity; };
struct NewCallStmt { std::string target; ExpPtr ctor; ExpPtr args; };
struct ThrowStmt { ExpPtr value; };
struct TryStmt {
  StmtPtr try_body;
  std::string catch_var;
  StmtPtr catch_body;
  StmtPtr finally_body;
};
struct LabelStmt { std::string label; StmtPtr body; };
struct BreakStmt { std::string label; ExpPtr value; };
struct ForInStmt { std::string var; ExpPtr obj; StmtPtr body; };

struct Stmt {
  NodeId id = 0;
  std::variant<SeqStmt, IfStmt, WhileStmt, AssignVar, AssignProp, CallStmt,
               ToObjStmt, DeleteStmt, NewFunStmt, NewCallStmt, ThrowStmt,
               TryStmt, LabelStmt, BreakStmt, ForInStmt>
      node;
};

struct Decl {
  NodeId id = 0;
  std::vector<std::pair<std::string, ExpPtr>> bindings;
  StmtPtr body;
};

// Methods take implicit (self, args) parameters; the body is either a
// declaration block or a bare statement.
struct Meth {
  NodeId id = 0;
  std::variant<DeclPtr, StmtPtr> body;
};

struct Program {
  DeclPtr decl;
  NodeId node_count = 0;  // ids are 1..node_count
};

// Doubles compare bitwise except that every NaN is treated as the same
// value. Keeps -0 distinct from 0 and makes generated NaN literals stable.
inline bool num_equal(double a, double b) {
  if (a != a && b != b) return true;
  std::uint64_t ba, bb;
  static_assert(sizeof ba == sizeof a);
  __builtin_memcpy(&ba, &a, sizeof a);
  __builtin_memcpy(&bb, &b, sizeof b);
  return ba == bb;
}

bool equal(const ExpPtr& a, const ExpPtr& b);
bool equal(const StmtPtr& a, const StmtPtr& b);
bool equal(const DeclPtr& a, const DeclPtr& b);

inline bool equal(const MethPtr& a, const MethPtr& b) {
  if (a->body.index() != b->body.index()) return false;
  if (auto* d = std::get_if<DeclPtr>(&a->body))
    return equal(*d, std::get<DeclPtr>(b->body));
  return equal(std::get<StmtPtr>(a->body), std::get<StmtPtr>(b->body));
}

inline bool equal(const ExpPtr& a, const ExpPtr& b) {
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, NumLit>) {
          return num_equal(x.value, y.value);
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, StrLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, UndefLit> ||
                             std::is_same_v<T, NullLit>) {
          return true;
        } else if constexpr (std::is_same_v<T, VarRef>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, MethLit>) {
          return equal(x.meth, y.meth);
        } else if constexpr (std::is_same_v<T, BinExp>) {
          return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
        } else {
          return x.op == y.op && equal(x.operand, y.operand);
        }
      },
      a->node);
}

inline bool equal(const StmtPtr& a, const StmtPtr& b) {
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, SeqStmt>) {
          if (x.stmts.size() != y.stmts.size()) return false;
          for (size_t i = 0; i < x.stmts.size(); ++i)
            if (!equal(x.stmts[i], y.stmts[i])) return false;
          return true;
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          return equal(x.cond, y.cond) && equal(x.then_branch, y.then_branch) &&
                 equal(x.else_branch, y.else_branch);
        } else if constexpr (std::is_same_v<T, WhileStmt>) {
          return equal(x.cond, y.cond) && equal(x.body, y.body);
        } else if constexpr (std::is_same_v<T, AssignVar>) {
          return x.var == y.var && equal(x.value, y.value);
        } else if constexpr (std::is_same_v<T, AssignProp>) {
          return equal(x.obj, y.obj) && equal(x.key, y.key) &&
                 equal(x.value, y.value);
        } else if constexpr (std::is_same_v<T, CallStmt>) {
          return x.target == y.target && equal(x.fun, y.fun) &&
                 equal(x.self, y.self) && equal(x.args, y.args);
        } else if constexpr (std::is_same_v<T, ToObjStmt>) {
          return x.target == y.target && equal(x.value, y.value);
        } else if constexpr (std::is_same_v<T, DeleteStmt>) {
          return x.target == y.target && equal(x.obj, y.obj) &&
                 equal(x.key, y.key);
        } else if constexpr (std::is_same_v<T, NewFunStmt>) {
          return x.target == y.target && equal(x.meth, y.meth) &&
                 num_equal(x.arity, y.arity);
        } else if constexpr (std::is_same_v<T, NewCallStmt>) {
          return x.target == y.target && equal(x.ctor, y.ctor) &&
                 equal(x.args, y.args);
        } else if constexpr (std::is_same_v<T, ThrowStmt>) {
          return equal(x.value, y.value);
        } else if constexpr (std::is_same_v<T, TryStmt>) {
          return equal(x.try_body, y.try_body) && x.catch_var == y.catch_var &&
                 equal(x.catch_body, y.catch_body) &&
                 equal(x.finally_body, y.finally_body);
        } else if constexpr (std::is_same_v<T, LabelStmt>) {
          return x.label == y.label && equal(x.body, y.body);
        } else if constexpr (std::is_same_v<T, BreakStmt>) {
          return x.label == y.label && equal(x.value, y.value);
        } else {
          return x.var == y.var && equal(x.obj, y.obj) && equal(x.body, y.body);
        }
      },
      a->node);
}

inline bool equal(const DeclPtr& a, const DeclPtr& b) {
  if (a->bindings.size() != b->bindings.size()) return false;
  for (size_t i = 0; i < a->bindings.size(); ++i) {
    if (a->bindings[i].first != b->bindings[i].first) return false;
    if (!equal(a->bindings[i].second, b->bindings[i].second)) return false;
  }
  return equal(a->body, b->body);
}

// Visits every node id in the tree, depth first.
template <typename F>
void for_each_node(const ExpPtr& e, F&& f);
template <typename F>
void for_each_node(const StmtPtr& s, F&& f);
template <typename F>
void for_each_node(const DeclPtr& d, F&& f);

template <typename F>
void for_each_node(const MethPtr& m, F&& f) {
  f(m->id);
  if (auto* d = std::get_if<DeclPtr>(&m->body))
    for_each_node(*d, f);
  else
    for_each_node(std::get<StmtPtr>(m->body), f);
}

template <typename F>
void for_each_node(const ExpPtr& e, F&& f) {
  f(e->id);
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, MethLit>) {
          for_each_node(x.meth, f);
        } else if constexpr (std::is_same_v<T, BinExp>) {
          for_each_node(x.lhs, f);
          for_each_node(x.rhs, f);
        } else if constexpr (std::is_same_v<T, UnExp>) {
          for_each_node(x.operand, f);
        }
      },
      e->node);
}

template <typename F>
void for_each_node(const StmtPtr& s, F&& f) {
  f(s->id);
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SeqStmt>) {
          for (const auto& c : x.stmts) for_each_node(c, f);
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          for_each_node(x.cond, f);
          for_each_node(x.then_branch, f);
          for_each_node(x.else_branch, f);
        } else if constexpr (std::is_same_v<T, WhileStmt>) {
          for_each_node(x.cond, f);
          for_each_node(x.body, f);
        } else if constexpr (std::is_same_v<T, AssignVar>) {
          for_each_node(x.value, f);
        } else if constexpr (std::is_same_v<T, AssignProp>) {
          for_each_node(x.obj, f);
          for_each_node(x.key, f);
          for_each_node(x.value, f);
        } else if constexpr (std::is_same_v<T, CallStmt>) {
          for_each_node(x.fun, f);
          for_each_node(x.self, f);
          for_each_node(x.args, f);
        } else if constexpr (std::is_same_v<T, ToObjStmt>) {
          for_each_node(x.value, f);
        } else if constexpr (std::is_same_v<T, DeleteStmt>) {
          for_each_node(x.obj, f);
          for_each_node(x.key, f);
        } else if constexpr (std::is_same_v<T, NewFunStmt>) {
          for_each_node(x.meth, f);
        } else if constexpr (std::is_same_v<T, NewCallStmt>) {
          for_each_node(x.ctor, f);
          for_each_node(x.args, f);
        } else if constexpr (std::is_same_v<T, ThrowStmt>) {
          for_each_node(x.value, f);
        } else if constexpr (std::is_same_v<T, TryStmt>) {
          for_each_node(x.try_body, f);
          for_each_node(x.catch_body, f);
          for_each_node(x.finally_body, f);
        } else if constexpr (std::is_same_v<T, LabelStmt>) {
          for_each_node(x.body, f);
        } else if constexpr (std::is_same_v<T, BreakStmt>) {
          for_each_node(x.value, f);
        } else if constexpr (std::is_same_v<T, ForInStmt>) {
          for_each_node(x.obj, f);
          for_each_node(x.body, f);
        }
      },
      s->node);
}

template <typename F>
void for_each_node(const DeclPtr& d, F&& f) {
  f(d->id);
  for (const auto& [name, init] : d->bindings) for_each_node(init, f);
  for_each_node(d->body, f);
}

inline size_t node_count(const Program& p) {
  size_t n = 0;
  for_each_node(p.decl, [&](NodeId) { ++n; });
  return n;
}

}  // namespace njs::ir
