#pragma once

// Well-formedness checks run after parsing: unbound variables and labels,
// duplicate decl bindings, method literals outside newfun, duplicate node
// ids. Interpreters assume a clean validate pass.

#include <set>
#include <string>
#include <vector>

#include "njs/ir.hpp"

namespace njs::ir {

struct Diagnostic {
  NodeId node;
  std::string message;
};

namespace detail {

struct Validator {
  std::vector<Diagnostic> out;
  std::vector<std::set<std::string>> var_scopes;
  std::vector<std::string> label_scope;  // cleared at method boundaries

  bool bound(const std::string& name) const {
    for (auto it = var_scopes.rbegin(); it != var_scopes.rend(); ++it)
      if (it->count(name)) return true;
    return false;
  }

  bool label_bound(const std::string& l) const {
    for (auto it = label_scope.rbegin(); it != label_scope.rend(); ++it)
      if (*it == l) return true;
    return false;
  }

  void use_var(NodeId at, const std::string& name) {
    if (!bound(name))
      out.push_back({at, "unbound variable '" + name + "'"});
  }

  void exp(const ExpPtr& e, bool meth_ok = false) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, VarRef>) {
            use_var(e->id, x.name);
          } else if constexpr (std::is_same_v<T, MethLit>) {
            if (!meth_ok)
              out.push_back(
                  {e->id, "method literal only allowed as newfun operand"});
            meth(x.meth);
          } else if constexpr (std::is_same_v<T, BinExp>) {
            exp(x.lhs);
            exp(x.rhs);
          } else if constexpr (std::is_same_v<T, UnExp>) {
            exp(x.operand);
          }
        },
        e->node);
  }

  void meth(const MethPtr& m) {
    var_scopes.push_back({"self", "args"});
    std::vector<std::string> saved_labels;
    saved_labels.swap(label_scope);
    if (auto* d = std::get_if<DeclPtr>(&m->body))
      decl(*d);
    else
      stmt(std::get<StmtPtr>(m->body));
    label_scope.swap(saved_labels);
    var_scopes.pop_back();
  }

  void stmt(const StmtPtr& s) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, SeqStmt>) {
            for (const auto& c : x.stmts) stmt(c);
          } else if constexpr (std::is_same_v<T, IfStmt>) {
            exp(x.cond);
            stmt(x.then_branch);
            stmt(x.else_branch);
          } else if constexpr (std::is_same_v<T, WhileStmt>) {
            exp(x.cond);
            stmt(x.body);
          } else if constexpr (std::is_same_v<T, AssignVar>) {
            use_var(s->id, x.var);
            exp(x.value);
          } else if constexpr (std::is_same_v<T, AssignProp>) {
            exp(x.obj);
            exp(x.key);
            exp(x.value);
          } else if constexpr (std::is_same_v<T, CallStmt>) {
            use_var(s->id, x.target);
            exp(x.fun);
            exp(x.self);
            exp(x.args);
          } else if constexpr (std::is_same_v<T, ToObjStmt>) {
            use_var(s->id, x.target);
            exp(x.value);
          } else if constexpr (std::is_same_v<T, DeleteStmt>) {
            use_var(s->id, x.target);
            exp(x.obj);
            exp(x.key);
          } else if constexpr (std::is_same_v<T, NewFunStmt>) {
            use_var(s->id, x.target);
            exp(x.meth, /*meth_ok=*/true);
          } else if constexpr (std::is_same_v<T, NewCallStmt>) {
            use_var(s->id, x.target);
            exp(x.ctor);
            exp(x.args);
          } else if constexpr (std::is_same_v<T, ThrowStmt>) {
            exp(x.value);
          } else if constexpr (std::is_same_v<T, TryStmt>) {
            stmt(x.try_body);
            if (bound(x.catch_var))
              out.push_back({s->id, "catch variable '" + x.catch_var +
                                        "' shadows an existing binding"});
            var_scopes.push_back({x.catch_var});
            stmt(x.catch_body);
            var_scopes.pop_back();
            stmt(x.finally_body);
          } else if constexpr (std::is_same_v<T, LabelStmt>) {
            label_scope.push_back(x.label);
            stmt(x.body);
            label_scope.pop_back();
          } else if constexpr (std::is_same_v<T, BreakStmt>) {
            if (!label_bound(x.label))
              out.push_back({s->id, "break to unbound label '" + x.label + "'"});
            exp(x.value);
          } else if constexpr (std::is_same_v<T, ForInStmt>) {
            use_var(s->id, x.var);
            exp(x.obj);
            stmt(x.body);
          }
        },
        s->node);
  }

  void decl(const DeclPtr& d) {
    std::set<std::string> names;
    var_scopes.push_back({});
    for (const auto& [name, init] : d->bindings) {
      if (!names.insert(name).second)
        out.push_back({d->id, "duplicate binding '" + name + "'"});
      exp(init);  // sees bindings declared earlier in this decl
      var_scopes.back().insert(name);
    }
    stmt(d->body);
    var_scopes.pop_back();
  }
};

}  // namespace detail

// `globals` names pre-bound variables supplied by the runtime environment.
inline std::vector<Diagnostic> validate(
    const Program& p, const std::set<std::string>& globals = {"global"}) {
  detail::Validator v;
  v.var_scopes.push_back(globals);
  v.decl(p.decl);

  std::set<NodeId> seen;
  for_each_node(p.decl, [&](NodeId id) {
    if (!seen.insert(id).second)
      v.out.push_back({id, "duplicate node id"});
  });
  return v.out;
}

}  // namespace njs::ir
