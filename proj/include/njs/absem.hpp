#pragma once

// Abstract small-step semantics. States live in partitions keyed by
// (program point, context); return continuations are store-allocated per
// (callee body, context) so call/return stays joinable. The transfer
// function mirrors the concrete machine transition for transition: same
// points, same allocation sites, same completion shapes.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "njs/alpha.hpp"
#include "njs/builtins.hpp"
#include "njs/dom_object.hpp"
#include "njs/domains.hpp"
#include "njs/ir.hpp"
#include "njs/tags.hpp"
#include "njs/trace.hpp"

namespace njs::absem {

using dom::AbsBool;
using dom::AbsNum;
using dom::AbsStr;
using dom::AbsStore;
using dom::AddrSet;
using dom::BValue;

// ----------------------------------------------------------- completions

// All completions a state may carry: a normal value, a thrown value, and
// per-label break values. At any single point at most the matching kind is
// populated, but finally frames buffer whole pending sets.
struct APending {
  BValue normal;
  BValue thrown;
  std::vector<std::pair<std::string, BValue>> breaks;  // sorted by label

  bool empty() const {
    return normal.is_bot() && thrown.is_bot() && breaks.empty();
  }
  void add_break(const std::string& l, const BValue& v) {
    auto it = std::lower_bound(
        breaks.begin(), breaks.end(), l,
        [](const auto& p, const std::string& s) { return p.first < s; });
    if (it != breaks.end() && it->first == l)
      it->second = dom::join(it->second, v);
    else
      breaks.insert(it, {l, v});
  }
  static APending of_normal(BValue v) { return {std::move(v), {}, {}}; }
  static APending of_thrown(BValue v) { return {{}, std::move(v), {}}; }
  static APending of_break(std::string l, BValue v) {
    APending p;
    p.add_break(l, v);
    return p;
  }

  friend bool operator==(const APending& a, const APending& b) {
    return a.normal == b.normal && a.thrown == b.thrown &&
           a.breaks == b.breaks;
  }
};

inline bool leq(const APending& a, const APending& b) {
  if (!dom::leq(a.normal, b.normal) || !dom::leq(a.thrown, b.thrown))
    return false;
  for (const auto& [l, v] : a.breaks) {
    auto it = std::lower_bound(
        b.breaks.begin(), b.breaks.end(), l,
        [](const auto& p, const std::string& s) { return p.first < s; });
    if (it == b.breaks.end() || it->first != l || !dom::leq(v, it->second))
      return false;
  }
  return true;
}

inline APending join(const APending& a, const APending& b) {
  APending out = a;
  out.normal = dom::join(a.normal, b.normal);
  out.thrown = dom::join(a.thrown, b.thrown);
  for (const auto& [l, v] : b.breaks) out.add_break(l, v);
  return out;
}

// ------------------------------------------------------------ kont frames

struct KontAddr {
  ir::NodeId body = 0;
  trace::Ctx ctx;

  friend bool operator==(const KontAddr& a, const KontAddr& b) {
    return a.body == b.body && a.ctx == b.ctx;
  }
  friend bool operator<(const KontAddr& a, const KontAddr& b) {
    if (a.body != b.body) return a.body < b.body;
    return a.ctx < b.ctx;
  }
};

struct ASeqK {
  std::vector<ir::StmtPtr> stmts;
  size_t next = 0;
  ir::NodeId node = 0;
};
struct AIfK {
  ir::NodeId node = 0;
};
struct AWhileK {
  ir::ExpPtr guard;
  ir::StmtPtr body;
  ir::NodeId node = 0;
};
struct ALabelK {
  std::string label;
  ir::NodeId node = 0;
};
struct AForK {
  std::vector<AbsStr> work;  // key descriptions still live this loop
  std::string var;
  ir::StmtPtr body;
  ir::NodeId node = 0;
};
struct ATryK {
  std::string catch_var;
  ir::StmtPtr catch_body;
  ir::StmtPtr finally_body;
  ir::NodeId node = 0;
};
struct ACatchK {
  ir::StmtPtr finally_body;
  ir::NodeId node = 0;
};
struct AFinallyK {
  APending pending;
  ir::NodeId node = 0;
};
struct AAddrK {
  KontAddr ka;
};
struct ADeclK {
  ir::NodeId node = 0;
};

using AKont = std::variant<ASeqK, AIfK, AWhileK, ALabelK, AForK, ATryK,
                           ACatchK, AFinallyK, AAddrK, ADeclK>;

inline ir::NodeId frame_node(const AKont& k) {
  return std::visit(
      [](const auto& f) -> ir::NodeId {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, AAddrK>)
          return f.ka.body;
        else
          return f.node;
      },
      k);
}

inline void add_work(std::vector<AbsStr>& work, const AbsStr& s) {
  for (const auto& w : work)
    if (w == s) return;
  work.push_back(s);
}

inline bool leq(const AKont& a, const AKont& b) {
  if (a.index() != b.index() || frame_node(a) != frame_node(b)) return false;
  if (const auto* fa = std::get_if<AForK>(&a)) {
    const auto& fb = std::get<AForK>(b);
    for (const auto& s : fa->work) {
      bool found = false;
      for (const auto& t : fb.work) found = found || s == t;
      if (!found) return false;
    }
    return true;
  }
  if (const auto* fa = std::get_if<AFinallyK>(&a))
    return leq(fa->pending, std::get<AFinallyK>(b).pending);
  if (const auto* fa = std::get_if<ASeqK>(&a))
    return fa->next == std::get<ASeqK>(b).next;
  if (const auto* fa = std::get_if<AAddrK>(&a))
    return fa->ka == std::get<AAddrK>(b).ka;
  return true;
}

inline AKont join(const AKont& a, const AKont& b) {
  if (a.index() != b.index() || frame_node(a) != frame_node(b))
    throw std::logic_error("kont frame shape mismatch at one partition");
  if (const auto* fa = std::get_if<AForK>(&a)) {
    AForK out = *fa;
    for (const auto& s : std::get<AForK>(b).work) add_work(out.work, s);
    return out;
  }
  if (const auto* fa = std::get_if<AFinallyK>(&a)) {
    AFinallyK out = *fa;
    out.pending = join(out.pending, std::get<AFinallyK>(b).pending);
    return out;
  }
  if (const auto* fa = std::get_if<ASeqK>(&a)) {
    if (fa->next != std::get<ASeqK>(b).next)
      throw std::logic_error("seq progress mismatch at one partition");
    return a;
  }
  if (const auto* fa = std::get_if<AAddrK>(&a)) {
    if (!(fa->ka == std::get<AAddrK>(b).ka))
      throw std::logic_error("kont address mismatch at one partition");
    return a;
  }
  return a;
}

inline bool leq(const std::vector<AKont>& a, const std::vector<AKont>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!leq(a[i], b[i])) return false;
  return true;
}

inline std::vector<AKont> join(const std::vector<AKont>& a,
                               const std::vector<AKont>& b) {
  if (a.size() != b.size())
    throw std::logic_error("kont depth mismatch at one partition");
  std::vector<AKont> out;
  out.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) out.push_back(join(a[i], b[i]));
  return out;
}

// -------------------------------------------------------------- kont store

// One stored return continuation: everything needed to resume the caller.
struct ARetK {
  ir::NodeId site = 0;
  trace::Ctx saved_ctx;
  std::string target;
  bool is_ctor = false;
  dom::AbsEnv env;
  BValue recv;
  std::vector<AKont> kont;
};

struct KontStore {
  std::map<KontAddr, std::vector<ARetK>> entries;

  // Returns true when the stored set grew or widened.
  bool add(const KontAddr& ka, ARetK r) {
    auto& v = entries[ka];
    for (auto& e : v) {
      if (e.site == r.site && e.saved_ctx == r.saved_ctx) {
        bool changed = false;
        if (!dom::leq_env(r.env, e.env)) {
          e.env = dom::join_env(e.env, r.env);
          changed = true;
        }
        if (!dom::leq(r.recv, e.recv)) {
          e.recv = dom::join(e.recv, r.recv);
          changed = true;
        }
        if (!leq(r.kont, e.kont)) {
          e.kont = join(e.kont, r.kont);
          changed = true;
        }
        return changed;
      }
    }
    v.push_back(std::move(r));
    return true;
  }

  const std::vector<ARetK>* find(const KontAddr& ka) const {
    auto it = entries.find(ka);
    return it == entries.end() ? nullptr : &it->second;
  }
};

// ------------------------------------------------------------------ state

struct AState {
  dom::AbsEnv env;
  AbsStore store;
  std::vector<AKont> kont;
  APending comp;

  friend bool operator==(const AState& a, const AState& b) {
    return a.env == b.env && a.store == b.store && a.comp == b.comp &&
           kont_equal(a.kont, b.kont);
  }
  static bool kont_equal(const std::vector<AKont>& x,
                         const std::vector<AKont>& y) {
    return leq(x, y) && leq(y, x);
  }
};

inline bool leq(const AState& a, const AState& b) {
  return dom::leq_env(a.env, b.env) && dom::leq(a.store, b.store) &&
         leq(a.kont, b.kont) && leq(a.comp, b.comp);
}

inline AState join(const AState& a, const AState& b) {
  AState out;
  out.env = dom::join_env(a.env, b.env);
  out.store = dom::join(a.store, b.store);
  out.kont = join(a.kont, b.kont);
  out.comp = join(a.comp, b.comp);
  return out;
}

// ------------------------------------------------------------- node index

struct NodeIndex {
  std::map<ir::NodeId, ir::StmtPtr> stmts;
  std::map<ir::NodeId, ir::DeclPtr> decls;

  void add(const ir::StmtPtr& s) {
    if (!s || stmts.count(s->id)) return;
    stmts.emplace(s->id, s);
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, ir::SeqStmt>) {
            for (const auto& c : x.stmts) add(c);
          } else if constexpr (std::is_same_v<T, ir::IfStmt>) {
            add(x.then_branch);
            add(x.else_branch);
          } else if constexpr (std::is_same_v<T, ir::WhileStmt>) {
            add(x.body);
          } else if constexpr (std::is_same_v<T, ir::NewFunStmt>) {
            add_meth(std::get<ir::MethLit>(x.meth->node).meth);
          } else if constexpr (std::is_same_v<T, ir::TryStmt>) {
            add(x.try_body);
            add(x.catch_body);
            add(x.finally_body);
          } else if constexpr (std::is_same_v<T, ir::LabelStmt>) {
            add(x.body);
          } else if constexpr (std::is_same_v<T, ir::ForInStmt>) {
            add(x.body);
          }
        },
        s->node);
  }
  void add(const ir::DeclPtr& d) {
    if (!d || decls.count(d->id)) return;
    decls.emplace(d->id, d);
    add(d->body);
  }
  void add_meth(const ir::MethPtr& m) {
    if (auto* d = std::get_if<ir::DeclPtr>(&m->body))
      add(*d);
    else
      add(std::get<ir::StmtPtr>(m->body));
  }
};

inline ir::NodeId body_node(const ir::MethPtr& m) {
  if (auto* d = std::get_if<ir::DeclPtr>(&m->body)) return (*d)->id;
  return std::get<ir::StmtPtr>(m->body)->id;
}

// ------------------------------------------------------------- abs world

struct AbsWorld {
  dom::AbsEnv env0;
  AbsStore store0;
  dom::AbsAddr global, object_proto, array_proto, function_proto, fn_eval;
  std::uint64_t global_token = 0;
};

inline AbsWorld make_abs_world(unsigned h) {
  builtins::World w = builtins::make_world();
  AbsWorld out;
  out.env0 = alpha::alpha_env(w.store, w.globals, h);
  out.store0 = alpha::alpha_store(w.store, h);
  out.global = alpha::alpha_addr(w.store, w.global.v, h);
  out.object_proto = alpha::alpha_addr(w.store, w.object_proto.v, h);
  out.array_proto = alpha::alpha_addr(w.store, w.array_proto.v, h);
  out.function_proto = alpha::alpha_addr(w.store, w.function_proto.v, h);
  out.fn_eval = alpha::alpha_addr(w.store, w.fn_eval.v, h);
  out.global_token = dom::addrs_token(AddrSet::of(out.global));
  return out;
}

// Analysis-wide knobs; the exception switch exists so harness self-tests
// can plant a deliberate soundness hole and watch the checker find it.
struct AbsRules {
  bool drop_exception_successors = false;
};

struct AnalysisContext {
  const ir::Program* prog = nullptr;
  NodeIndex index;
  AbsWorld world;
  trace::StrategyPtr strategy;
  unsigned h = 0;
  AbsRules rules;

  static AnalysisContext make(const ir::Program& p, trace::StrategyPtr strat,
                              AbsRules rules = {}) {
    AnalysisContext ctx;
    ctx.prog = &p;
    ctx.index.add(p.decl);
    ctx.h = strat ? strat->heap() : 0;
    ctx.world = make_abs_world(ctx.h);
    ctx.strategy = std::move(strat);
    ctx.rules = rules;
    return ctx;
  }
};

// ---------------------------------------------------------- expression eval

inline BValue read_var(const AState& st, const std::string& x) {
  auto it = st.env.find(x);
  if (it == st.env.end())
    throw std::logic_error("unbound variable in abstract eval: " + x);
  BValue out;
  for (const auto& a : it->second.v) out = dom::join(out, st.store.cell(a));
  return out;
}

inline void write_var(AState& st, const std::string& x, const BValue& v) {
  auto it = st.env.find(x);
  if (it == st.env.end())
    throw std::logic_error("unbound variable in abstract write: " + x);
  bool strong = it->second.size() == 1;
  for (const auto& a : it->second.v) {
    dom::OSlot& s = st.store.slot(a);
    BValue& cur = std::get<BValue>(s.payload);
    cur = (strong && !s.many) ? v : dom::join(cur, v);
  }
}

inline bool may_share_string(const AbsStr& a, const AbsStr& b) {
  if (a.is_bot() || b.is_bot()) return false;
  if (a.is_const()) return dom::str_admits(b, a.value);
  if (b.is_const()) return dom::str_admits(a, b.value);
  return (dom::detail::cat_set(a.kind) & dom::detail::cat_set(b.kind)) != 0;
}

inline AbsBool eq_abs(const AbsStore& st, const BValue& va, const BValue& vb,
                      bool strict) {
  if (va.is_bot() || vb.is_bot()) return AbsBool::bot();
  BValue x = va, y = vb;
  if (!strict) {
    // Booleans compare through their number images.
    auto fold = [](BValue& v) {
      if (v.boolean.may_true()) v.num = dom::join(v.num, AbsNum::of(1));
      if (v.boolean.may_false()) v.num = dom::join(v.num, AbsNum::of(0));
      v.boolean = AbsBool::bot();
    };
    fold(x);
    fold(y);
  }
  bool mt = false, mf = false;
  auto num_pair = [&](const AbsNum& a, const AbsNum& b) {
    if (a.is_bot() || b.is_bot()) return;
    if (a.is_const() && b.is_const())
      (a.value == b.value ? mt : mf) = true;
    else
      mt = mf = true;
  };
  num_pair(x.num, y.num);
  if (!x.str.is_bot() && !y.str.is_bot()) {
    if (x.str.is_const() && y.str.is_const()) {
      (x.str.value == y.str.value ? mt : mf) = true;
    } else {
      if (may_share_string(x.str, y.str)) mt = true;
      mf = true;
    }
  }
  if (!strict) {
    num_pair(x.num, dom::str_tonum(y.str));
    num_pair(dom::str_tonum(x.str), y.num);
  }
  if (!x.boolean.is_bot() && !y.boolean.is_bot()) {
    if ((x.boolean.may_true() && y.boolean.may_true()) ||
        (x.boolean.may_false() && y.boolean.may_false()))
      mt = true;
    if ((x.boolean.may_true() && y.boolean.may_false()) ||
        (x.boolean.may_false() && y.boolean.may_true()))
      mf = true;
  }
  if (!x.addrs.empty() && !y.addrs.empty()) {
    bool shared = false;
    for (const auto& a : x.addrs.v)
      if (y.addrs.contains(a)) {
        shared = true;
        if (st.has(a) && st.slot(a).many) mf = true;
      }
    if (shared) mt = true;
    if (!(x.addrs == y.addrs) || x.addrs.size() > 1) mf = true;
  }
  if (x.null_ && y.null_) mt = true;
  if (x.undef_ && y.undef_) mt = true;
  if (!strict && ((x.null_ && y.undef_) || (x.undef_ && y.null_))) mt = true;
  // Cross-type pairs that always compare unequal.
  auto bits = [](const BValue& v) { return v.typeset(); };
  std::uint8_t tx = bits(x), ty = bits(y);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      if (!(tx & (1 << i)) || !(ty & (1 << j))) continue;
      if (i == j) continue;  // same-type handled above
      bool ok_pair;
      if (strict) {
        ok_pair = false;
      } else {
        auto is_nu = [](int t) { return t == 4 || t == 5; };  // null, undef
        ok_pair = (i == 0 && j == 2) || (i == 2 && j == 0) ||
                  (is_nu(i) && is_nu(j));
      }
      if (!ok_pair) mf = true;
    }
  }
  std::uint8_t out = 0;
  if (mt) out |= 1;
  if (mf) out |= 2;
  return AbsBool{out};
}

inline AbsBool has_prop(const AbsStore& st, const AddrSet& bases,
                        const AbsStr& key) {
  AbsBool out = AbsBool::bot();
  for (const auto& base : bases.v) {
    // Precise only for the easy case: a const key found definitely present
    // on the object itself. Everything else stays a maybe.
    bool mt = false, definite = false;
    std::set<dom::AbsAddr> visited;
    std::vector<dom::AbsAddr> work = {base};
    bool first = true;
    while (!work.empty()) {
      dom::AbsAddr a = work.back();
      work.pop_back();
      if (!visited.insert(a).second || !st.has(a)) continue;
      const dom::AbsObject& o = st.obj(a);
      if (key.is_const()) {
        auto it = o.exact.find(key.value);
        if (it != o.exact.end() && !it->second.definitely_absent()) {
          mt = true;
          if (first && !it->second.maybe_absent && !st.slot(a).many)
            definite = true;
        }
        if (it == o.exact.end() &&
            !o.summary(dom::classify_str(key.value)).is_bot())
          mt = true;
      } else {
        for (const auto& [k, pv] : o.exact)
          if (!pv.definitely_absent() && dom::str_admits(key, k)) mt = true;
        std::uint8_t cats = dom::detail::cat_set(key.kind);
        if ((cats & 1) && !o.num_summary.is_bot()) mt = true;
        if ((cats & 2) && !o.spl_summary.is_bot()) mt = true;
        if ((cats & 4) && !o.other_summary.is_bot()) mt = true;
      }
      for (const auto& p : o.proto_addrs.v) work.push_back(p);
      first = false;
    }
    AbsBool r = AbsBool::bot();
    if (definite)
      r = AbsBool::of(true);
    else if (mt)
      r = AbsBool::top();
    else
      r = AbsBool::of(false);
    out = dom::join(out, r);
  }
  return out;
}

inline AbsStr type_of_abs(const AbsStore& st, const BValue& v) {
  AbsStr out = AbsStr::bot();
  auto add = [&](const char* s) { out = dom::join(out, AbsStr::of(s)); };
  if (!v.num.is_bot()) add("number");
  if (!v.boolean.is_bot()) add("boolean");
  if (!v.str.is_bot()) add("string");
  if (v.null_) add("object");
  if (v.undef_) add("undefined");
  for (const auto& a : v.addrs.v) {
    if (!st.has(a)) continue;
    const dom::AbsObject& o = st.obj(a);
    if (o.callable()) {
      add("function");
      if (st.slot(a).many) add("object");
    } else {
      add("object");
    }
  }
  return out;
}

inline BValue aeval(const AState& st, const ir::ExpPtr& e);

inline BValue aeval_un(const AState& st, ir::UnOp op, const BValue& v) {
  using ir::UnOp;
  switch (op) {
    case UnOp::Neg: {
      AbsNum n = dom::to_num(v);
      if (n.is_const()) return BValue::of_num(-n.value);
      return BValue::of_num(n);
    }
    case UnOp::BitNot: {
      AbsNum n = dom::to_num(v);
      if (n.is_bot()) return BValue::of_num(n);
      if (n.is_const())
        return BValue::of_num(
            static_cast<double>(~ecma::to_int32(n.value)));
      return BValue::of_num(AbsNum::top());
    }
    case UnOp::Not: return BValue::of_bool(dom::abs_not(dom::to_bool(v)));
    case UnOp::TypeOf: return BValue::of_str(type_of_abs(st.store, v));
    case UnOp::IsPrim: {
      AbsBool b = AbsBool::bot();
      if (v.may_nonaddr()) b = dom::join(b, AbsBool::of(true));
      if (!v.addrs.empty()) b = dom::join(b, AbsBool::of(false));
      return BValue::of_bool(b);
    }
    case UnOp::ToBool: return BValue::of_bool(dom::to_bool(v));
    case UnOp::ToStr: return BValue::of_str(dom::to_str(v));
    case UnOp::ToNum: return BValue::of_num(dom::to_num(v));
  }
  return BValue::bot();
}

inline BValue num_binop(const AbsNum& a, const AbsNum& b,
                        double (*f)(double, double)) {
  if (a.is_bot() || b.is_bot()) return BValue::of_num(AbsNum::bot());
  if (a.is_const() && b.is_const())
    return BValue::of_num(f(a.value, b.value));
  return BValue::of_num(AbsNum::top());
}

inline BValue aeval_bin(const AState& st, ir::BinOp op, const BValue& a,
                        const BValue& b) {
  using ir::BinOp;
  switch (op) {
    case BinOp::Add:
      return num_binop(dom::to_num(a), dom::to_num(b),
                       [](double x, double y) { return x + y; });
    case BinOp::Sub:
      return num_binop(dom::to_num(a), dom::to_num(b),
                       [](double x, double y) { return x - y; });
    case BinOp::Mul:
      return num_binop(dom::to_num(a), dom::to_num(b),
                       [](double x, double y) { return x * y; });
    case BinOp::Div:
      return num_binop(dom::to_num(a), dom::to_num(b),
                       [](double x, double y) { return x / y; });
    case BinOp::Mod:
      return num_binop(dom::to_num(a), dom::to_num(b),
                       [](double x, double y) { return std::fmod(x, y); });
    case BinOp::Shl:
      return num_binop(dom::to_num(a), dom::to_num(b), [](double x, double y) {
        return static_cast<double>(ecma::to_int32(x)
                                   << (ecma::to_uint32(y) & 31));
      });
    case BinOp::Shr:
      return num_binop(dom::to_num(a), dom::to_num(b), [](double x, double y) {
        return static_cast<double>(ecma::to_int32(x) >>
                                   (ecma::to_uint32(y) & 31));
      });
    case BinOp::UShr:
      return num_binop(dom::to_num(a), dom::to_num(b), [](double x, double y) {
        return static_cast<double>(ecma::to_uint32(x) >>
                                   (ecma::to_uint32(y) & 31));
      });
    case BinOp::Lt:
    case BinOp::Le: {
      AbsNum x = dom::to_num(a), y = dom::to_num(b);
      if (x.is_bot() || y.is_bot()) return BValue::of_bool(AbsBool::bot());
      if (x.is_const() && y.is_const())
        return BValue::of_bool(op == BinOp::Lt ? x.value < y.value
                                               : x.value <= y.value);
      if ((x.is_const() && x.value != x.value) ||
          (y.is_const() && y.value != y.value))
        return BValue::of_bool(false);  // NaN never compares
      return BValue::of_bool(AbsBool::top());
    }
    case BinOp::BitAnd:
      return num_binop(dom::to_num(a), dom::to_num(b), [](double x, double y) {
        return static_cast<double>(ecma::to_int32(x) & ecma::to_int32(y));
      });
    case BinOp::BitOr:
      return num_binop(dom::to_num(a), dom::to_num(b), [](double x, double y) {
        return static_cast<double>(ecma::to_int32(x) | ecma::to_int32(y));
      });
    case BinOp::BitXor:
      return num_binop(dom::to_num(a), dom::to_num(b), [](double x, double y) {
        return static_cast<double>(ecma::to_int32(x) ^ ecma::to_int32(y));
      });
    case BinOp::And: {
      AbsBool t = dom::to_bool(a);
      BValue out;
      if (t.may_true()) out = dom::join(out, b);
      if (t.may_false()) out = dom::join(out, a);
      return out;
    }
    case BinOp::Or: {
      AbsBool t = dom::to_bool(a);
      BValue out;
      if (t.may_true()) out = dom::join(out, a);
      if (t.may_false()) out = dom::join(out, b);
      return out;
    }
    case BinOp::StrConcat:
      return BValue::of_str(dom::str_concat(dom::to_str(a), dom::to_str(b)));
    case BinOp::StrLt:
    case BinOp::StrLe: {
      AbsStr x = dom::to_str(a), y = dom::to_str(b);
      if (x.is_bot() || y.is_bot()) return BValue::of_bool(AbsBool::bot());
      if (x.is_const() && y.is_const())
        return BValue::of_bool(op == BinOp::StrLt ? x.value < y.value
                                                  : x.value <= y.value);
      return BValue::of_bool(AbsBool::top());
    }
    case BinOp::LooseEq:
      return BValue::of_bool(eq_abs(st.store, a, b, false));
    case BinOp::StrictEq:
      return BValue::of_bool(eq_abs(st.store, a, b, true));
    case BinOp::Prop: {
      if (a.is_bot() || b.is_bot()) return BValue::bot();
      BValue out;
      if (!a.addrs.empty())
        out = dom::lookup_prop(st.store, a.addrs, dom::to_str(b));
      if (a.may_nonaddr()) out = dom::join(out, BValue::of_undef());
      return out;
    }
    case BinOp::InstanceOf: {
      if (a.is_bot() || b.is_bot()) return BValue::bot();
      bool mt = false;
      for (const auto& f : b.addrs.v) {
        if (!st.store.has(f) || !st.store.obj(f).callable()) continue;
        BValue proto = dom::lookup_prop(st.store, AddrSet::of(f),
                                        AbsStr::of("prototype"));
        // Reachability of any prototype address through the chain.
        std::set<dom::AbsAddr> visited;
        std::vector<dom::AbsAddr> work(a.addrs.v.begin(), a.addrs.v.end());
        while (!work.empty() && !mt) {
          dom::AbsAddr cur = work.back();
          work.pop_back();
          if (!visited.insert(cur).second || !st.store.has(cur)) continue;
          for (const auto& p : st.store.obj(cur).proto_addrs.v) {
            if (proto.addrs.contains(p)) mt = true;
            work.push_back(p);
          }
        }
      }
      return BValue::of_bool(mt ? AbsBool::top() : AbsBool::of(false));
    }
    case BinOp::In: {
      if (a.is_bot() || b.is_bot()) return BValue::bot();
      AbsBool out = AbsBool::bot();
      if (!b.addrs.empty())
        out = dom::join(out, has_prop(st.store, b.addrs, dom::to_str(a)));
      if (b.may_nonaddr()) out = dom::join(out, AbsBool::of(false));
      return BValue::of_bool(out);
    }
  }
  return BValue::bot();
}

inline BValue aeval(const AState& st, const ir::ExpPtr& e) {
  struct V {
    const AState& st;
    BValue operator()(const ir::NumLit& x) const {
      return BValue::of_num(x.value);
    }
    BValue operator()(const ir::BoolLit& x) const {
      return BValue::of_bool(x.value);
    }
    BValue operator()(const ir::StrLit& x) const {
      return BValue::of_str(x.value);
    }
    BValue operator()(const ir::UndefLit&) const { return BValue::of_undef(); }
    BValue operator()(const ir::NullLit&) const { return BValue::of_null(); }
    BValue operator()(const ir::VarRef& x) const {
      return read_var(st, x.name);
    }
    BValue operator()(const ir::MethLit&) const { return BValue::of_undef(); }
    BValue operator()(const ir::UnExp& x) const {
      BValue v = aeval(st, x.operand);
      if (v.is_bot()) return BValue::bot();
      return aeval_un(st, x.op, v);
    }
    BValue operator()(const ir::BinExp& x) const {
      BValue l = aeval(st, x.lhs), r = aeval(st, x.rhs);
      if (l.is_bot() || r.is_bot()) return BValue::bot();
      return aeval_bin(st, x.op, l, r);
    }
  };
  return std::visit(V{st}, e->node);
}

// ------------------------------------------------------------ object setup

// Mirrors how hidden properties land concretely: new entries arrive
// non-enumerable, existing entries keep their flag.
inline void abs_set_hidden(dom::AbsObject& o, bool strong,
                           const std::string& k, const BValue& v) {
  auto it = o.exact.find(k);
  if (it == o.exact.end()) {
    o.exact.emplace(k, dom::PropVal{v, !strong, false});
    return;
  }
  if (strong) {
    it->second.val = v;
    it->second.maybe_absent = false;
  } else {
    it->second.val = dom::join(it->second.val, v);
  }
}

inline dom::AbsAddr abs_fresh_object(AbsStore& st, ir::NodeId site,
                                     const trace::Ctx& hctx,
                                     const AddrSet& protos) {
  dom::AbsObject o;
  o.cls = ClassTag::Object;
  o.proto_addrs = protos;
  o.prim = BValue::of_undef();
  dom::AbsAddr a = dom::AbsAddr::object(site, ClassTag::Object, hctx);
  st.alloc(a, dom::OSlot{std::move(o), false});
  return a;
}

inline dom::AbsAddr abs_fresh_array(AbsStore& st, ir::NodeId site,
                                    const trace::Ctx& hctx,
                                    const dom::AbsAddr& array_proto) {
  dom::AbsObject o;
  o.cls = ClassTag::Array;
  o.proto_addrs = AddrSet::of(array_proto);
  o.prim = BValue::of_undef();
  o.exact.emplace("length", dom::PropVal{BValue::of_num(0.0), false, false});
  dom::AbsAddr a = dom::AbsAddr::object(site, ClassTag::Array, hctx);
  st.alloc(a, dom::OSlot{std::move(o), false});
  return a;
}

inline dom::AbsAddr abs_fresh_codeless_fn(AbsStore& st, ir::NodeId site,
                                          const trace::Ctx& hctx,
                                          const dom::AbsAddr& function_proto) {
  dom::AbsObject o;
  o.cls = ClassTag::Function;
  o.proto_addrs = AddrSet::of(function_proto);
  o.prim = BValue::of_undef();
  dom::AbsAddr a = dom::AbsAddr::object(site, ClassTag::Function, hctx);
  st.alloc(a, dom::OSlot{std::move(o), false});
  return a;
}

// ---------------------------------------------------------------- transfer

struct StepResult {
  std::vector<std::pair<trace::PartKey, AState>> succs;
  std::vector<KontAddr> kont_reads;
  std::vector<KontAddr> kont_writes;
};

// One application of the abstract transition to one partition state.
// Reads the kont store for return edges and extends it at calls.
class Transfer {
 public:
  Transfer(const AnalysisContext& actx, KontStore& konts,
           const trace::PartKey& key, const AState& st)
      : actx_(actx), konts_(konts), key_(key), st_(st) {}

  StepResult run() {
    const trace::PointKey& pt = key_.point;
    if (pt.kind == trace::PointKind::At && pt.aux.empty()) {
      auto di = actx_.index.decls.find(pt.node);
      if (di != actx_.index.decls.end()) {
        do_decl(*di->second);
        return std::move(out_);
      }
      auto si = actx_.index.stmts.find(pt.node);
      if (si == actx_.index.stmts.end())
        throw std::logic_error("no node for analysis point");
      std::visit([&](const auto& n) { exec(pt.node, n); }, si->second->node);
      return std::move(out_);
    }
    if (pt.kind == trace::PointKind::At) {
      do_forhead();
      return std::move(out_);
    }
    do_complete();
    return std::move(out_);
  }

 private:
  const AnalysisContext& actx_;
  KontStore& konts_;
  const trace::PartKey& key_;
  const AState& st_;
  StepResult out_;

  trace::Ctx hctx() const { return trace::heap_prefix(key_.ctx, actx_.h); }
  bool drop_exc() const { return actx_.rules.drop_exception_successors; }

  void succ(trace::PointKey pk, AState s, const trace::Ctx* ctx = nullptr) {
    out_.succs.push_back(
        {trace::PartKey{std::move(pk), ctx ? *ctx : key_.ctx}, std::move(s)});
  }
  void succ_at(const ir::StmtPtr& s, AState st) {
    st.comp = {};
    succ(trace::at(s->id), std::move(st));
  }
  void complete(ir::NodeId node, APending c, AState st) {
    trace::PointKind k = trace::PointKind::AfterVal;
    if (!c.thrown.is_bot())
      k = trace::PointKind::AfterExc;
    else if (!c.breaks.empty())
      k = trace::PointKind::AfterJump;
    st.comp = std::move(c);
    succ(trace::PointKey{k, node, ""}, std::move(st));
  }
  void complete_normal(ir::NodeId node, AState st) {
    complete(node, APending::of_normal(BValue::of_undef()), std::move(st));
  }
  void throw_str(ir::NodeId node, const char* what, AState st) {
    if (drop_exc()) return;
    complete(node, APending::of_thrown(BValue::of_str(std::string(what))),
             std::move(st));
  }

  // ------------------------------------------------------------ statements

  void do_decl(const ir::Decl& d) {
    AState st = st_;
    for (const auto& [x, init] : d.bindings) {
      BValue v = aeval(st, init);
      dom::AbsAddr cell = dom::AbsAddr::cell(init->id, hctx());
      st.store.alloc(cell, dom::OSlot{std::move(v), false});
      st.env[x] = AddrSet::of(cell);
    }
    st.kont.push_back(ADeclK{d.id});
    succ_at(d.body, std::move(st));
  }

  void exec(ir::NodeId id, const ir::SeqStmt& n) {
    if (n.stmts.empty()) {
      complete_normal(id, st_);
      return;
    }
    AState st = st_;
    st.kont.push_back(ASeqK{n.stmts, 1, id});
    succ_at(n.stmts[0], std::move(st));
  }

  void exec(ir::NodeId id, const ir::IfStmt& n) {
    AbsBool b = dom::to_bool(aeval(st_, n.cond));
    if (b.may_true()) {
      AState st = st_;
      st.kont.push_back(AIfK{id});
      succ_at(n.then_branch, std::move(st));
    }
    if (b.may_false()) {
      AState st = st_;
      st.kont.push_back(AIfK{id});
      succ_at(n.else_branch, std::move(st));
    }
  }

  void exec(ir::NodeId id, const ir::WhileStmt& n) {
    AbsBool b = dom::to_bool(aeval(st_, n.cond));
    if (b.may_true()) {
      AState st = st_;
      st.kont.push_back(AWhileK{n.cond, n.body, id});
      succ_at(n.body, std::move(st));
    }
    if (b.may_false()) complete_normal(id, st_);
  }

  void exec(ir::NodeId id, const ir::AssignVar& n) {
    AState st = st_;
    write_var(st, n.var, aeval(st_, n.value));
    complete_normal(id, std::move(st));
  }

  void exec(ir::NodeId id, const ir::AssignProp& n) {
    BValue ov = aeval(st_, n.obj);
    AbsStr key = dom::to_str(aeval(st_, n.key));
    BValue val = aeval(st_, n.value);
    if (ov.null_ || ov.undef_) throw_str(id, "TypeError", st_);
    bool prim_base = !ov.num.is_bot() || !ov.boolean.is_bot() ||
                     !ov.str.is_bot();
    if (ov.addrs.empty() && !prim_base) return;
    AState st = st_;
    bool range_err = false;
    bool strong = ov.addrs.size() == 1;
    for (const auto& a : ov.addrs.v) {
      bool single = strong && !st.store.slot(a).many;
      dom::UpdateEffect eff =
          dom::obj_update(st.store.obj_mut(a), single, key, val);
      range_err = range_err || eff.possible_range_error;
    }
    if (range_err) throw_str(id, "RangeError", st_);
    complete_normal(id, std::move(st));
  }

  void exec(ir::NodeId id, const ir::CallStmt& n) {
    do_call(id, n.target, aeval(st_, n.fun), aeval(st_, n.self),
            aeval(st_, n.args), false);
  }

  void exec(ir::NodeId id, const ir::NewCallStmt& n) {
    do_call(id, n.target, aeval(st_, n.ctor), BValue::of_undef(),
            aeval(st_, n.args), true);
  }

  void exec(ir::NodeId id, const ir::ToObjStmt& n) {
    BValue v = aeval(st_, n.value);
    if (v.null_ || v.undef_) throw_str(id, "TypeError", st_);
    AState st = st_;
    BValue target = BValue::bot();
    for (const auto& a : v.addrs.v)
      target = dom::join(target, BValue::of_addr(a));
    if (!v.num.is_bot()) {
      dom::AbsObject o;
      o.cls = ClassTag::Number;
      o.proto_addrs = AddrSet::of(actx_.world.object_proto);
      o.prim = BValue::of_num(v.num);
      dom::AbsAddr a = dom::AbsAddr::object(id, ClassTag::Number, hctx());
      st.store.alloc(a, dom::OSlot{std::move(o), false});
      target = dom::join(target, BValue::of_addr(a));
    }
    if (!v.boolean.is_bot()) {
      dom::AbsObject o;
      o.cls = ClassTag::Boolean;
      o.proto_addrs = AddrSet::of(actx_.world.object_proto);
      o.prim = BValue::of_bool(v.boolean);
      dom::AbsAddr a = dom::AbsAddr::object(id, ClassTag::Boolean, hctx());
      st.store.alloc(a, dom::OSlot{std::move(o), false});
      target = dom::join(target, BValue::of_addr(a));
    }
    if (!v.str.is_bot()) {
      dom::AbsObject o;
      o.cls = ClassTag::String;
      o.proto_addrs = AddrSet::of(actx_.world.object_proto);
      o.prim = BValue::of_str(v.str);
      AbsNum len = v.str.is_const()
                       ? AbsNum::of(static_cast<double>(v.str.value.size()))
                       : AbsNum::top();
      o.exact.emplace("length",
                      dom::PropVal{BValue::of_num(len), false, false});
      dom::AbsAddr a = dom::AbsAddr::object(id, ClassTag::String, hctx());
      st.store.alloc(a, dom::OSlot{std::move(o), false});
      target = dom::join(target, BValue::of_addr(a));
    }
    if (target.is_bot()) return;
    write_var(st, n.target, target);
    complete_normal(id, std::move(st));
  }

  void exec(ir::NodeId id, const ir::DeleteStmt& n) {
    BValue ov = aeval(st_, n.obj);
    AbsStr key = dom::to_str(aeval(st_, n.key));
    if (ov.null_ || ov.undef_) throw_str(id, "TypeError", st_);
    bool prim_base = !ov.num.is_bot() || !ov.boolean.is_bot() ||
                     !ov.str.is_bot();
    if (ov.addrs.empty() && !prim_base) return;
    AState st = st_;
    AbsBool result = AbsBool::bot();
    if (prim_base) result = dom::join(result, AbsBool::of(true));
    bool strong = ov.addrs.size() == 1;
    for (const auto& a : ov.addrs.v) {
      bool single = strong && !st.store.slot(a).many;
      dom::AbsObject& o = st.store.obj_mut(a);
      bool may_len = o.cls == ClassTag::Array && dom::str_admits(key, "length");
      bool only_len =
          o.cls == ClassTag::Array && key.is_const() && key.value == "length";
      if (may_len) result = dom::join(result, AbsBool::of(false));
      if (!only_len) result = dom::join(result, AbsBool::of(true));
      dom::obj_delete(o, single, key);
    }
    write_var(st, n.target, BValue::of_bool(result));
    complete_normal(id, std::move(st));
  }

  void exec(ir::NodeId id, const ir::NewFunStmt& n) {
    const auto& ml = std::get<ir::MethLit>(n.meth->node);
    AState st = st_;
    dom::AbsAddr pa = dom::AbsAddr::object(id, ClassTag::Object, hctx());
    dom::AbsAddr fa = dom::AbsAddr::object(id, ClassTag::Function, hctx());
    dom::AbsObject proto_obj;
    proto_obj.cls = ClassTag::Object;
    proto_obj.proto_addrs = AddrSet::of(actx_.world.object_proto);
    proto_obj.prim = BValue::of_undef();
    proto_obj.exact.emplace(
        "constructor", dom::PropVal{BValue::of_addr(fa), false, false});
    st.store.alloc(pa, dom::OSlot{std::move(proto_obj), false});
    dom::AbsObject fn;
    fn.cls = ClassTag::Function;
    fn.proto_addrs = AddrSet::of(actx_.world.function_proto);
    fn.prim = BValue::of_undef();
    fn.add_closure(dom::AbsClosure{st_.env, ml.meth});
    fn.exact.emplace("length",
                     dom::PropVal{BValue::of_num(n.arity), false, false});
    fn.exact.emplace("prototype",
                     dom::PropVal{BValue::of_addr(pa), false, false});
    st.store.alloc(fa, dom::OSlot{std::move(fn), false});
    write_var(st, n.target, BValue::of_addr(fa));
    complete_normal(id, std::move(st));
  }

  void exec(ir::NodeId id, const ir::ThrowStmt& n) {
    BValue v = aeval(st_, n.value);
    if (v.is_bot()) return;
    complete(id, APending::of_thrown(std::move(v)), st_);
  }

  void exec(ir::NodeId id, const ir::TryStmt& n) {
    AState st = st_;
    st.kont.push_back(ATryK{n.catch_var, n.catch_body, n.finally_body, id});
    succ_at(n.try_body, std::move(st));
  }

  void exec(ir::NodeId id, const ir::LabelStmt& n) {
    AState st = st_;
    st.kont.push_back(ALabelK{n.label, id});
    succ_at(n.body, std::move(st));
  }

  void exec(ir::NodeId id, const ir::BreakStmt& n) {
    BValue v = aeval(st_, n.value);
    if (v.is_bot()) return;
    complete(id, APending::of_break(n.label, std::move(v)), st_);
  }

  void exec(ir::NodeId id, const ir::ForInStmt& n) {
    BValue ov = aeval(st_, n.obj);
    if (ov.may_nonaddr()) complete_normal(id, st_);
    if (ov.addrs.empty()) return;
    AState st = st_;
    AForK f;
    f.work = dom::obj_enumerate(st.store, ov.addrs);
    f.var = n.var;
    f.body = n.body;
    f.node = id;
    st.kont.push_back(std::move(f));
    st.comp = {};
    succ(trace::at(id, "head"), std::move(st));
  }

  void do_forhead() {
    if (st_.kont.empty() || !std::holds_alternative<AForK>(st_.kont.back()))
      throw std::logic_error("loop head without a loop frame");
    const AForK& f = std::get<AForK>(st_.kont.back());
    for (const AbsStr& s : f.work) {
      AState st = st_;
      write_var(st, f.var, BValue::of_str(s));
      succ_at(f.body, std::move(st));
    }
    AState st = st_;
    ir::NodeId node = f.node;
    st.kont.pop_back();
    complete_normal(node, std::move(st));
  }

  // ----------------------------------------------------------------- calls

  AddrSet ctor_protos(const dom::AbsAddr& f) const {
    BValue pv = dom::lookup_prop(st_.store, AddrSet::of(f),
                                 AbsStr::of("prototype"));
    AddrSet out = pv.addrs;
    if (pv.may_nonaddr()) out.insert(actx_.world.object_proto);
    return out;
  }

  std::vector<std::uint8_t> own_prop_bit_options(const AbsStore& store,
                                                 const BValue& av,
                                                 const std::string& k) const {
    std::uint8_t bits = 0;
    if (av.may_nonaddr()) bits |= dom::kUndefBit;
    for (const auto& a : av.addrs.v) {
      const dom::AbsObject& o = store.obj(a);
      auto it = o.exact.find(k);
      if (it != o.exact.end() && !it->second.definitely_absent()) {
        bits |= it->second.val.typeset();
        if (it->second.maybe_absent) bits |= dom::kUndefBit;
      } else {
        bits |= o.num_summary.typeset() | dom::kUndefBit;
      }
    }
    if (bits == 0) bits = dom::kUndefBit;
    std::vector<std::uint8_t> out;
    for (int i = 0; i < 6; ++i)
      if (bits & (1 << i)) out.push_back(static_cast<std::uint8_t>(1 << i));
    return out;
  }

  // Every context a concrete run of this call could enter. Receivers fork
  // per address and arguments fork per type bit, so strategies only ever
  // see events a single concrete execution could present.
  std::set<trace::Ctx> call_contexts(ir::NodeId site, ir::NodeId callee,
                                     const BValue& recv, const BValue& av,
                                     const AbsStore& store) const {
    std::vector<std::pair<AddrSet, std::uint8_t>> selfs;
    for (const auto& a : recv.addrs.v)
      selfs.push_back({AddrSet::of(a), dom::kAddrBit});
    std::uint8_t prim_bits = recv.typeset() & ~dom::kAddrBit;
    for (int i = 0; i < 6; ++i)
      if (prim_bits & (1 << i))
        selfs.push_back({AddrSet{}, static_cast<std::uint8_t>(1 << i)});
    std::array<std::vector<std::uint8_t>, 4> abits;
    for (int i = 0; i < 4; ++i)
      abits[i] = own_prop_bit_options(store, av, std::to_string(i));
    std::set<trace::Ctx> out;
    for (const auto& [saddrs, sbit] : selfs) {
      trace::CallEvent ev;
      ev.site = site;
      ev.callee = callee;
      ev.self_addrs = saddrs;
      ev.self_typeset = sbit;
      ev.global_token = actx_.world.global_token;
      for (std::uint8_t b0 : abits[0])
        for (std::uint8_t b1 : abits[1])
          for (std::uint8_t b2 : abits[2])
            for (std::uint8_t b3 : abits[3]) {
              ev.arg_typesets = {b0, b1, b2, b3};
              out.insert(actx_.strategy->on_call(key_.ctx, ev));
            }
    }
    return out;
  }

  void do_call(ir::NodeId id, const std::string& target, const BValue& fv,
               const BValue& sv, const BValue& av, bool is_ctor) {
    bool may_err = fv.may_nonaddr();
    for (const auto& fa : fv.addrs.v) {
      const dom::AbsObject& f = st_.store.obj(fa);
      if (!f.callable()) may_err = true;
      for (unsigned n = 1; n < 32; ++n)
        if (f.natives & (1u << n))
          native_call(id, target, fa, static_cast<NativeId>(n), sv, av,
                      is_ctor);
      for (const auto& cl : f.closures)
        closure_call(id, target, fa, cl, sv, av, is_ctor);
    }
    if (may_err) throw_str(id, "TypeError", st_);
  }

  void native_call(ir::NodeId id, const std::string& target,
                   const dom::AbsAddr& fa, NativeId native, const BValue& sv,
                   const BValue& av, bool is_ctor) {
    AState st = st_;
    BValue result;
    switch (native) {
      case NativeId::CtorArray:
        result = BValue::of_addr(
            abs_fresh_array(st.store, id, hctx(), actx_.world.array_proto));
        break;
      case NativeId::CtorFunction:
        result = BValue::of_addr(abs_fresh_codeless_fn(
            st.store, id, hctx(), actx_.world.function_proto));
        break;
      case NativeId::CtorObject:
        result = BValue::of_addr(abs_fresh_object(
            st.store, id, hctx(), AddrSet::of(actx_.world.object_proto)));
        break;
      default:
        if (is_ctor) {
          dom::AbsAddr recv =
              abs_fresh_object(st.store, id, hctx(), ctor_protos(fa));
          BValue r =
              apply_native(st.store, native, BValue::of_addr(recv), av);
          result = r.only_addrs();
          if (r.may_nonaddr())
            result = dom::join(result, BValue::of_addr(recv));
        } else {
          result = apply_native(st.store, native, sv, av);
        }
    }
    if (result.is_bot()) return;
    write_var(st, target, result);
    complete_normal(id, std::move(st));
  }

  BValue abs_arg0(const AbsStore& store, const BValue& av) const {
    BValue out;
    if (av.may_nonaddr()) out = dom::join(out, BValue::of_undef());
    for (const auto& a : av.addrs.v) {
      const dom::AbsObject& o = store.obj(a);
      auto it = o.exact.find("0");
      if (it != o.exact.end() && !it->second.definitely_absent()) {
        out = dom::join(out, it->second.val);
        if (it->second.maybe_absent)
          out = dom::join(out, BValue::of_undef());
      } else {
        out = dom::join(out, o.num_summary);
        out = dom::join(out, BValue::of_undef());
      }
    }
    return out;
  }

  AbsBool own_has(const dom::AbsObject& o, bool many,
                  const AbsStr& key) const {
    if (key.is_bot()) return AbsBool::bot();
    if (key.is_const()) {
      auto it = o.exact.find(key.value);
      if (it != o.exact.end() && !it->second.definitely_absent()) {
        if (!it->second.maybe_absent && !many) return AbsBool::of(true);
        return AbsBool::top();
      }
      if (!o.summary(dom::classify_str(key.value)).is_bot())
        return AbsBool::top();
      return AbsBool::of(false);
    }
    for (const auto& [k, pv] : o.exact)
      if (!pv.definitely_absent() && dom::str_admits(key, k))
        return AbsBool::top();
    std::uint8_t cats = dom::detail::cat_set(key.kind);
    if (((cats & 1) && !o.num_summary.is_bot()) ||
        ((cats & 2) && !o.spl_summary.is_bot()) ||
        ((cats & 4) && !o.other_summary.is_bot()))
      return AbsBool::top();
    return AbsBool::of(false);
  }

  BValue apply_native(AbsStore& store, NativeId native, const BValue& self,
                      const BValue& av) const {
    switch (native) {
      case NativeId::IsNaN: {
        AbsNum n = dom::to_num(abs_arg0(store, av));
        if (n.is_bot()) return BValue::of_bool(AbsBool::bot());
        if (n.is_const()) return BValue::of_bool(std::isnan(n.value));
        return BValue::of_bool(AbsBool::top());
      }
      case NativeId::ProtoToString: return BValue::of_str(dom::to_str(self));
      case NativeId::ProtoValueOf: return self;
      case NativeId::ProtoHasOwn: {
        AbsBool out = AbsBool::bot();
        if (self.may_nonaddr()) out = dom::join(out, AbsBool::of(false));
        AbsStr key = dom::to_str(abs_arg0(store, av));
        for (const auto& a : self.addrs.v)
          out = dom::join(
              out, own_has(store.obj(a), store.slot(a).many, key));
        return BValue::of_bool(out);
      }
      case NativeId::ArrayPush: {
        BValue out;
        if (self.may_nonaddr()) out = dom::join(out, BValue::of_undef());
        BValue el = abs_arg0(store, av);
        bool strong = self.addrs.size() == 1;
        for (const auto& sa : self.addrs.v) {
          bool single = strong && !store.slot(sa).many;
          AbsNum n = dom::to_num(dom::lookup_prop(store, AddrSet::of(sa),
                                                  AbsStr::of("length")));
          dom::AbsObject& o = store.obj_mut(sa);
          if (n.is_const()) {
            double nn = n.value;
            if (!(nn >= 0) || nn > 4294967294.0) nn = 0;
            dom::obj_update(o, single, AbsStr::of(ecma::num_to_string(nn)),
                            el);
            abs_set_hidden(o, single, "length", BValue::of_num(nn + 1));
            out = dom::join(out, BValue::of_num(nn + 1));
          } else {
            dom::obj_update(o, false, AbsStr::mid(AbsStr::Kind::SNum), el);
            abs_set_hidden(o, false, "length",
                           BValue::of_num(AbsNum::top()));
            out = dom::join(out, BValue::of_num(AbsNum::top()));
          }
        }
        return out;
      }
      case NativeId::ArrayPop: {
        BValue out;
        if (self.may_nonaddr()) out = dom::join(out, BValue::of_undef());
        bool strong = self.addrs.size() == 1;
        for (const auto& sa : self.addrs.v) {
          bool single = strong && !store.slot(sa).many;
          AbsNum n = dom::to_num(dom::lookup_prop(store, AddrSet::of(sa),
                                                  AbsStr::of("length")));
          if (n.is_const()) {
            double nn = n.value;
            dom::AbsObject& o = store.obj_mut(sa);
            if (!(nn >= 1)) {
              abs_set_hidden(o, single, "length", BValue::of_num(0.0));
              out = dom::join(out, BValue::of_undef());
              continue;
            }
            AbsStr k = AbsStr::of(ecma::num_to_string(nn - 1));
            BValue v = dom::lookup_prop(store, AddrSet::of(sa), k);
            dom::obj_delete(store.obj_mut(sa), single, k);
            abs_set_hidden(store.obj_mut(sa), single, "length",
                           BValue::of_num(nn - 1));
            out = dom::join(out, v);
          } else {
            AbsStr k = AbsStr::mid(AbsStr::Kind::SNum);
            BValue v = dom::lookup_prop(store, AddrSet::of(sa), k);
            dom::obj_delete(store.obj_mut(sa), false, k);
            abs_set_hidden(store.obj_mut(sa), false, "length",
                           BValue::of_num(AbsNum::top()));
            out = dom::join(out, dom::join(v, BValue::of_undef()));
          }
        }
        return out;
      }
      case NativeId::ArrayJoin: {
        BValue out;
        if (self.may_nonaddr())
          out = dom::join(out, BValue::of_str(std::string()));
        for (const auto& sa : self.addrs.v) {
          AbsNum n = dom::to_num(dom::lookup_prop(store, AddrSet::of(sa),
                                                  AbsStr::of("length")));
          if (n.is_const() && !(n.value >= 1))
            out = dom::join(out, BValue::of_str(std::string()));
          else
            out = dom::join(out, BValue::of_str(AbsStr::top()));
        }
        return out;
      }
      case NativeId::Eval:
      case NativeId::Print:
      case NativeId::Noop:
      case NativeId::CtorObject:
      case NativeId::CtorArray:
      case NativeId::CtorFunction:
      case NativeId::None: return BValue::of_undef();
    }
    return BValue::of_undef();
  }

  void closure_call(ir::NodeId id, const std::string& target,
                    const dom::AbsAddr& fa, const dom::AbsClosure& cl,
                    const BValue& sv, const BValue& av, bool is_ctor) {
    AbsStore base = st_.store;
    BValue recv = sv;
    if (is_ctor) {
      dom::AbsAddr ra = abs_fresh_object(base, id, hctx(), ctor_protos(fa));
      recv = BValue::of_addr(ra);
    }
    ir::NodeId body_id = body_node(cl.meth);
    std::set<trace::Ctx> ctxs =
        call_contexts(id, cl.meth->id, recv, av, base);
    for (const trace::Ctx& c2 : ctxs) {
      AState st;
      st.store = base;
      trace::Ctx h2 = trace::heap_prefix(c2, actx_.h);
      dom::AbsAddr selfcell = dom::AbsAddr::cell(cl.meth->id, h2);
      st.store.alloc(selfcell, dom::OSlot{BValue{recv}, false});
      dom::AbsAddr argscell = dom::AbsAddr::cell(body_id, h2);
      st.store.alloc(argscell, dom::OSlot{BValue{av}, false});
      st.env = cl.env;
      st.env["self"] = AddrSet::of(selfcell);
      st.env["args"] = AddrSet::of(argscell);
      KontAddr ka{body_id, c2};
      ARetK ret;
      ret.site = id;
      ret.saved_ctx = key_.ctx;
      ret.target = target;
      ret.is_ctor = is_ctor;
      ret.env = st_.env;
      ret.recv = recv;
      ret.kont = st_.kont;
      if (konts_.add(ka, std::move(ret))) out_.kont_writes.push_back(ka);
      st.kont = {AAddrK{ka}};
      succ(trace::at(body_id), std::move(st), &c2);
    }
  }

  // ------------------------------------------------------------ completion

  void propagate(ir::NodeId node, AState st) {
    APending c = st.comp;
    complete(node, std::move(c), std::move(st));
  }

  void do_complete() {
    if (st_.kont.empty()) return;  // the whole program finished here
    const trace::PointKind kind = key_.point.kind;
    const AKont& top = st_.kont.back();
    if (const auto* f = std::get_if<ASeqK>(&top)) {
      if (kind == trace::PointKind::AfterVal && f->next < f->stmts.size()) {
        AState st = st_;
        std::get<ASeqK>(st.kont.back()).next++;
        succ_at(f->stmts[f->next], std::move(st));
        return;
      }
      AState st = st_;
      ir::NodeId node = f->node;
      st.kont.pop_back();
      propagate(node, std::move(st));
      return;
    }
    if (const auto* f = std::get_if<AIfK>(&top)) {
      AState st = st_;
      ir::NodeId node = f->node;
      st.kont.pop_back();
      propagate(node, std::move(st));
      return;
    }
    if (const auto* f = std::get_if<AWhileK>(&top)) {
      if (kind == trace::PointKind::AfterVal) {
        AbsBool b = dom::to_bool(aeval(st_, f->guard));
        if (b.may_true()) {
          AState st = st_;
          succ_at(f->body, std::move(st));
        }
        if (b.may_false()) {
          AState st = st_;
          ir::NodeId node = f->node;
          st.kont.pop_back();
          complete_normal(node, std::move(st));
        }
        return;
      }
      AState st = st_;
      ir::NodeId node = f->node;
      st.kont.pop_back();
      propagate(node, std::move(st));
      return;
    }
    if (const auto* f = std::get_if<ALabelK>(&top)) {
      ir::NodeId node = f->node;
      if (kind == trace::PointKind::AfterJump) {
        APending rest;
        BValue caught;
        for (const auto& [l, v] : st_.comp.breaks) {
          if (l == f->label)
            caught = v;
          else
            rest.add_break(l, v);
        }
        if (!caught.is_bot()) {
          AState st = st_;
          st.kont.pop_back();
          complete(node, APending::of_normal(std::move(caught)),
                   std::move(st));
        }
        if (!rest.breaks.empty()) {
          AState st = st_;
          st.kont.pop_back();
          complete(node, std::move(rest), std::move(st));
        }
        return;
      }
      AState st = st_;
      st.kont.pop_back();
      propagate(node, std::move(st));
      return;
    }
    if (const auto* f = std::get_if<AForK>(&top)) {
      if (kind == trace::PointKind::AfterVal) {
        AState st = st_;
        st.comp = {};
        succ(trace::at(f->node, "head"), std::move(st));
        return;
      }
      AState st = st_;
      ir::NodeId node = f->node;
      st.kont.pop_back();
      propagate(node, std::move(st));
      return;
    }
    if (const auto* f = std::get_if<ATryK>(&top)) {
      ATryK k = *f;
      if (kind == trace::PointKind::AfterExc) {
        AState st = st_;
        st.kont.pop_back();
        dom::AbsAddr cell = dom::AbsAddr::cell(k.node, hctx());
        st.store.alloc(cell, dom::OSlot{BValue{st_.comp.thrown}, false});
        st.env[k.catch_var] = AddrSet::of(cell);
        st.kont.push_back(ACatchK{k.finally_body, k.node});
        succ_at(k.catch_body, std::move(st));
        return;
      }
      AState st = st_;
      st.kont.pop_back();
      st.kont.push_back(AFinallyK{st_.comp, k.node});
      succ_at(k.finally_body, std::move(st));
      return;
    }
    if (const auto* f = std::get_if<ACatchK>(&top)) {
      ACatchK k = *f;
      AState st = st_;
      st.kont.pop_back();
      st.kont.push_back(AFinallyK{st_.comp, k.node});
      succ_at(k.finally_body, std::move(st));
      return;
    }
    if (const auto* f = std::get_if<AFinallyK>(&top)) {
      AFinallyK k = *f;
      AState st = st_;
      st.kont.pop_back();
      if (kind == trace::PointKind::AfterVal) {
        const APending& p = k.pending;
        if (!p.normal.is_bot())
          complete(k.node, APending::of_normal(p.normal), st);
        if (!p.thrown.is_bot())
          complete(k.node, APending::of_thrown(p.thrown), st);
        if (!p.breaks.empty()) {
          APending brks;
          brks.breaks = p.breaks;
          complete(k.node, std::move(brks), st);
        }
        return;
      }
      propagate(k.node, std::move(st));
      return;
    }
    if (const auto* f = std::get_if<AAddrK>(&top)) {
      KontAddr ka = f->ka;
      out_.kont_reads.push_back(ka);
      const std::vector<ARetK>* entries = konts_.find(ka);
      if (!entries) return;
      for (const ARetK& e : *entries) {
        AState st;
        st.env = e.env;
        st.store = st_.store;
        st.kont = e.kont;
        if (kind == trace::PointKind::AfterVal) {
          BValue rv = st_.comp.normal;
          if (e.is_ctor) {
            BValue fixed = rv.only_addrs();
            if (rv.may_nonaddr()) fixed = dom::join(fixed, e.recv);
            rv = std::move(fixed);
          }
          write_var(st, e.target, rv);
          st.comp = APending::of_normal(BValue::of_undef());
          succ(trace::after_val(e.site), std::move(st), &e.saved_ctx);
        } else if (kind == trace::PointKind::AfterExc) {
          st.comp = APending::of_thrown(st_.comp.thrown);
          succ(trace::after_exc(e.site), std::move(st), &e.saved_ctx);
        } else {
          throw std::logic_error("break crossed a call boundary");
        }
      }
      return;
    }
    if (const auto* f = std::get_if<ADeclK>(&top)) {
      AState st = st_;
      ir::NodeId node = f->node;
      st.kont.pop_back();
      propagate(node, std::move(st));
      return;
    }
    throw std::logic_error("unhandled continuation frame");
  }
};

inline StepResult step_state(const AnalysisContext& actx, KontStore& konts,
                             const trace::PartKey& key, const AState& st) {
  return Transfer(actx, konts, key, st).run();
}

// -------------------------------------------------------------- initial

inline trace::PartKey initial_key(const ir::Program& p) {
  return trace::PartKey{trace::at(p.decl->id), trace::Ctx{}};
}

inline AState initial_state(const AnalysisContext& actx) {
  AState st;
  st.env = actx.world.env0;
  st.store = actx.world.store0;
  return st;
}

}  // namespace njs::absem
