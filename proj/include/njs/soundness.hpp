#pragma once

// Stepwise soundness harness. Runs the analysis to a fixpoint, then drives
// the concrete machine with an instrumentation hook and checks that every
// visited point abstracts into the partition that claims to cover it. The
// walk includes the continuation stack: frames within the current activation
// check against the partition's kont, and each call boundary checks against
// the stored return continuations.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "njs/absem.hpp"
#include "njs/alpha.hpp"
#include "njs/concrete.hpp"
#include "njs/engine.hpp"
#include "njs/ir.hpp"
#include "njs/trace.hpp"

namespace njs::soundness {

struct Violation {
  trace::PartKey key;
  std::uint64_t step = 0;
  std::string reason;
};

struct Report {
  bool analysis_complete = true;
  concrete::ResultKind run_kind = concrete::ResultKind::Value;
  std::uint64_t steps_checked = 0;
  engine::Stats stats;
  std::vector<Violation> violations;

  bool ok() const { return analysis_complete && violations.empty(); }
};

inline absem::APending alpha_completion(const concrete::CStore& st,
                                        const concrete::Completion& c,
                                        unsigned h) {
  switch (c.kind) {
    case concrete::Completion::Kind::Normal:
      return absem::APending::of_normal(alpha::alpha_value(st, c.value, h));
    case concrete::Completion::Kind::Brk:
      return absem::APending::of_break(c.label,
                                       alpha::alpha_value(st, c.value, h));
    case concrete::Completion::Kind::Thrown:
      return absem::APending::of_thrown(alpha::alpha_value(st, c.value, h));
  }
  return {};
}

namespace detail {

inline std::string frame_tag(const concrete::CFrame& f) {
  return "frame node " +
         std::to_string(std::visit(
             [](const auto& x) -> ir::NodeId {
               using T = std::decay_t<decltype(x)>;
               if constexpr (std::is_same_v<T, concrete::RetK>)
                 return x.site;
               else
                 return x.node;
             },
             f));
}

// One concrete frame against one abstract frame of the same activation.
inline bool frame_covered(const concrete::CStore& cst,
                          const concrete::CFrame& cf, const absem::AKont& af,
                          unsigned h) {
  if (const auto* k = std::get_if<concrete::SeqK>(&cf)) {
    const auto* a = std::get_if<absem::ASeqK>(&af);
    return a && a->node == k->node && a->next == k->next;
  }
  if (const auto* k = std::get_if<concrete::IfK>(&cf)) {
    const auto* a = std::get_if<absem::AIfK>(&af);
    return a && a->node == k->node;
  }
  if (const auto* k = std::get_if<concrete::WhileK>(&cf)) {
    const auto* a = std::get_if<absem::AWhileK>(&af);
    return a && a->node == k->node;
  }
  if (const auto* k = std::get_if<concrete::LabelK>(&cf)) {
    const auto* a = std::get_if<absem::ALabelK>(&af);
    return a && a->node == k->node && a->label == k->label;
  }
  if (const auto* k = std::get_if<concrete::ForK>(&cf)) {
    const auto* a = std::get_if<absem::AForK>(&af);
    if (!a || a->node != k->node) return false;
    // Every key the loop may still visit must be admitted by the abstract
    // work set; keys already consumed need no cover.
    for (size_t i = k->next; i < k->keys.size(); ++i) {
      bool admitted = false;
      for (const auto& w : a->work)
        admitted = admitted || dom::str_admits(w, k->keys[i]);
      if (!admitted) return false;
    }
    return true;
  }
  if (const auto* k = std::get_if<concrete::TryK>(&cf)) {
    const auto* a = std::get_if<absem::ATryK>(&af);
    return a && a->node == k->node && a->catch_var == k->catch_var;
  }
  if (const auto* k = std::get_if<concrete::CatchK>(&cf)) {
    const auto* a = std::get_if<absem::ACatchK>(&af);
    return a && a->node == k->node;
  }
  if (const auto* k = std::get_if<concrete::FinallyK>(&cf)) {
    const auto* a = std::get_if<absem::AFinallyK>(&af);
    return a && a->node == k->node &&
           absem::leq(alpha_completion(cst, k->pending, h), a->pending);
  }
  if (const auto* k = std::get_if<concrete::DeclK>(&cf)) {
    const auto* a = std::get_if<absem::ADeclK>(&af);
    return a && a->node == k->node;
  }
  return false;  // RetK never reaches here; it bounds the segment
}

}  // namespace detail

// Inspects each emitted machine point against a finished analysis result.
class Checker {
 public:
  Checker(const engine::AnalysisResult& result, unsigned h,
          std::size_t max_violations)
      : result_(result), h_(h), max_(max_violations) {}

  void inspect(const concrete::Machine& m, const trace::PartKey& key) {
    ++step_;
    if (violations.size() >= max_) return;
    auto it = result_.partition.find(key);
    if (it == result_.partition.end()) {
      flag(key, "no partition covers this point");
      return;
    }
    const absem::AState& part = it->second;
    const concrete::CStore& cst = m.store();
    if (!dom::leq_env(alpha::alpha_env(cst, m.env(), h_), part.env))
      flag(key, "environment escapes its abstraction");
    if (!dom::leq(alpha::alpha_store(cst, h_), part.store))
      flag(key, "store escapes its abstraction");
    if (const concrete::Completion* c = m.completion()) {
      if (!absem::leq(alpha_completion(cst, *c, h_), part.comp))
        flag(key, "completion escapes its abstraction");
    }
    check_kont(m, key, part);
  }

  std::vector<Violation> violations;

 private:
  const engine::AnalysisResult& result_;
  unsigned h_;
  std::size_t max_;
  std::uint64_t step_ = 0;

  void flag(const trace::PartKey& key, std::string reason) {
    if (violations.size() < max_)
      violations.push_back({key, step_, std::move(reason)});
  }

  // Walks the concrete stack activation by activation, newest first. The
  // newest segment must match the partition's kont; every older one must
  // match the stored return continuation its call registered.
  void check_kont(const concrete::Machine& m, const trace::PartKey& key,
                  const absem::AState& part) {
    const std::vector<concrete::CFrame>& ks = m.konts();
    const concrete::CStore& cst = m.store();
    ir::NodeId body = m.activation_body();
    trace::Ctx ctx = m.ctx();
    const std::vector<absem::AKont>* expected = &part.kont;
    size_t end = ks.size();
    while (true) {
      size_t lo = end;
      while (lo > 0 && !std::holds_alternative<concrete::RetK>(ks[lo - 1]))
        --lo;
      bool nested = lo > 0;
      size_t seg = end - lo;
      if (expected->size() != seg + (nested ? 1 : 0)) {
        flag(key, "kont depth differs from abstraction");
        return;
      }
      if (nested) {
        const auto* aa = std::get_if<absem::AAddrK>(&(*expected)[0]);
        if (!aa || !(aa->ka == absem::KontAddr{body, ctx})) {
          flag(key, "call frame address differs from abstraction");
          return;
        }
      }
      for (size_t i = 0; i < seg; ++i) {
        const concrete::CFrame& cf = ks[lo + i];
        if (!detail::frame_covered(cst, cf, (*expected)[i + (nested ? 1 : 0)],
                                   h_)) {
          flag(key, "kont frame escapes its abstraction (" +
                        detail::frame_tag(cf) + ")");
          return;
        }
      }
      if (!nested) return;
      const auto& r = std::get<concrete::RetK>(ks[lo - 1]);
      const std::vector<absem::ARetK>* entries =
          result_.konts.find(absem::KontAddr{body, ctx});
      const absem::ARetK* match = nullptr;
      if (entries)
        for (const auto& e : *entries)
          if (e.site == r.site && e.saved_ctx == r.saved_ctx) {
            match = &e;
            break;
          }
      if (!match) {
        flag(key, "no stored return continuation for call site " +
                      std::to_string(r.site));
        return;
      }
      if (match->target != r.target || match->is_ctor != r.is_ctor) {
        flag(key, "return continuation shape differs at call site " +
                      std::to_string(r.site));
        return;
      }
      if (!dom::leq_env(alpha::alpha_env(cst, r.env, h_), match->env)) {
        flag(key, "caller environment escapes its abstraction");
        return;
      }
      if (!dom::leq(alpha::alpha_value(cst, r.recv, h_), match->recv)) {
        flag(key, "receiver escapes its abstraction");
        return;
      }
      expected = &match->kont;
      body = r.saved_body;
      ctx = r.saved_ctx;
      end = lo - 1;
    }
  }
};

// Full pipeline: analyze, then replay concretely under the same strategy
// and report every point whose state escapes the computed fixpoint.
inline Report check_program(const ir::Program& p, trace::StrategyPtr strategy,
                            std::uint64_t fuel = 10000,
                            absem::AbsRules rules = {},
                            engine::Limits limits = {},
                            std::size_t max_violations = 8) {
  Report out;
  engine::AnalysisResult ar = engine::analyze(p, strategy, rules, limits);
  out.analysis_complete = ar.complete;
  out.stats = ar.stats;
  if (!ar.complete) return out;

  Checker ck(ar, strategy ? strategy->heap() : 0, max_violations);
  concrete::Machine m(p, {fuel, strategy});
  m.on_point = [&ck](const concrete::Machine& mm, const trace::PartKey& k) {
    ck.inspect(mm, k);
  };
  concrete::RunResult rr = m.run();
  out.run_kind = rr.kind;
  out.steps_checked = rr.steps;
  out.violations = std::move(ck.violations);
  return out;
}

}  // namespace njs::soundness
