#pragma once

// Worklist fixpoint over the partitioned abstract state space. The engine
// is sensitivity-agnostic: everything context-related reaches it through
// the trace::Strategy interface, so new sensitivities plug in without
// touching this file or the transfer function.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

#include "njs/absem.hpp"
#include "njs/ir.hpp"
#include "njs/trace.hpp"

namespace njs::engine {

enum class Order { Fifo, Lifo };

struct Limits {
  std::size_t max_iterations = 2000000;
  double wall_clock_seconds = 120.0;
  Order order = Order::Fifo;
  bool check_monotone = false;  // assert join results really grow
};

struct Stats {
  std::size_t iterations = 0;
  std::size_t partitions = 0;
  std::int64_t millis = 0;
};

struct AnalysisResult {
  std::map<trace::PartKey, absem::AState> partition;
  absem::KontStore konts;
  Stats stats;
  bool complete = true;
};

class Engine {
 public:
  Engine(const ir::Program& prog, trace::StrategyPtr strategy,
         absem::AbsRules rules, Limits limits)
      : actx_(absem::AnalysisContext::make(prog, std::move(strategy), rules)),
        limits_(limits) {}

  AnalysisResult run() {
    auto t0 = std::chrono::steady_clock::now();
    AnalysisResult out;
    trace::PartKey k0 = absem::initial_key(*actx_.prog);
    out.partition.emplace(k0, absem::initial_state(actx_));
    push(k0);
    std::size_t iter = 0;
    while (!work_.empty()) {
      if (iter >= limits_.max_iterations || wall_expired(t0)) {
        out.complete = false;
        break;
      }
      trace::PartKey key = pop();
      absem::StepResult r =
          absem::step_state(actx_, out.konts, key, out.partition.at(key));
      ++iter;
      for (const auto& ka : r.kont_reads) readers_[ka].insert(key);
      for (const auto& ka : r.kont_writes)
        for (const auto& rk : readers_[ka]) push(rk);
      for (auto& [k2, s2] : r.succs) {
        auto it = out.partition.find(k2);
        if (it == out.partition.end()) {
          out.partition.emplace(k2, std::move(s2));
          push(k2);
          continue;
        }
        if (absem::leq(s2, it->second)) continue;
        absem::AState joined = absem::join(it->second, s2);
        if (limits_.check_monotone &&
            (!absem::leq(it->second, joined) || !absem::leq(s2, joined)))
          throw std::logic_error("join lost information");
        it->second = std::move(joined);
        push(k2);
      }
    }
    out.stats.iterations = iter;
    out.stats.partitions = out.partition.size();
    out.stats.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    return out;
  }

 private:
  absem::AnalysisContext actx_;
  Limits limits_;
  std::deque<trace::PartKey> work_;
  std::set<trace::PartKey> queued_;
  std::map<absem::KontAddr, std::set<trace::PartKey>> readers_;

  void push(const trace::PartKey& k) {
    if (queued_.insert(k).second) work_.push_back(k);
  }
  trace::PartKey pop() {
    trace::PartKey k;
    if (limits_.order == Order::Fifo) {
      k = work_.front();
      work_.pop_front();
    } else {
      k = work_.back();
      work_.pop_back();
    }
    queued_.erase(k);
    return k;
  }
  bool wall_expired(std::chrono::steady_clock::time_point t0) const {
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            t0);
    return dt.count() > limits_.wall_clock_seconds;
  }
};

inline AnalysisResult analyze(const ir::Program& prog,
                              trace::StrategyPtr strategy,
                              absem::AbsRules rules = {}, Limits limits = {}) {
  Engine e(prog, std::move(strategy), rules, limits);
  return e.run();
}

// Post-fixpoint audit: re-steps every partition and confirms each successor
// is already covered and the kont store gains nothing. A completed run must
// pass; anything else is an engine or transfer bug.
inline bool verify_fixpoint(const ir::Program& prog,
                            trace::StrategyPtr strategy,
                            const AnalysisResult& result,
                            absem::AbsRules rules = {}) {
  if (!result.complete) return false;
  absem::AnalysisContext actx =
      absem::AnalysisContext::make(prog, std::move(strategy), rules);
  absem::KontStore konts = result.konts;
  for (const auto& [key, st] : result.partition) {
    absem::StepResult r = absem::step_state(actx, konts, key, st);
    if (!r.kont_writes.empty()) return false;
    for (const auto& [k2, s2] : r.succs) {
      auto it = result.partition.find(k2);
      if (it == result.partition.end() || !absem::leq(s2, it->second))
        return false;
    }
  }
  return true;
}

}  // namespace njs::engine
