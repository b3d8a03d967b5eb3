// Sensitivity parsing and the context transfer each strategy applies
// at call events.

#include <gtest/gtest.h>

#include <cstdint>
#include <string>
#include <type_traits>

#include "njs/domains.hpp"
#include "njs/strategies.hpp"
#include "njs/trace.hpp"

namespace {

using namespace njs;
using trace::CallEvent;
using trace::Ctx;

CallEvent event_at(ir::NodeId site) {
  CallEvent ev;
  ev.site = site;
  return ev;
}

// Expects make_strategy(spec) to throw and returns the message it carried.
std::string reject(const std::string& spec) {
  try {
    strat::make_strategy(spec);
  } catch (const strat::SensitivityError& e) {
    return e.what();
  }
  ADD_FAILURE() << "expected rejection of \"" << spec << "\"";
  return {};
}

TEST(Sensitivity, ParsesFlowSensitive) {
  auto s = strat::make_strategy("fs");
  ASSERT_TRUE(s);
  EXPECT_EQ(s->name(), "fs");
  EXPECT_EQ(s->heap(), 0u);
}

TEST(Sensitivity, NamesRoundTrip) {
  for (const char* spec : {"fs", "stack:1.0", "stack:2.1", "stack:5.4",
                           "acyclic:2", "obj:1.0", "sig:3.2", "mixed:1.0"}) {
    auto s = strat::make_strategy(spec);
    ASSERT_TRUE(s) << spec;
    EXPECT_EQ(s->name(), spec);
  }
}

TEST(Sensitivity, HeapDepthComesFromH) {
  EXPECT_EQ(strat::make_strategy("fs")->heap(), 0u);
  EXPECT_EQ(strat::make_strategy("stack:5.4")->heap(), 4u);
  EXPECT_EQ(strat::make_strategy("stack:2.0")->heap(), 0u);
  EXPECT_EQ(strat::make_strategy("acyclic:3")->heap(), 3u);
  EXPECT_EQ(strat::make_strategy("obj:2.1")->heap(), 1u);
  EXPECT_EQ(strat::make_strategy("sig:2.1")->heap(), 1u);
  EXPECT_EQ(strat::make_strategy("mixed:2.1")->heap(), 1u);
}

TEST(Sensitivity, RejectsBadSpellings) {
  EXPECT_EQ(reject("fs:1"), "fs takes no parameters");
  EXPECT_EQ(reject("fs:"), "fs takes no parameters");
  EXPECT_EQ(reject("bogus"), "unknown sensitivity: bogus");
  EXPECT_EQ(reject(""), "unknown sensitivity: ");
  EXPECT_EQ(reject("bogus:1.0"), "unknown sensitivity: bogus:1.0");
  EXPECT_EQ(reject("bogus:1.2"), "unknown sensitivity: bogus:1.2");
  EXPECT_EQ(reject("stack:2"), "expected K.H parameters for stack");
  EXPECT_EQ(reject("obj:2"), "expected K.H parameters for obj");
  EXPECT_EQ(reject("stack:x.0"), "malformed sensitivity parameter");
  EXPECT_EQ(reject("stack:2.x"), "malformed sensitivity parameter");
  EXPECT_EQ(reject("stack:.1"), "malformed sensitivity parameter");
  EXPECT_EQ(reject("stack:2."), "malformed sensitivity parameter");
  EXPECT_EQ(reject("acyclic:"), "malformed sensitivity parameter");
  EXPECT_EQ(reject("acyclic:1.0"), "malformed sensitivity parameter");
  EXPECT_EQ(reject("stack:65.0"), "sensitivity parameter too large");
  EXPECT_EQ(reject("stack:2.65"), "sensitivity parameter too large");
  EXPECT_EQ(reject("stack:0.0"), "k must be positive");
  EXPECT_EQ(reject("sig:0.0"), "k must be positive");
}

TEST(Sensitivity, RejectsHeapNotBelowStack) {
  EXPECT_EQ(reject("stack:1.2"), "h must be < k per stack:K.H");
  EXPECT_EQ(reject("stack:1.1"), "h must be < k per stack:K.H");
  EXPECT_EQ(reject("stack:4.4"), "h must be < k per stack:K.H");
  EXPECT_EQ(reject("obj:1.2"), "h must be < k per obj:K.H");
  EXPECT_EQ(reject("sig:1.1"), "h must be < k per sig:K.H");
  EXPECT_EQ(reject("mixed:2.3"), "h must be < k per mixed:K.H");
}

TEST(Sensitivity, BoundaryParametersAccepted) {
  // 64 is the largest accepted count, and h = k-1 is the deepest legal heap.
  auto s = strat::make_strategy("stack:64.63");
  EXPECT_EQ(s->name(), "stack:64.63");
  EXPECT_EQ(s->heap(), 63u);
  EXPECT_EQ(strat::make_strategy("acyclic:64")->heap(), 64u);
}

TEST(Sensitivity, FlowSensitiveIgnoresCalls) {
  auto s = strat::make_strategy("fs");
  Ctx deep = {7, 8, 9};
  EXPECT_TRUE(s->on_call(deep, event_at(42)).empty());
  EXPECT_TRUE(s->on_call({}, event_at(1)).empty());
}

TEST(Sensitivity, StackPushesSitesMostRecentFirst) {
  auto s = strat::make_strategy("stack:3.0");
  Ctx c;
  c = s->on_call(c, event_at(10));
  EXPECT_EQ(c, Ctx({10}));
  c = s->on_call(c, event_at(20));
  EXPECT_EQ(c, Ctx({20, 10}));
  c = s->on_call(c, event_at(30));
  EXPECT_EQ(c, Ctx({30, 20, 10}));
}

TEST(Sensitivity, StackTruncatesToK) {
  auto s = strat::make_strategy("stack:2.1");
  Ctx c;
  for (ir::NodeId site : {10, 20, 30, 40})
    c = s->on_call(c, event_at(site));
  EXPECT_EQ(c, Ctx({40, 30}));
  // Repeated sites are kept as distinct entries; only length is bounded.
  c = s->on_call(c, event_at(40));
  EXPECT_EQ(c, Ctx({40, 40}));
}

TEST(Sensitivity, HeapPrefixTakesNewestEntries) {
  Ctx c = {40, 30};
  EXPECT_EQ(trace::heap_prefix(c, 1), Ctx({40}));
  EXPECT_EQ(trace::heap_prefix(c, 0), Ctx{});
  EXPECT_EQ(trace::heap_prefix(c, 5), c);
}

TEST(Sensitivity, AcyclicGrowsUntilARepeat) {
  auto s = strat::make_strategy("acyclic:1");
  Ctx c;
  c = s->on_call(c, event_at(1));
  c = s->on_call(c, event_at(2));
  c = s->on_call(c, event_at(3));
  EXPECT_EQ(c, Ctx({3, 2, 1}));
}

TEST(Sensitivity, AcyclicFoldsCyclesToTheirSuffix) {
  auto s = strat::make_strategy("acyclic:1");
  Ctx c = {3, 2, 1};
  // Re-entering site 2 collapses everything newer than its last occurrence.
  EXPECT_EQ(s->on_call(c, event_at(2)), Ctx({2, 1}));
  EXPECT_EQ(s->on_call(c, event_at(3)), Ctx({3, 2, 1}));
  EXPECT_EQ(s->on_call(c, event_at(1)), Ctx({1}));
}

TEST(Sensitivity, AcyclicSelfRecursionStaysFixed) {
  auto s = strat::make_strategy("acyclic:1");
  Ctx c = s->on_call({}, event_at(5));
  for (int i = 0; i < 100; ++i) c = s->on_call(c, event_at(5));
  EXPECT_EQ(c, Ctx({5}));
}

TEST(Sensitivity, AcyclicContextsNeverRepeatASite) {
  // Distinct sites bound the context length, so deep alternation saturates.
  auto s = strat::make_strategy("acyclic:1");
  Ctx c;
  for (int i = 0; i < 50; ++i) {
    c = s->on_call(c, event_at(1 + (i % 3)));
    for (size_t a = 0; a < c.size(); ++a)
      for (size_t b = a + 1; b < c.size(); ++b) EXPECT_NE(c[a], c[b]);
    EXPECT_LE(c.size(), 3u);
  }
}

TEST(Sensitivity, ObjectSensitivityKeysOnReceiver) {
  auto s = strat::make_strategy("obj:2.1");
  auto recv_a = dom::AddrSet::of(dom::AbsAddr::object(7, ClassTag::Object, {}));
  auto recv_b = dom::AddrSet::of(dom::AbsAddr::object(9, ClassTag::Object, {}));

  CallEvent ev = event_at(42);
  ev.self_addrs = recv_a;
  Ctx ca = s->on_call({}, ev);
  ASSERT_EQ(ca.size(), 1u);
  EXPECT_EQ(ca[0], dom::addrs_token(recv_a));

  ev.self_addrs = recv_b;
  Ctx cb = s->on_call({}, ev);
  EXPECT_NE(ca, cb);

  // The call site does not matter, only the receiver does.
  CallEvent other = event_at(99);
  other.self_addrs = recv_a;
  EXPECT_EQ(s->on_call({}, other), ca);
}

TEST(Sensitivity, SignatureTokensSeparateTypes) {
  auto s = strat::make_strategy("sig:1.0");
  CallEvent ev = event_at(42);
  ev.callee = 17;
  ev.self_typeset = dom::kAddrBit;
  ev.arg_typesets = {dom::kNumBit, 0, 0, 0};
  Ctx base = s->on_call({}, ev);
  ASSERT_EQ(base.size(), 1u);

  // Same signature from a different site lands in the same context.
  CallEvent same = ev;
  same.site = 99;
  EXPECT_EQ(s->on_call({}, same), base);

  // Changing any ingredient of the signature changes the token.
  CallEvent diff = ev;
  diff.callee = 18;
  EXPECT_NE(s->on_call({}, diff), base);
  diff = ev;
  diff.self_typeset = dom::kStrBit;
  EXPECT_NE(s->on_call({}, diff), base);
  for (int i = 0; i < 4; ++i) {
    diff = ev;
    diff.arg_typesets[i] = static_cast<std::uint8_t>(dom::kBoolBit);
    EXPECT_NE(s->on_call({}, diff), base) << "arg position " << i;
  }
}

TEST(Sensitivity, SignaturePacksArgPositionsSeparately) {
  // A typeset moving between adjacent argument slots must not collide.
  auto s = strat::make_strategy("sig:1.0");
  CallEvent a = event_at(1);
  a.arg_typesets = {dom::kNumBit, 0, 0, 0};
  CallEvent b = event_at(1);
  b.arg_typesets = {0, dom::kNumBit, 0, 0};
  EXPECT_NE(s->on_call({}, a), s->on_call({}, b));
}

TEST(Sensitivity, MixedUsesSiteForGlobalReceiver) {
  auto s = strat::make_strategy("mixed:2.1");
  auto global = dom::AddrSet::of(dom::AbsAddr::object(1, ClassTag::Object, {}));
  auto other = dom::AddrSet::of(dom::AbsAddr::object(8, ClassTag::Object, {}));

  CallEvent ev = event_at(42);
  ev.global_token = dom::addrs_token(global);

  // Calls through the global object fall back to call-site sensitivity.
  ev.self_addrs = global;
  Ctx cg = s->on_call({}, ev);
  EXPECT_EQ(cg, Ctx({42}));

  // A real receiver keys the context like object sensitivity does.
  ev.self_addrs = other;
  Ctx co = s->on_call({}, ev);
  EXPECT_EQ(co, Ctx({dom::addrs_token(other)}));
  EXPECT_NE(cg, co);
}

TEST(Sensitivity, StrategiesOnlySeeTheTraceInterface) {
  // The engine-facing type is the abstract one; concrete strategy classes
  // stay behind make_strategy.
  trace::StrategyPtr s = strat::make_strategy("stack:2.1");
  static_assert(
      std::is_same_v<trace::StrategyPtr,
                     std::shared_ptr<const trace::Strategy>>);
  EXPECT_EQ(s->name(), "stack:2.1");
}

}  // namespace
