// Value domain coverage: the string lattice against its frozen order
// table, classification, concatenation over brute-force samples, the
// conversion triangle against the concrete semantics, and the object
// domain's update/lookup/enumerate rules.

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "njs/alpha.hpp"
#include "njs/concrete.hpp"
#include "njs/dom_object.hpp"
#include "njs/domains.hpp"
#include "njs/ecma.hpp"

namespace {

using namespace njs;
using dom::AbsBool;
using dom::AbsNum;
using dom::AbsStr;
using dom::BValue;

// ------------------------------------------------------------ string order

// The twelve reference elements, in a fixed order the tables below index.
std::vector<AbsStr> fig_elements() {
  return {
      AbsStr::bot(),                            // 0
      AbsStr::of("1"),                          // 1
      AbsStr::of("2"),                          // 2
      AbsStr::of("foo"),                        // 3
      AbsStr::of("bar"),                        // 4
      AbsStr::of("valueOf"),                    // 5
      AbsStr::mid(AbsStr::Kind::SNum),          // 6
      AbsStr::mid(AbsStr::Kind::SNotNumNorSpl), // 7
      AbsStr::mid(AbsStr::Kind::SSpl),          // 8
      AbsStr::mid(AbsStr::Kind::SNotSpl),       // 9
      AbsStr::mid(AbsStr::Kind::SNotNum),       // 10
      AbsStr::top(),                            // 11
  };
}

// Frozen order: row i lists every j with element[i] <= element[j].
const std::vector<std::vector<int>>& fig_leq_table() {
  static const std::vector<std::vector<int>> t = {
      {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11},  // Bot
      {1, 6, 9, 11},                           // "1"
      {2, 6, 9, 11},                           // "2"
      {3, 7, 9, 10, 11},                       // "foo"
      {4, 7, 9, 10, 11},                       // "bar"
      {5, 8, 10, 11},                          // "valueOf"
      {6, 9, 11},                              // SNum
      {7, 9, 10, 11},                          // SNotNumNorSpl
      {8, 10, 11},                             // SSpl
      {9, 11},                                 // SNotSpl
      {10, 11},                                // SNotNum
      {11},                                    // Top
  };
  return t;
}

bool table_leq(int i, int j) {
  for (int k : fig_leq_table()[i])
    if (k == j) return true;
  return false;
}

TEST(StrLattice, OrderMatchesReferenceTable) {
  auto els = fig_elements();
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j)
      EXPECT_EQ(dom::leq(els[i], els[j]), table_leq(i, j))
          << "leq(" << i << ", " << j << ")";
}

TEST(StrLattice, JoinIsLeastUpperBoundOfReferenceTable) {
  auto els = fig_elements();
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      AbsStr got = dom::join(els[i], els[j]);
      // expected: the unique minimal table element above both
      int best = -1;
      for (int k = 0; k < 12; ++k) {
        if (!table_leq(i, k) || !table_leq(j, k)) continue;
        if (best == -1 || table_leq(k, best)) best = k;
      }
      ASSERT_NE(best, -1);
      EXPECT_TRUE(dom::leq(got, els[best]) && dom::leq(els[best], got))
          << "join(" << i << ", " << j << ")";
    }
  }
}

TEST(StrLattice, PinnedJoins) {
  auto eq = [](const AbsStr& a, const AbsStr& b) {
    return dom::leq(a, b) && dom::leq(b, a);
  };
  EXPECT_TRUE(eq(dom::join(AbsStr::of("1"), AbsStr::of("2")),
                 AbsStr::mid(AbsStr::Kind::SNum)));
  EXPECT_TRUE(eq(dom::join(AbsStr::of("foo"), AbsStr::of("bar")),
                 AbsStr::mid(AbsStr::Kind::SNotNumNorSpl)));
  EXPECT_TRUE(eq(dom::join(AbsStr::of("valueOf"), AbsStr::of("foo")),
                 AbsStr::mid(AbsStr::Kind::SNotNum)));
  EXPECT_TRUE(eq(dom::join(AbsStr::mid(AbsStr::Kind::SNum),
                           AbsStr::mid(AbsStr::Kind::SSpl)),
                 AbsStr::top()));
}

TEST(StrLattice, ClassifyPriorityAndEdgeCases) {
  using dom::StrCat;
  auto c = [](const char* s) { return dom::classify_str(s); };
  EXPECT_EQ(c("0"), StrCat::Num);
  EXPECT_EQ(c("1.5"), StrCat::Num);
  EXPECT_EQ(c("-2"), StrCat::Num);
  EXPECT_EQ(c("1e+21"), StrCat::Num);
  // numeric wins over special for the two number-named specials
  EXPECT_EQ(c("NaN"), StrCat::Num);
  EXPECT_EQ(c("Infinity"), StrCat::Num);
  EXPECT_EQ(c("-Infinity"), StrCat::Num);
  EXPECT_EQ(c("valueOf"), StrCat::Spl);
  EXPECT_EQ(c("length"), StrCat::Spl);
  EXPECT_EQ(c("print"), StrCat::Spl);
  EXPECT_EQ(c("undefined"), StrCat::Spl);
  EXPECT_EQ(c("foo"), StrCat::Other);
  EXPECT_EQ(c(""), StrCat::Other);
  // only canonical renderings count as numeric
  EXPECT_EQ(c("01"), StrCat::Other);
  EXPECT_EQ(c("-0"), StrCat::Other);
  EXPECT_EQ(c("1e21"), StrCat::Other);
  EXPECT_EQ(c(" 1"), StrCat::Other);
  EXPECT_EQ(c("1."), StrCat::Other);
}

// ------------------------------------------------------------ concatenation

const std::vector<std::string>& sample_strings() {
  static const std::vector<std::string> pool = {
      "0",  "1",    "2",      "42",      "-2.5",     "3.14", "NaN",
      "Infinity",   "-Infinity",         "valueOf",  "toString",
      "length",     "push",   "prototype",           "undefined",
      "print",      "",       "foo",     "bar",      "a b",  "01",
      "1e21",       "-0",     "No",      "Inf",      "inity", "-",
      "value",      "Of",     "lueOf",   "va",
  };
  return pool;
}

std::vector<std::string> gamma(const AbsStr& a) {
  std::vector<std::string> out;
  for (const auto& s : sample_strings())
    if (dom::str_admits(a, s)) out.push_back(s);
  return out;
}

TEST(StrConcat, SoundOnAllSamplePairs) {
  auto els = fig_elements();
  for (const AbsStr& a : els) {
    for (const AbsStr& b : els) {
      AbsStr r = dom::str_concat(a, b);
      for (const auto& s1 : gamma(a))
        for (const auto& s2 : gamma(b))
          EXPECT_TRUE(dom::str_admits(r, s1 + s2))
              << "concat lost \"" << s1 << "\" + \"" << s2 << "\"";
    }
  }
}

TEST(StrConcat, PinnedResults) {
  auto eq = [](const AbsStr& a, const AbsStr& b) {
    return dom::leq(a, b) && dom::leq(b, a);
  };
  const AbsStr snum = AbsStr::mid(AbsStr::Kind::SNum);
  const AbsStr sspl = AbsStr::mid(AbsStr::Kind::SSpl);
  const AbsStr soth = AbsStr::mid(AbsStr::Kind::SNotNumNorSpl);
  // const-const stays exact
  EXPECT_TRUE(eq(dom::str_concat(AbsStr::of("va"), AbsStr::of("lueOf")),
                 AbsStr::of("valueOf")));
  // empty-const identity
  EXPECT_TRUE(eq(dom::str_concat(AbsStr::of(""), snum), snum));
  EXPECT_TRUE(eq(dom::str_concat(sspl, AbsStr::of("")), sspl));
  // two numerics never make a special, may make a numeric
  EXPECT_TRUE(eq(dom::str_concat(snum, snum),
                 AbsStr::mid(AbsStr::Kind::SNotSpl)));
  // two specials make neither numerics nor specials
  EXPECT_TRUE(eq(dom::str_concat(sspl, sspl), soth));
  EXPECT_TRUE(eq(dom::str_concat(snum, sspl), soth));
  // other + numeric can open a number ("-" + "1") and can even land on a
  // special ("is" + "NaN"), so nothing is ruled out
  EXPECT_TRUE(dom::str_admits(dom::str_concat(soth, snum), "isNaN"));
  EXPECT_TRUE(eq(dom::str_concat(soth, snum), AbsStr::top()));
  // other + other can rebuild a special ("va" + "lueOf")
  EXPECT_TRUE(dom::str_admits(dom::str_concat(soth, soth), "valueOf"));
  EXPECT_TRUE(eq(dom::str_concat(soth, soth), AbsStr::top()));
  EXPECT_TRUE(dom::str_concat(AbsStr::bot(), snum).is_bot());
}

TEST(StrConvert, ToNumPinned) {
  EXPECT_TRUE(dom::str_tonum(AbsStr::bot()).is_bot());
  AbsNum c = dom::str_tonum(AbsStr::of("1.5"));
  ASSERT_TRUE(c.is_const());
  EXPECT_EQ(c.value, 1.5);
  AbsNum f = dom::str_tonum(AbsStr::of("foo"));
  ASSERT_TRUE(f.is_const());
  EXPECT_TRUE(std::isnan(f.value));
  // every special string reads as NaN
  AbsNum s = dom::str_tonum(AbsStr::mid(AbsStr::Kind::SSpl));
  ASSERT_TRUE(s.is_const());
  EXPECT_TRUE(std::isnan(s.value));
  EXPECT_FALSE(dom::str_tonum(AbsStr::mid(AbsStr::Kind::SNum)).is_const());
  EXPECT_FALSE(dom::str_tonum(AbsStr::top()).is_const());
}

TEST(StrConvert, NumToStrPinned) {
  EXPECT_TRUE(dom::num_tostr(AbsNum::bot()).is_bot());
  AbsStr c = dom::num_tostr(AbsNum::of(1.5));
  ASSERT_TRUE(c.is_const());
  EXPECT_EQ(c.value, "1.5");
  AbsStr n = dom::num_tostr(AbsNum::of(std::nan("")));
  ASSERT_TRUE(n.is_const());
  EXPECT_EQ(n.value, "NaN");
  AbsStr t = dom::num_tostr(AbsNum::top());
  EXPECT_TRUE(dom::leq(t, AbsStr::mid(AbsStr::Kind::SNum)) &&
              dom::leq(AbsStr::mid(AbsStr::Kind::SNum), t));
}

// --------------------------------------------------------- lattice laws

TEST(Lattice, AbsNumLaws) {
  std::vector<AbsNum> xs = {AbsNum::bot(), AbsNum::of(0), AbsNum::of(-0.0),
                            AbsNum::of(1), AbsNum::of(std::nan("")),
                            AbsNum::top()};
  for (const auto& a : xs) {
    EXPECT_TRUE(dom::leq(a, a));
    EXPECT_TRUE(dom::leq(AbsNum::bot(), a));
    EXPECT_TRUE(dom::leq(a, AbsNum::top()));
    for (const auto& b : xs) {
      AbsNum j = dom::join(a, b);
      EXPECT_TRUE(dom::leq(a, j));
      EXPECT_TRUE(dom::leq(b, j));
      AbsNum j2 = dom::join(b, a);
      EXPECT_TRUE(dom::leq(j, j2) && dom::leq(j2, j));
      for (const auto& c : xs) {
        AbsNum l = dom::join(dom::join(a, b), c);
        AbsNum r = dom::join(a, dom::join(b, c));
        EXPECT_TRUE(dom::leq(l, r) && dom::leq(r, l));
      }
    }
  }
  // NaN payloads canonicalize: two NaNs are one constant
  AbsNum n1 = AbsNum::of(std::nan(""));
  AbsNum n2 = AbsNum::of(0.0 / 0.0);
  EXPECT_TRUE(dom::leq(n1, n2) && dom::leq(n2, n1));
  // -0 and 0 are distinct constants
  EXPECT_FALSE(dom::leq(AbsNum::of(0.0), AbsNum::of(-0.0)));
}

TEST(Lattice, AbsBoolLaws) {
  std::vector<AbsBool> xs = {AbsBool::bot(), AbsBool::of(true),
                             AbsBool::of(false), AbsBool::top()};
  for (const auto& a : xs)
    for (const auto& b : xs) {
      AbsBool j = dom::join(a, b);
      EXPECT_TRUE(dom::leq(a, j) && dom::leq(b, j));
      EXPECT_EQ(j.bits, dom::join(b, a).bits);
    }
  EXPECT_EQ(dom::abs_not(AbsBool::of(true)).bits, AbsBool::of(false).bits);
  EXPECT_EQ(dom::abs_not(AbsBool::top()).bits, AbsBool::top().bits);
  EXPECT_EQ(dom::abs_not(AbsBool::bot()).bits, AbsBool::bot().bits);
}

std::vector<BValue> bvalue_samples() {
  std::vector<BValue> out = {
      BValue::bot(),
      BValue::of_num(0),
      BValue::of_num(std::nan("")),
      BValue::of_num(AbsNum::top()),
      BValue::of_bool(true),
      BValue::of_bool(AbsBool::top()),
      BValue::of_str("foo"),
      BValue::of_str(""),
      BValue::of_str(AbsStr::mid(AbsStr::Kind::SNum)),
      BValue::of_str(AbsStr::top()),
      BValue::of_null(),
      BValue::of_undef(),
  };
  out.push_back(dom::join(BValue::of_num(1), BValue::of_str("1")));
  out.push_back(dom::join(BValue::of_null(), BValue::of_undef()));
  out.push_back(dom::join(BValue::of_bool(false), BValue::of_num(0)));
  return out;
}

TEST(Lattice, BValueLaws) {
  auto xs = bvalue_samples();
  for (const auto& a : xs) {
    EXPECT_TRUE(dom::leq(a, a));
    EXPECT_TRUE(dom::leq(BValue::bot(), a));
    for (const auto& b : xs) {
      BValue j = dom::join(a, b);
      EXPECT_TRUE(dom::leq(a, j) && dom::leq(b, j));
      EXPECT_EQ(j.typeset(), a.typeset() | b.typeset());
      BValue j2 = dom::join(b, a);
      EXPECT_TRUE(dom::leq(j, j2) && dom::leq(j2, j));
    }
  }
  EXPECT_TRUE(BValue::bot().is_bot());
  EXPECT_FALSE(BValue::of_undef().is_bot());
}

// ------------------------------------------------- conversions vs concrete

concrete::CValue cvalue_sample(std::mt19937_64& rng) {
  static const std::vector<double> nums = {
      0.0, -0.0, 1.0, -1.5, 42.0, 1e21, -1e300,
      std::numeric_limits<double>::quiet_NaN(),
      std::numeric_limits<double>::infinity(),
      -std::numeric_limits<double>::infinity()};
  switch (rng() % 5) {
    case 0: return nums[rng() % nums.size()];
    case 1: return (rng() % 2) == 0;
    case 2: {
      const auto& pool = sample_strings();
      return pool[rng() % pool.size()];
    }
    case 3: return concrete::CNull{};
    default: return concrete::CUndef{};
  }
}

BValue prim_alpha(const concrete::CValue& v) {
  switch (v.index()) {
    case 0: return BValue::of_num(std::get<double>(v));
    case 1: return BValue::of_bool(std::get<bool>(v));
    case 2: return BValue::of_str(std::get<std::string>(v));
    case 4: return BValue::of_null();
    default: return BValue::of_undef();
  }
}

TEST(Galois, ConversionsCommuteWithAlpha) {
  std::mt19937_64 rng(7);
  auto xs = bvalue_samples();
  for (int i = 0; i < 4000; ++i) {
    concrete::CValue v = cvalue_sample(rng);
    BValue a = prim_alpha(v);
    // exact abstraction of the input
    EXPECT_TRUE(dom::leq(BValue::of_num(concrete::to_num(v)),
                         BValue::of_num(dom::to_num(a))));
    EXPECT_TRUE(dom::leq(BValue::of_str(concrete::to_str(v)),
                         BValue::of_str(dom::to_str(a))));
    EXPECT_TRUE(dom::leq(BValue::of_bool(concrete::to_bool(v)),
                         BValue::of_bool(dom::to_bool(a))));
    // any coarser abstraction of the input
    for (const auto& b : xs) {
      if (!dom::leq(a, b)) continue;
      EXPECT_TRUE(dom::leq(AbsNum::of(concrete::to_num(v)), dom::to_num(b)));
      EXPECT_TRUE(dom::str_admits(dom::to_str(b), concrete::to_str(v)));
      AbsBool bb = dom::to_bool(b);
      EXPECT_TRUE(concrete::to_bool(v) ? bb.may_true() : bb.may_false());
    }
  }
}

TEST(Conversions, PinnedBValueCases) {
  EXPECT_EQ(dom::to_bool(BValue::of_num(0)).bits, AbsBool::of(false).bits);
  EXPECT_EQ(dom::to_bool(BValue::of_num(std::nan(""))).bits,
            AbsBool::of(false).bits);
  EXPECT_EQ(dom::to_bool(BValue::of_num(5)).bits, AbsBool::of(true).bits);
  EXPECT_EQ(dom::to_bool(BValue::of_str("")).bits, AbsBool::of(false).bits);
  // canonical numerics and specials are never empty, so never falsy
  EXPECT_EQ(dom::to_bool(BValue::of_str(AbsStr::mid(AbsStr::Kind::SNum))).bits,
            AbsBool::of(true).bits);
  EXPECT_EQ(dom::to_bool(BValue::of_str(AbsStr::mid(AbsStr::Kind::SSpl))).bits,
            AbsBool::of(true).bits);
  EXPECT_EQ(
      dom::to_bool(BValue::of_str(AbsStr::mid(AbsStr::Kind::SNotNumNorSpl)))
          .bits,
      AbsBool::top().bits);
  EXPECT_EQ(dom::to_bool(BValue::of_null()).bits, AbsBool::of(false).bits);
  EXPECT_EQ(dom::to_bool(BValue::of_undef()).bits, AbsBool::of(false).bits);

  AbsNum un = dom::to_num(BValue::of_undef());
  ASSERT_TRUE(un.is_const());
  EXPECT_TRUE(std::isnan(un.value));
  AbsNum nn = dom::to_num(BValue::of_null());
  ASSERT_TRUE(nn.is_const());
  EXPECT_EQ(nn.value, 0.0);

  AbsStr su = dom::to_str(BValue::of_undef());
  ASSERT_TRUE(su.is_const());
  EXPECT_EQ(su.value, "undefined");
  AbsStr sb = dom::to_str(BValue::of_bool(AbsBool::top()));
  EXPECT_TRUE(dom::str_admits(sb, "true") && dom::str_admits(sb, "false"));
}

// ----------------------------------------------------------- object domain

dom::AbsAddr addr(std::uint32_t site) {
  return dom::AbsAddr::object(site, ClassTag::Object, {});
}

TEST(ObjectDomain, JoinFallsBackToSummaries) {
  dom::AbsObject a;
  a.cls = ClassTag::Object;
  a.exact.emplace("a", dom::PropVal{BValue::of_num(1), false, true});
  dom::AbsObject b;
  b.cls = ClassTag::Object;
  b.other_summary = BValue::of_str("z");
  dom::AbsObject j = dom::join(a, b);
  ASSERT_TRUE(j.exact.count("a"));
  const dom::PropVal& pv = j.exact.at("a");
  EXPECT_TRUE(pv.maybe_absent);
  EXPECT_TRUE(dom::leq(BValue::of_num(1), pv.val));
  EXPECT_TRUE(dom::leq(BValue::of_str("z"), pv.val));
  EXPECT_TRUE(dom::leq(a, j));
  EXPECT_TRUE(dom::leq(b, j));
}

TEST(ObjectDomain, ClassMismatchThrows) {
  dom::AbsObject a, b;
  a.cls = ClassTag::Object;
  b.cls = ClassTag::Array;
  EXPECT_THROW(dom::join(a, b), std::logic_error);
}

TEST(ObjectDomain, UpdateStrongVsWeak) {
  dom::AbsObject o;
  o.cls = ClassTag::Object;
  o.exact.emplace("k", dom::PropVal{BValue::of_num(1), false, true});
  dom::AbsObject weak = o;
  dom::obj_update(o, true, AbsStr::of("k"), BValue::of_num(2));
  ASSERT_TRUE(o.exact.at("k").val.num.is_const());
  EXPECT_EQ(o.exact.at("k").val.num.value, 2.0);
  EXPECT_FALSE(o.exact.at("k").maybe_absent);
  dom::obj_update(weak, false, AbsStr::of("k"), BValue::of_num(2));
  EXPECT_FALSE(weak.exact.at("k").val.num.is_const());
}

TEST(ObjectDomain, NonConstKeyHitsSummaries) {
  dom::AbsObject o;
  o.cls = ClassTag::Object;
  o.exact.emplace("9", dom::PropVal{BValue::of_num(9), false, true});
  dom::obj_update(o, false, AbsStr::mid(AbsStr::Kind::SNum),
                  BValue::of_str("x"));
  // the tracked numeric key absorbed the write, so did the summary
  EXPECT_TRUE(dom::leq(BValue::of_str("x"), o.exact.at("9").val));
  EXPECT_TRUE(dom::leq(BValue::of_str("x"), o.num_summary));
  EXPECT_TRUE(o.spl_summary.is_bot());
}

TEST(ObjectDomain, ArrayLengthCoupling) {
  dom::AbsStore st;
  dom::AbsAddr a = addr(100);
  dom::AbsObject arr;
  arr.cls = ClassTag::Array;
  arr.exact.emplace("length", dom::PropVal{BValue::of_num(3), false, false});
  arr.exact.emplace("0", dom::PropVal{BValue::of_num(10), false, true});
  arr.exact.emplace("2", dom::PropVal{BValue::of_num(12), false, true});
  st.alloc(a, dom::OSlot{arr, false});

  // growing index write bumps the length constant
  dom::AbsObject& o = st.obj_mut(a);
  dom::obj_update(o, true, AbsStr::of("5"), BValue::of_num(50));
  ASSERT_TRUE(o.exact.at("length").val.num.is_const());
  EXPECT_EQ(o.exact.at("length").val.num.value, 6.0);

  // shrinking the length drops tracked indexes past the cut
  dom::UpdateEffect eff =
      dom::obj_update(o, true, AbsStr::of("length"), BValue::of_num(1));
  EXPECT_FALSE(eff.possible_range_error);
  EXPECT_EQ(o.exact.at("length").val.num.value, 1.0);
  EXPECT_TRUE(o.exact.at("2").definitely_absent() ||
              o.exact.at("2").maybe_absent);
  EXPECT_TRUE(o.exact.at("5").definitely_absent() ||
              o.exact.at("5").maybe_absent);
  EXPECT_FALSE(o.exact.at("0").maybe_absent);

  // invalid lengths may raise
  EXPECT_TRUE(dom::obj_update(o, true, AbsStr::of("length"),
                              BValue::of_num(std::nan("")))
                  .possible_range_error);
  EXPECT_TRUE(
      dom::obj_update(o, true, AbsStr::of("length"), BValue::of_num(1.5))
          .possible_range_error);
  EXPECT_TRUE(
      dom::obj_update(o, true, AbsStr::of("length"), BValue::of_num(-1))
          .possible_range_error);
  EXPECT_TRUE(dom::obj_update(o, true, AbsStr::of("length"),
                              BValue::of_num(4294967296.0))
                  .possible_range_error);
  EXPECT_FALSE(dom::obj_update(o, true, AbsStr::of("length"),
                               BValue::of_num(4294967295.0))
                   .possible_range_error);
  EXPECT_TRUE(
      dom::obj_update(o, true, AbsStr::of("length"),
                      BValue::of_num(AbsNum::top()))
          .possible_range_error);
}

TEST(ObjectDomain, DeleteRules) {
  dom::AbsObject o;
  o.cls = ClassTag::Object;
  o.exact.emplace("k", dom::PropVal{BValue::of_num(1), false, true});
  dom::AbsObject weak = o;
  dom::obj_delete(o, true, AbsStr::of("k"));
  EXPECT_TRUE(o.exact.at("k").definitely_absent());
  EXPECT_TRUE(o.exact.at("k").maybe_absent);
  dom::obj_delete(weak, false, AbsStr::of("k"));
  EXPECT_FALSE(weak.exact.at("k").definitely_absent());
  EXPECT_TRUE(weak.exact.at("k").maybe_absent);

  dom::AbsObject arr;
  arr.cls = ClassTag::Array;
  arr.exact.emplace("length", dom::PropVal{BValue::of_num(0), false, false});
  dom::obj_delete(arr, true, AbsStr::of("length"));
  EXPECT_FALSE(arr.exact.at("length").definitely_absent());
}

TEST(ObjectDomain, LookupWalksChain) {
  dom::AbsStore st;
  dom::AbsAddr base = addr(1), proto = addr(2);
  dom::AbsObject po;
  po.cls = ClassTag::Object;
  po.proto_null = true;
  po.exact.emplace("p", dom::PropVal{BValue::of_num(7), false, true});
  st.alloc(proto, dom::OSlot{po, false});
  dom::AbsObject bo;
  bo.cls = ClassTag::Object;
  bo.proto_addrs = dom::AddrSet::of(proto);
  bo.exact.emplace("own", dom::PropVal{BValue::of_str("x"), false, true});
  st.alloc(base, dom::OSlot{bo, false});

  BValue own = dom::lookup_prop(st, dom::AddrSet::of(base), AbsStr::of("own"));
  EXPECT_TRUE(own.undef_ == false && own.str.is_const());
  BValue p = dom::lookup_prop(st, dom::AddrSet::of(base), AbsStr::of("p"));
  EXPECT_TRUE(p.num.is_const());
  EXPECT_FALSE(p.undef_);
  BValue missing =
      dom::lookup_prop(st, dom::AddrSet::of(base), AbsStr::of("nope"));
  EXPECT_TRUE(missing.undef_);
}

TEST(ObjectDomain, EnumerateEmitsMidsForSummaries) {
  dom::AbsStore st;
  dom::AbsAddr a = addr(3);
  dom::AbsObject o;
  o.cls = ClassTag::Object;
  o.proto_null = true;
  o.exact.emplace("vis", dom::PropVal{BValue::of_num(1), false, true});
  o.exact.emplace("hid", dom::PropVal{BValue::of_num(2), false, false});
  o.exact.emplace("gone", dom::PropVal{BValue::bot(), true, true});
  o.num_summary = BValue::of_num(9);
  st.alloc(a, dom::OSlot{o, false});
  std::vector<AbsStr> keys = dom::obj_enumerate(st, dom::AddrSet::of(a));
  bool has_vis = false, has_hid = false, has_gone = false, has_num = false;
  for (const auto& k : keys) {
    if (k.is_const() && k.value == "vis") has_vis = true;
    if (k.is_const() && k.value == "hid") has_hid = true;
    if (k.is_const() && k.value == "gone") has_gone = true;
    if (!k.is_const() && dom::str_admits(k, "33")) has_num = true;
  }
  EXPECT_TRUE(has_vis);
  EXPECT_FALSE(has_hid);
  EXPECT_FALSE(has_gone);
  EXPECT_TRUE(has_num);
}

TEST(Store, CollidingAllocationsFold) {
  dom::AbsStore st;
  dom::AbsAddr c = dom::AbsAddr::cell(5, {});
  st.alloc(c, dom::OSlot{BValue::of_num(1), false});
  EXPECT_FALSE(st.slot(c).many);
  st.write_cell(c, BValue::of_num(2));  // strong while single
  EXPECT_EQ(st.cell(c).num.value, 2.0);
  st.alloc(c, dom::OSlot{BValue::of_str("s"), false});
  EXPECT_TRUE(st.slot(c).many);
  EXPECT_TRUE(dom::leq(BValue::of_num(2), st.cell(c)));
  EXPECT_TRUE(dom::leq(BValue::of_str("s"), st.cell(c)));
  st.write_cell(c, BValue::of_bool(true));  // weak once folded
  EXPECT_TRUE(dom::leq(BValue::of_str("s"), st.cell(c)));
  EXPECT_TRUE(dom::leq(BValue::of_bool(true), st.cell(c)));
  EXPECT_THROW(st.slot(dom::AbsAddr::cell(99, {})), std::logic_error);
}

TEST(Classify, FuzzTotalAndConsistent) {
  std::mt19937_64 rng(42);
  const std::string charset = "abcdefgortuvNISO0123456789.+-e ";
  auto random_string = [&]() {
    std::string s;
    size_t n = rng() % 12;
    for (size_t i = 0; i < n; ++i) s += charset[rng() % charset.size()];
    return s;
  };
  auto is_special = [](const std::string& s) {
    for (const auto& sp : dom::special_strings())
      if (s == sp) return true;
    return false;
  };
  for (int i = 0; i < 100000; ++i) {
    std::string s;
    switch (rng() % 4) {
      case 0: s = random_string(); break;
      case 1: {
        // mutate a special: drop, duplicate, or keep
        s = dom::special_strings()[rng() % dom::special_strings().size()];
        if (rng() % 3 == 0 && !s.empty()) s.erase(rng() % s.size(), 1);
        if (rng() % 3 == 0) s += charset[rng() % charset.size()];
        break;
      }
      case 2: s = ecma::num_to_string(static_cast<double>(rng() % 1000) / 8);
        break;
      default: s = "-" + random_string(); break;
    }
    dom::StrCat c = dom::classify_str(s);
    bool canon = ecma::num_to_string(ecma::string_to_num(s)) == s;
    if (canon)
      EXPECT_EQ(c, dom::StrCat::Num) << s;
    else if (is_special(s))
      EXPECT_EQ(c, dom::StrCat::Spl) << s;
    else
      EXPECT_EQ(c, dom::StrCat::Other) << s;
  }
}

TEST(Monotone, TransformersPreserveOrder) {
  auto els = fig_elements();
  for (const AbsStr& a : els) {
    for (const AbsStr& a2 : els) {
      if (!dom::leq(a, a2)) continue;
      EXPECT_TRUE(dom::leq(dom::str_tonum(a), dom::str_tonum(a2)));
      for (const AbsStr& b : els) {
        EXPECT_TRUE(dom::leq(dom::str_concat(a, b), dom::str_concat(a2, b)));
        EXPECT_TRUE(dom::leq(dom::str_concat(b, a), dom::str_concat(b, a2)));
      }
    }
  }
  std::vector<AbsNum> nums = {AbsNum::bot(), AbsNum::of(0), AbsNum::of(1.5),
                              AbsNum::of(std::nan("")), AbsNum::top()};
  for (const auto& n : nums)
    for (const auto& n2 : nums) {
      if (!dom::leq(n, n2)) continue;
      EXPECT_TRUE(dom::leq(dom::num_tostr(n), dom::num_tostr(n2)));
    }
  auto xs = bvalue_samples();
  for (const auto& v : xs)
    for (const auto& v2 : xs) {
      if (!dom::leq(v, v2)) continue;
      EXPECT_TRUE(dom::leq(dom::to_num(v), dom::to_num(v2)));
      EXPECT_TRUE(dom::leq(dom::to_str(v), dom::to_str(v2)));
      EXPECT_TRUE(dom::leq(dom::to_bool(v), dom::to_bool(v2)));
    }
}

// Small-instance object soundness: concrete lookup/update/delete on tiny
// objects must be covered by the abstract operations after abstraction.

const std::vector<concrete::CValue>& alphabet_values(const concrete::CStore&) {
  static const std::vector<concrete::CValue> vals = {
      0.0,  -0.0, 1.0,  -1.0, 2.5,
      std::numeric_limits<double>::quiet_NaN(),
      std::numeric_limits<double>::infinity(),
      -std::numeric_limits<double>::infinity(),
      true, false,
      std::string(""), std::string("0"), std::string("foo"),
      std::string("valueOf"),
      concrete::CNull{}, concrete::CUndef{},
  };
  return vals;
}

// Reference chain walk, kept independent of the machine's implementation.
concrete::CValue concrete_lookup(const concrete::CStore& st,
                                 concrete::ObjAddr a, const std::string& k) {
  const concrete::CObject* o = &st.obj_at(a);
  for (;;) {
    if (const concrete::CProp* p = o->find(k)) return p->val;
    if (!concrete::is_addr(o->proto)) return concrete::CUndef{};
    o = &st.obj_at(std::get<concrete::ObjAddr>(o->proto));
  }
}

TEST(ObjectDomain, SmallInstanceSoundness) {
  const std::vector<std::string> keys = {"0", "1", "foo", "valueOf", "p"};
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    concrete::CStore st;
    const auto& vals = alphabet_values(st);
    concrete::CObject proto;
    proto.cls = ClassTag::Object;
    proto.set("p", vals[rng() % vals.size()]);
    std::uint32_t pa = st.alloc(proto, 11, {});
    concrete::CObject base;
    base.cls = ClassTag::Object;
    base.proto = concrete::ObjAddr{pa};
    size_t nprops = rng() % 4;
    for (size_t i = 0; i < nprops; ++i)
      base.set(keys[rng() % keys.size()], vals[rng() % vals.size()]);
    std::uint32_t ba = st.alloc(base, 12, {});

    dom::AbsStore abs = alpha::alpha_store(st, 0);
    dom::AbsAddr aaddr = alpha::alpha_addr(st, ba, 0);
    dom::AddrSet bases = dom::AddrSet::of(aaddr);

    for (const auto& k : keys) {
      concrete::CValue cv = concrete_lookup(st, concrete::ObjAddr{ba}, k);
      BValue got = dom::lookup_prop(abs, bases, AbsStr::of(k));
      EXPECT_TRUE(dom::leq(alpha::alpha_value(st, cv, 0), got))
          << "lookup " << k;
      // an unknown key of the same category must cover the same result
      BValue cat = dom::lookup_prop(
          abs, bases, AbsStr::mid(category_kind(dom::classify_str(k))));
      EXPECT_TRUE(dom::leq(alpha::alpha_value(st, cv, 0).without_addrs(),
                           cat.without_addrs()))
          << "category lookup " << k;
    }

    // update: strong where the abstract address is provably singular
    std::string uk = keys[rng() % keys.size()];
    concrete::CValue uv = vals[rng() % vals.size()];
    concrete::CStore st2 = st;
    st2.obj_at(ba).set(uk, uv);
    for (bool strong : {true, false}) {
      dom::AbsStore abs2 = abs;
      dom::obj_update(abs2.obj_mut(aaddr), strong, AbsStr::of(uk),
                      alpha::alpha_value(st, uv, 0));
      EXPECT_TRUE(dom::leq(alpha::alpha_obj(st2, st2.obj_at(ba), 0),
                           abs2.obj(aaddr)))
          << "update " << uk << (strong ? " strong" : " weak");
    }

    // delete
    std::string dk = keys[rng() % keys.size()];
    concrete::CStore st3 = st;
    st3.obj_at(ba).erase(dk);
    for (bool strong : {true, false}) {
      dom::AbsStore abs3 = abs;
      dom::obj_delete(abs3.obj_mut(aaddr), strong, AbsStr::of(dk));
      EXPECT_TRUE(dom::leq(alpha::alpha_obj(st3, st3.obj_at(ba), 0),
                           abs3.obj(aaddr)))
          << "delete " << dk << (strong ? " strong" : " weak");
    }

    // enumerate covers every concretely enumerable key on the chain
    std::vector<AbsStr> ks = dom::obj_enumerate(abs, bases);
    const concrete::CObject* walk = &st.obj_at(ba);
    for (;;) {
      for (const auto& p : walk->props) {
        if (!p.enumerable) continue;
        bool covered = false;
        for (const auto& s : ks) covered = covered || dom::str_admits(s, p.key);
        EXPECT_TRUE(covered) << "enumerate missed " << p.key;
      }
      if (!concrete::is_addr(walk->proto)) break;
      walk = &st.obj_at(std::get<concrete::ObjAddr>(walk->proto));
    }
  }
}

TEST(StrConcat, MixedConstCategoryPin) {
  // no special string ends in "foo", so a numeric prefix cannot rebuild one
  AbsStr r = dom::str_concat(AbsStr::mid(AbsStr::Kind::SNum), AbsStr::of("foo"));
  EXPECT_TRUE(dom::leq(r, AbsStr::mid(AbsStr::Kind::SNotNumNorSpl)));
  EXPECT_TRUE(dom::str_admits(r, "1foo"));
  // but a numeric prefix can finish "NaN" into "isNaN"? no: "is" is not
  // numeric; the only numeric-suffix special is isNaN via its "NaN" tail
  AbsStr r2 = dom::str_concat(AbsStr::of("is"),
                              AbsStr::mid(AbsStr::Kind::SNum));
  EXPECT_TRUE(dom::str_admits(r2, "isNaN"));
}

TEST(Store, AddrTokensDistinguishAddrs) {
  dom::AbsAddr a = dom::AbsAddr::object(1, ClassTag::Object, {});
  dom::AbsAddr b = dom::AbsAddr::object(2, ClassTag::Object, {});
  dom::AbsAddr c = dom::AbsAddr::object(1, ClassTag::Array, {});
  dom::AbsAddr d = dom::AbsAddr::object(1, ClassTag::Object, {77});
  EXPECT_EQ(dom::addr_token(a), dom::addr_token(a));
  EXPECT_NE(dom::addr_token(a), dom::addr_token(b));
  EXPECT_NE(dom::addr_token(a), dom::addr_token(c));
  EXPECT_NE(dom::addr_token(a), dom::addr_token(d));
  EXPECT_NE(dom::addrs_token(dom::AddrSet::of(a)),
            dom::addrs_token(dom::AddrSet::of(b)));
  dom::AddrSet s1 = dom::AddrSet::of(a);
  s1.insert(b);
  dom::AddrSet s2 = dom::AddrSet::of(b);
  s2.insert(a);
  EXPECT_EQ(dom::addrs_token(s1), dom::addrs_token(s2));
}

}  // namespace
