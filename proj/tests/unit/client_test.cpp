// Error-reporting client: warning extraction from analysis results and
// report serialization.

#include <gtest/gtest.h>

#include "njs/engine.hpp"
#include "njs/ir_text.hpp"
#include "njs/strategies.hpp"

namespace {

using namespace njs;

TEST(Client, Placeholder) {
  ir::Program p = ir::parse_program("(decl ((x 1)) (:= x x))");
  auto r = engine::analyze(p, strat::make_strategy("fs"));
  EXPECT_TRUE(r.complete);
}

}  // namespace
