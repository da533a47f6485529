// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include "nl2sva/equivalence.hpp"
#include "nl2sva/parser.hpp"
#include "nl2sva/semantics.hpp"

using namespace nl2sva;

namespace {

SvaAst assertion(const std::string& body) {
  return parse_assertion("assert property (@(posedge clk) " + body + ");");
}

const SignalTable& ab_table() {
  static SignalTable t({{"a", 1, ""}, {"b", 1, ""}, {"c", 1, ""}});
  return t;
}

} // namespace

TEST_CASE("non-overlapping implication equals its LRM rewrite") {
  EquivalenceResult r =
      equivalent(assertion("a |=> b"), assertion("(a ##1 1) |-> b"),
                 ab_table(), {.max_len = 5});
  CHECK(r.equivalent());
  CHECK(r.compared_bodies_only);
  CHECK(r.traces_checked > 0);
}

TEST_CASE("overlap vs non-overlap are distinguished with a counterexample") {
  EquivalenceResult r = equivalent(assertion("a |-> b"), assertion("a |=> b"),
                                   ab_table(), {.max_len = 5});
  REQUIRE(r.kind == EquivalenceResult::Kind::Inequivalent);
  REQUIRE(r.counterexample);

  // The returned trace must actually distinguish the two bodies.
  const Trace& cex = *r.counterexample;
  bool g = eval_property_at(*assertion("a |-> b").body, cex, r.cex_cycle);
  bool c = eval_property_at(*assertion("a |=> b").body, cex, r.cex_cycle);
  CHECK(g != c);

  // The canonical first counterexample: a=1, b=0 at cycle 0 of a length-1
  // trace (the overlapping form already fails there, the non-overlapping
  // form has no next cycle to check).
  CHECK(cex.length == 1);
  CHECK(cex.at(0, 0) == 1); // a
  CHECK(cex.at(1, 0) == 0); // b

  // The two-cycle trace a=1,b=0 then b=1 distinguishes them as well.
  Trace stated = parse_trace("a:1 b:1\n1 0\n0 1\n");
  g = eval_property_at(*assertion("a |-> b").body, stated, 0);
  c = eval_property_at(*assertion("a |=> b").body, stated, 0);
  CHECK(g != c);
}

TEST_CASE("equivalence is reflexive and symmetric") {
  const char* bodies[] = {"a |-> b", "a ##2 b |=> c", "$rose(a) |-> s_eventually b"};
  for (const char* lhs : bodies) {
    CHECK(equivalent(assertion(lhs), assertion(lhs), ab_table()).equivalent());
    for (const char* rhs : bodies) {
      bool lr = equivalent(assertion(lhs), assertion(rhs), ab_table()).equivalent();
      bool rl = equivalent(assertion(rhs), assertion(lhs), ab_table()).equivalent();
      CHECK(lr == rl);
    }
  }
}

TEST_CASE("clock mismatch short-circuits") {
  SvaAst golden = parse_assertion("assert property (@(posedge clk) a |-> b);");
  SvaAst negedge = parse_assertion("assert property (@(negedge clk) a |-> b);");
  EquivalenceResult r = equivalent(golden, negedge, ab_table());
  CHECK(r.kind == EquivalenceResult::Kind::ClockMismatch);
  CHECK_FALSE(r.counterexample);
  CHECK(r.traces_checked == 0);

  SvaAst other_clk = parse_assertion("assert property (@(posedge clk2) a |-> b);");
  CHECK(equivalent(golden, other_clk, ab_table()).kind ==
        EquivalenceResult::Kind::ClockMismatch);
}

TEST_CASE("matching disable conditions compare bodies only") {
  SvaAst g = parse_assertion(
      "assert property (@(posedge clk) disable iff (rst) a |=> b);");
  SvaAst c = parse_assertion(
      "assert property (@(posedge clk) disable iff (rst) (a ##1 1) |-> b);");
  SignalTable table({{"a", 1, ""}, {"b", 1, ""}, {"rst", 1, ""}});
  EquivalenceResult r = equivalent(g, c, table);
  CHECK(r.equivalent());
  CHECK(r.compared_bodies_only);
}

TEST_CASE("differing disable conditions fall back to full attempt semantics") {
  SvaAst g = parse_assertion(
      "assert property (@(posedge clk) disable iff (rst) a |-> b);");
  SvaAst c = parse_assertion("assert property (@(posedge clk) a |-> b);");
  SignalTable table({{"a", 1, ""}, {"b", 1, ""}, {"rst", 1, ""}});
  EquivalenceResult r = equivalent(g, c, table, {.max_len = 3});
  REQUIRE(r.kind == EquivalenceResult::Kind::Inequivalent);
  CHECK_FALSE(r.compared_bodies_only);
  // rst=1 with a=1,b=0: the golden attempt is disabled, the candidate fails.
  REQUIRE(r.counterexample);
  int rst_col = r.counterexample->column_of("rst");
  REQUIRE(rst_col >= 0);
  CHECK(r.counterexample->at(rst_col, r.cex_cycle) == 1);
}

TEST_CASE("budget violations are rejected up front") {
  SignalTable wide({{"a", 16, ""}, {"b", 16, ""}});
  try {
    equivalent(assertion("a == b"), assertion("b == a"), wide, {.max_len = 5});
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExceeded);
  }
}

TEST_CASE("undeclared signals are rejected") {
  try {
    equivalent(assertion("a |-> zz"), assertion("a |-> b"), ab_table());
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownSignal);
  }
}

TEST_CASE("worker partitioning returns the same counterexample") {
  EquivalenceResult one = equivalent(assertion("a |-> b"), assertion("a |=> b"),
                                     ab_table(), {.max_len = 4, .workers = 1});
  EquivalenceResult two = equivalent(assertion("a |-> b"), assertion("a |=> b"),
                                     ab_table(), {.max_len = 4, .workers = 3});
  REQUIRE(one.kind == EquivalenceResult::Kind::Inequivalent);
  REQUIRE(two.kind == EquivalenceResult::Kind::Inequivalent);
  CHECK(one.cex_cycle == two.cex_cycle);
  REQUIRE(one.counterexample);
  REQUIRE(two.counterexample);
  CHECK(one.counterexample->values == two.counterexample->values);

  EquivalenceResult eq1 = equivalent(assertion("a |=> b"),
                                     assertion("(a ##1 1) |-> b"), ab_table(),
                                     {.max_len = 4, .workers = 3});
  CHECK(eq1.equivalent());
}

TEST_CASE("width-sensitive bodies: value operators see full vectors") {
  SignalTable table({{"x", 2, ""}, {"y", 1, ""}});
  // $onehot(x) differs from x[0] once x can be 2 (bit 1 set).
  EquivalenceResult r = equivalent(assertion("$onehot(x) |-> y"),
                                   assertion("x[0] |-> y"), table,
                                   {.max_len = 3});
  CHECK(r.kind == EquivalenceResult::Kind::Inequivalent);

  EquivalenceResult same = equivalent(assertion("$onehot0(x) || !$onehot0(x)"),
                                      assertion("x == x"), table,
                                      {.max_len = 3});
  CHECK(same.equivalent());
}
