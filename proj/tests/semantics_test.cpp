// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include "nl2sva/parser.hpp"
#include "nl2sva/semantics.hpp"
#include "nl2sva/trace.hpp"
#include "support/expr_gen.hpp"
#include "support/reference_eval.hpp"
#include "support/trace_enum.hpp"

using namespace nl2sva;

namespace {

Trace trace1(const std::string& text) { return parse_trace(text); }

const char* kFfAssertion =
    "assert property (@(posedge clk) disable iff (rst) (en |=> (out == "
    "$past(in))));";

} // namespace

TEST_CASE("trace fixture round trip") {
  Trace t = trace1("a:1 b:2\n0 3\n1 2\n");
  CHECK(t.length == 2);
  CHECK(t.signals[1].width == 2);
  CHECK(t.at(1, 0) == 3);
  Trace again = parse_trace(format_trace(t));
  CHECK(again.length == t.length);
  CHECK(again.values == t.values);

  CHECK_THROWS_AS(parse_trace("a:1\n"), Error);       // no rows
  CHECK_THROWS_AS(parse_trace("a:1\n2\n"), Error);    // value too wide
  CHECK_THROWS_AS(parse_trace("a\n0\n"), Error);      // bad header
  CHECK_THROWS_AS(parse_trace("a:1 b:1\n0\n"), Error); // ragged row
}

TEST_CASE("boolean evaluation basics") {
  Trace t = trace1("a:1 b:1 req:1 grant:1 x:2\n1 0 0 1 2\n");
  CHECK(eval_value(*parse_expression("a && b"), t, 0) == 0);
  CHECK(eval_value(*parse_expression("req || grant"), t, 0) == 1);
  CHECK(eval_value(*parse_expression("x == 2"), t, 0) == 1);
  CHECK(eval_value(*parse_expression("x[1]"), t, 0) == 1);
  CHECK(eval_value(*parse_expression("x[0]"), t, 0) == 0);
  CHECK(eval_value(*parse_expression("!a"), t, 0) == 0);
}

TEST_CASE("sampled-value functions") {
  Trace t = trace1("s:1 x:3\n0 0\n1 6\n1 6\n0 1\n");
  ExprPtr rose = parse_expression("$rose(s)");
  CHECK(eval_value(*rose, t, 1) == 1);
  CHECK(eval_value(*rose, t, 2) == 0);
  ExprPtr fell = parse_expression("$fell(s)");
  CHECK(eval_value(*fell, t, 3) == 1);
  CHECK(eval_value(*fell, t, 1) == 0);
  ExprPtr stable = parse_expression("$stable(x)");
  CHECK(eval_value(*stable, t, 2) == 1);
  CHECK(eval_value(*stable, t, 1) == 0);
  CHECK(eval_value(*parse_expression("$past(x, 1)"), t, 0) == 0); // default
  CHECK(eval_value(*parse_expression("$past(x, 1)"), t, 2) == 6);
  CHECK(eval_value(*parse_expression("$past(x, 3)"), t, 3) == 0);
  CHECK(eval_value(*parse_expression("$onehot0(x)"), t, 0) == 1); // x=0
  CHECK(eval_value(*parse_expression("$onehot0(x)"), t, 1) == 0); // x=6
  CHECK(eval_value(*parse_expression("$onehot(x)"), t, 3) == 1);  // x=1
  CHECK(eval_value(*parse_expression("$onehot(x)"), t, 0) == 0);  // x=0
}

TEST_CASE("rose at cycle zero sees a default prior of zero") {
  Trace t = trace1("s:1\n1\n");
  CHECK(eval_value(*parse_expression("$rose(s)"), t, 0) == 1);
  CHECK(eval_value(*parse_expression("$stable(s)"), t, 0) == 0);
  Trace z = trace1("s:1\n0\n");
  CHECK(eval_value(*parse_expression("$stable(s)"), z, 0) == 1);
}

TEST_CASE("property attempts follow the implication table rows") {
  ExprPtr taut = parse_expression("a |-> a");
  trace_enum::for_all_traces({"a"}, 4, [&](const Trace& t) {
    for (std::size_t c = 0; c < t.length; ++c)
      CHECK(eval_property_at(*taut, t, c));
  });

  Trace t1 = trace1("a:1 b:1\n1 0\n");
  CHECK_FALSE(eval_property_at(*parse_expression("a |-> b"), t1, 0));

  Trace t2 = trace1("a:1 b:1\n1 0\n0 1\n");
  CHECK(eval_property_at(*parse_expression("a |=> b"), t2, 0));
  CHECK_FALSE(eval_property_at(*parse_expression("a |-> b"), t2, 0));

  Trace pwm = trace1("pulse:1\n1\n0\n");
  CHECK(eval_property_at(*parse_expression("s_eventually (!pulse)"), pwm, 0));
}

TEST_CASE("weak versus strict end of trace") {
  Trace t = trace1("a:1 b:1\n1 0\n");
  ExprPtr cons_pending = parse_expression("a |=> b");
  CHECK(eval_property_at(*cons_pending, t, 0));
  CHECK_FALSE(eval_property_at(*cons_pending, t, 0, {.strict_end_of_trace = true}));

  ExprPtr delay = parse_expression("a ##3 b");
  CHECK(eval_property_at(*delay, t, 0));
  CHECK_FALSE(eval_property_at(*delay, t, 0, {.strict_end_of_trace = true}));

  // s_eventually can never be refuted on a finite trace under weak rules.
  ExprPtr ev = parse_expression("s_eventually b");
  CHECK(eval_property_at(*ev, t, 0));
  CHECK_FALSE(eval_property_at(*ev, t, 0, {.strict_end_of_trace = true}));
}

TEST_CASE("check_assertion honors disable iff") {
  SvaAst ff = parse_assertion(kFfAssertion);

  Trace all_rst = trace1("clk:1 rst:1 en:1 in:1 out:1\n0 1 1 1 0\n0 1 1 1 0\n");
  Verdict v = check_assertion(ff, all_rst);
  CHECK(v.status == Verdict::Status::VacuousHolds);
  for (const auto& [cycle, status] : v.per_attempt)
    CHECK(status == AttemptStatus::Disabled);

  Trace good = trace1("clk:1 rst:1 en:1 in:1 out:1\n0 0 1 1 0\n0 0 0 0 1\n");
  v = check_assertion(ff, good);
  CHECK(v.status == Verdict::Status::Holds);

  Trace bad = trace1("clk:1 rst:1 en:1 in:1 out:1\n0 0 1 1 0\n0 0 0 0 0\n");
  v = check_assertion(ff, bad);
  CHECK(v.status == Verdict::Status::Fails);
  REQUIRE_FALSE(v.per_attempt.empty());
  CHECK(v.per_attempt[0].first == 0);
  CHECK(v.per_attempt[0].second == AttemptStatus::Fails);

  Trace idle = trace1("clk:1 rst:1 en:1 in:1 out:1\n0 0 0 1 0\n0 0 0 0 1\n");
  v = check_assertion(ff, idle);
  CHECK(v.status == Verdict::Status::VacuousHolds);
}

TEST_CASE("disable firing mid-attempt discards the attempt") {
  SvaAst ast = parse_assertion(
      "assert property (@(posedge clk) disable iff (rst) (req |=> gnt));");
  // req at t0, gnt never comes, but rst pulses at t1 inside the attempt.
  Trace t = trace1("rst:1 req:1 gnt:1\n0 1 0\n1 0 0\n");
  Verdict v = check_assertion(ast, t);
  CHECK(v.status == Verdict::Status::VacuousHolds);
  CHECK(v.per_attempt[0].second == AttemptStatus::Disabled);
}

TEST_CASE("missing signals are reported") {
  SvaAst ast = parse_assertion("assert property (@(posedge clk) a |-> b);");
  Trace t = trace1("a:1\n1\n");
  try {
    check_assertion(ast, t);
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownSignal);
  }
}

TEST_CASE("monotone refutation: failures never un-fail on extensions") {
  // Spot-check the property on a family of assertions and all short traces.
  for (const char* body : {"a |-> b", "a |=> b", "a ##1 b", "$rose(a) |-> !b"}) {
    ExprPtr e = parse_expression(body);
    trace_enum::for_all_traces({"a", "b"}, 3, [&](const Trace& t) {
      SvaAst ast;
      ast.clocking = {ClockingEvent::Edge::Posedge, "clk"};
      ast.body = e;
      if (!check_assertion(ast, t).failed()) return;
      // Extend by one cycle in all four ways; the verdict must stay failed.
      for (std::uint64_t av = 0; av < 2; ++av) {
        for (std::uint64_t bv = 0; bv < 2; ++bv) {
          Trace ext = t;
          ext.length += 1;
          ext.values[0].push_back(av);
          ext.values[1].push_back(bv);
          CHECK(check_assertion(ast, ext).failed());
        }
      }
    });
  }
}

TEST_CASE("stable duality against past") {
  ExprPtr stable = parse_expression("$stable(a)");
  ExprPtr past_eq = parse_expression("$past(a, 1) == a");
  trace_enum::for_all_traces({"a"}, 4, [&](const Trace& t) {
    for (std::size_t c = 1; c < t.length; ++c)
      CHECK(eval_value(*stable, t, c) == eval_value(*past_eq, t, c));
  });
}

TEST_CASE("oracle agreement on a reduced slice of the expression space") {
  // The acceptance suite runs the full two-operator space; here every
  // one-operator expression is checked exhaustively to keep the unit run fast.
  std::vector<ExprPtr> exprs;
  {
    std::vector<exprgen::Gen> zero;
    for (const char* n : {"a", "b", "c"}) zero.push_back({exprgen::leaf(n), exprgen::Cls::Value});
    for (const exprgen::Gen& g : exprgen::expand(zero, zero)) exprs.push_back(g.e);
  }
  CHECK(exprs.size() > 100);
  std::size_t triples = 0;
  for (const ExprPtr& e : exprs) {
    std::vector<std::string> sigs = referenced_signals(*e);
    trace_enum::for_all_traces(sigs, 3, [&](const Trace& t) {
      for (std::size_t c = 0; c < t.length; ++c) {
        for (bool strict : {false, true}) {
          bool fast = eval_property_at(*e, t, c, {.strict_end_of_trace = strict});
          bool ref = refeval::holds(*e, t, static_cast<long>(c), strict);
          if (fast != ref) {
            CAPTURE(render_expr(*e));
            CAPTURE(format_trace(t));
            CAPTURE(c);
            CAPTURE(strict);
            REQUIRE(fast == ref);
          }
          ++triples;
        }
      }
    });
  }
  CHECK(triples > 10000);
}
