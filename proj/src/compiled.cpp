// SPDX-License-Identifier: Apache-2.0

#include "compiled.hpp"

#include <algorithm>
#include <bit>

namespace nl2sva::detail {

std::uint64_t CValue::eval(const TraceView& t, int cycle) const {
  switch (kind) {
  case OpKind::SignalRef:
    return t.sample(sig, cycle);
  case OpKind::IntLiteral:
    return lit;
  case OpKind::Select:
    return (a->eval(t, cycle) >> shift) & mask;
  case OpKind::Not:
    return a->eval(t, cycle) ? 0 : 1;
  case OpKind::And:
    return (a->eval(t, cycle) && b->eval(t, cycle)) ? 1 : 0;
  case OpKind::Or:
    return (a->eval(t, cycle) || b->eval(t, cycle)) ? 1 : 0;
  case OpKind::Eq:
    return a->eval(t, cycle) == b->eval(t, cycle) ? 1 : 0;
  case OpKind::Neq:
    return a->eval(t, cycle) != b->eval(t, cycle) ? 1 : 0;
  case OpKind::Rose: {
    std::uint64_t now = a->eval(t, cycle) & 1;
    std::uint64_t before = cycle > 0 ? (a->eval(t, cycle - 1) & 1) : 0;
    return (now == 1 && before == 0) ? 1 : 0;
  }
  case OpKind::Fell: {
    std::uint64_t now = a->eval(t, cycle) & 1;
    std::uint64_t before = cycle > 0 ? (a->eval(t, cycle - 1) & 1) : 0;
    return (now == 0 && before == 1) ? 1 : 0;
  }
  case OpKind::Past:
    return cycle - param < 0 ? 0 : a->eval(t, cycle - param);
  case OpKind::Stable: {
    std::uint64_t now = a->eval(t, cycle);
    std::uint64_t before = cycle > 0 ? a->eval(t, cycle - 1) : 0;
    return now == before ? 1 : 0;
  }
  case OpKind::Onehot:
    return std::popcount(a->eval(t, cycle)) == 1 ? 1 : 0;
  case OpKind::Onehot0:
    return std::popcount(a->eval(t, cycle)) <= 1 ? 1 : 0;
  default:
    throw Error(ErrorCode::Data, "compiled value eval: non-value op");
  }
}

MatchResult match_seq(const CSeq& s, const TraceView& t, int start) {
  int touched = start;
  for (const CObligation& ob : s.obligations) {
    int c = start + ob.offset;
    if (c >= t.length) return {MatchKind::Pending, 0, t.length - 1};
    touched = c;
    if (!ob.check.eval(t, c)) return {MatchKind::NoMatch, 0, touched};
  }
  return {MatchKind::Match, start + s.duration, touched};
}

PropOutcome eval_prop(const CProp& p, const TraceView& t, int start,
                      bool strict) {
  switch (p.kind) {
  case CProp::Kind::Seq: {
    MatchResult m = match_seq(p.seq, t, start);
    switch (m.kind) {
    case MatchKind::Match:
      return {true, true, m.touched};
    case MatchKind::NoMatch:
      return {false, true, m.touched};
    case MatchKind::Pending:
      return {!strict, true, m.touched};
    }
    break;
  }
  case CProp::Kind::Impl: {
    MatchResult m = match_seq(p.seq, t, start);
    if (m.kind == MatchKind::NoMatch) return {true, false, m.touched};
    if (m.kind == MatchKind::Pending) return {true, false, m.touched};
    int cons_start = p.overlap ? m.end : m.end + 1;
    if (cons_start >= t.length)
      return {!strict, true, t.length - 1};
    PropOutcome sub = eval_prop(*p.a, t, cons_start, strict);
    return {sub.holds, true, std::max(m.touched, sub.touched)};
  }
  case CProp::Kind::Eventually: {
    if (!strict) return {true, true, t.length - 1};
    for (int c = start; c < t.length; ++c)
      if (eval_prop(*p.a, t, c, strict).holds) return {true, true, t.length - 1};
    return {false, true, t.length - 1};
  }
  case CProp::Kind::Iff: {
    PropOutcome l = eval_prop(*p.a, t, start, strict);
    PropOutcome r = eval_prop(*p.b, t, start, strict);
    return {l.holds == r.holds, true, std::max(l.touched, r.touched)};
  }
  }
  throw Error(ErrorCode::Data, "compiled property eval: bad node");
}

CValue compile_value(const Expr& e, const ColumnBinder& binder) {
  CValue v;
  v.kind = e.kind;
  switch (e.kind) {
  case OpKind::SignalRef:
    v.sig = binder.column(e.name);
    if (v.sig < 0)
      throw Error(ErrorCode::UnknownSignal,
                  "undeclared signal '" + e.name + "'");
    return v;
  case OpKind::IntLiteral:
    v.lit = e.value;
    return v;
  case OpKind::Select: {
    v.a = std::make_unique<CValue>(compile_value(*e.children[0], binder));
    v.shift = e.lsb;
    int width = e.has_range ? e.msb - e.lsb + 1 : 1;
    v.mask = width >= 64 ? ~std::uint64_t{0}
                         : ((std::uint64_t{1} << width) - 1);
    return v;
  }
  case OpKind::Not:
  case OpKind::Rose:
  case OpKind::Fell:
  case OpKind::Stable:
  case OpKind::Onehot:
  case OpKind::Onehot0:
    v.a = std::make_unique<CValue>(compile_value(*e.children[0], binder));
    return v;
  case OpKind::Past:
    v.a = std::make_unique<CValue>(compile_value(*e.children[0], binder));
    v.param = e.param;
    return v;
  case OpKind::And:
  case OpKind::Or:
  case OpKind::Eq:
  case OpKind::Neq:
    v.a = std::make_unique<CValue>(compile_value(*e.children[0], binder));
    v.b = std::make_unique<CValue>(compile_value(*e.children[1], binder));
    return v;
  default:
    throw Error(ErrorCode::Layer,
                std::string("expected a value expression, found ") +
                    op_kind_name(e.kind));
  }
}

namespace {

void flatten_sequence(const Expr& e, const ColumnBinder& binder, int base,
                      CSeq& out) {
  if (e.kind == OpKind::Delay) {
    if (e.children.size() == 1) {
      flatten_sequence(*e.children[0], binder, base + e.param, out);
    } else {
      flatten_sequence(*e.children[0], binder, base, out);
      int left_end = out.duration;
      flatten_sequence(*e.children[1], binder, left_end + e.param, out);
    }
    return;
  }
  CObligation ob;
  ob.offset = base;
  ob.check = compile_value(e, binder);
  out.obligations.push_back(std::move(ob));
  out.duration = std::max(out.duration, base);
}

} // namespace

CSeq compile_sequence(const Expr& e, const ColumnBinder& binder) {
  CSeq s;
  flatten_sequence(e, binder, 0, s);
  std::stable_sort(s.obligations.begin(), s.obligations.end(),
                   [](const CObligation& x, const CObligation& y) {
                     return x.offset < y.offset;
                   });
  return s;
}

CProp compile_property(const Expr& e, const ColumnBinder& binder) {
  CProp p;
  switch (e.kind) {
  case OpKind::OverlapImpl:
  case OpKind::NonOverlapImpl:
    p.kind = CProp::Kind::Impl;
    p.overlap = e.kind == OpKind::OverlapImpl;
    p.seq = compile_sequence(*e.children[0], binder);
    p.a = std::make_unique<CProp>(compile_property(*e.children[1], binder));
    return p;
  case OpKind::SEventually:
    p.kind = CProp::Kind::Eventually;
    p.a = std::make_unique<CProp>(compile_property(*e.children[0], binder));
    return p;
  case OpKind::Iff:
    p.kind = CProp::Kind::Iff;
    p.a = std::make_unique<CProp>(compile_property(*e.children[0], binder));
    p.b = std::make_unique<CProp>(compile_property(*e.children[1], binder));
    return p;
  default:
    p.kind = CProp::Kind::Seq;
    p.seq = compile_sequence(e, binder);
    return p;
  }
}

} // namespace nl2sva::detail
