// SPDX-License-Identifier: Apache-2.0
//
// Exhaustive expression generator: every well-classed expression with at
// most two operator nodes over up to three one-bit signals. Operator
// parameters range over {1, 2} to keep the space finite.
#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "nl2sva/sva.hpp"

namespace exprgen {

enum class Cls { Value, Seq, Prop };

struct Gen {
  nl2sva::ExprPtr e;
  Cls cls;
};

inline nl2sva::ExprPtr leaf(const std::string& name) {
  auto e = std::make_shared<nl2sva::Expr>();
  e->kind = nl2sva::OpKind::SignalRef;
  e->name = name;
  return e;
}

inline nl2sva::ExprPtr node1(nl2sva::OpKind k, nl2sva::ExprPtr a, int param = 0) {
  auto e = std::make_shared<nl2sva::Expr>();
  e->kind = k;
  e->param = param;
  e->children = {std::move(a)};
  return e;
}

inline nl2sva::ExprPtr node2(nl2sva::OpKind k, nl2sva::ExprPtr a,
                             nl2sva::ExprPtr b, int param = 0) {
  auto e = std::make_shared<nl2sva::Expr>();
  e->kind = k;
  e->param = param;
  e->children = {std::move(a), std::move(b)};
  return e;
}

/// All expressions with exactly `ops` operator nodes whose children come
/// from `smaller` (one fewer op) and `leaves` (zero ops), respecting the
/// class rules the parser enforces.
inline std::vector<Gen> expand(const std::vector<Gen>& smaller,
                               const std::vector<Gen>& leaves) {
  using nl2sva::OpKind;
  std::vector<Gen> out;

  auto values = [](const std::vector<Gen>& v) {
    std::vector<Gen> r;
    for (const Gen& g : v)
      if (g.cls == Cls::Value) r.push_back(g);
    return r;
  };
  auto seqs_or_values = [](const std::vector<Gen>& v) {
    std::vector<Gen> r;
    for (const Gen& g : v)
      if (g.cls != Cls::Prop) r.push_back(g);
    return r;
  };

  const std::vector<Gen> sm_val = values(smaller);
  const std::vector<Gen> lf_val = values(leaves);
  const std::vector<Gen> sm_sv = seqs_or_values(smaller);
  const std::vector<Gen> lf_sv = seqs_or_values(leaves);

  // Unary over one-smaller operands.
  for (const Gen& g : sm_val) {
    for (OpKind k : {OpKind::Not, OpKind::Rose, OpKind::Fell, OpKind::Stable,
                     OpKind::Onehot, OpKind::Onehot0})
      out.push_back({node1(k, g.e), Cls::Value});
    for (int n : {1, 2})
      out.push_back({node1(OpKind::Past, g.e, n), Cls::Value});
  }
  for (const Gen& g : sm_sv)
    for (int n : {1, 2})
      out.push_back({node1(OpKind::Delay, g.e, n), Cls::Seq});
  for (const Gen& g : smaller)
    out.push_back({node1(OpKind::SEventually, g.e), Cls::Prop});

  // Binary: one child from `smaller`, the other a leaf (total = ops).
  auto pairs = [&out](const std::vector<Gen>& ls, const std::vector<Gen>& rs,
                      auto&& make) {
    for (const Gen& l : ls)
      for (const Gen& r : rs) make(l, r);
  };
  auto both_ways = [&](const std::vector<Gen>& sm, const std::vector<Gen>& lf,
                       auto&& make) {
    pairs(sm, lf, make);
    pairs(lf, sm, make);
  };

  both_ways(sm_val, lf_val, [&](const Gen& l, const Gen& r) {
    for (OpKind k : {OpKind::And, OpKind::Or, OpKind::Eq, OpKind::Neq})
      out.push_back({node2(k, l.e, r.e), Cls::Value});
  });
  both_ways(sm_sv, lf_sv, [&](const Gen& l, const Gen& r) {
    for (int n : {1, 2})
      out.push_back({node2(OpKind::Delay, l.e, r.e, n), Cls::Seq});
  });
  // Implication: antecedent must not be a property.
  pairs(sm_sv, lf_sv, [&](const Gen& l, const Gen& r) {
    out.push_back({node2(OpKind::OverlapImpl, l.e, r.e), Cls::Prop});
    out.push_back({node2(OpKind::NonOverlapImpl, l.e, r.e), Cls::Prop});
  });
  pairs(lf_sv, smaller, [&](const Gen& l, const Gen& r) {
    out.push_back({node2(OpKind::OverlapImpl, l.e, r.e), Cls::Prop});
    out.push_back({node2(OpKind::NonOverlapImpl, l.e, r.e), Cls::Prop});
  });
  both_ways(smaller, leaves, [&](const Gen& l, const Gen& r) {
    out.push_back({node2(OpKind::Iff, l.e, r.e), Cls::Prop});
  });

  return out;
}

/// Expressions with up to two operators over the given one-bit signals,
/// deduplicated by canonical rendering.
inline std::vector<nl2sva::ExprPtr> all_up_to_two_ops(
    const std::vector<std::string>& signal_names) {
  std::vector<Gen> zero;
  for (const std::string& n : signal_names) zero.push_back({leaf(n), Cls::Value});

  std::vector<Gen> one = expand(zero, zero);
  std::vector<Gen> two = expand(one, zero);

  std::vector<nl2sva::ExprPtr> out;
  std::set<std::string> seen;
  for (const std::vector<Gen>* level : {&zero, &one, &two})
    for (const Gen& g : *level)
      if (seen.insert(nl2sva::render_expr(*g.e)).second) out.push_back(g.e);
  return out;
}

} // namespace exprgen
