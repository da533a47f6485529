// SPDX-License-Identifier: Apache-2.0
//
// Naive reference semantics, written independently of the compiled
// evaluator: sequence matching returns explicit end-point sets and every
// operator follows its prose definition directly. Deliberately slow and
// allocation-heavy; exists only to cross-check the real evaluator.
#pragma once

#include <cstdint>
#include <vector>

#include "nl2sva/sva.hpp"
#include "nl2sva/trace.hpp"

namespace refeval {

inline std::uint64_t value(const nl2sva::Expr& e, const nl2sva::Trace& tr,
                           long cycle) {
  using nl2sva::OpKind;
  if (cycle < 0) return 0;
  switch (e.kind) {
  case OpKind::SignalRef: {
    int col = tr.column_of(e.name);
    return tr.values[static_cast<std::size_t>(col)]
                    [static_cast<std::size_t>(cycle)];
  }
  case OpKind::IntLiteral:
    return e.value;
  case OpKind::Select: {
    std::uint64_t base = value(*e.children[0], tr, cycle);
    if (!e.has_range) return (base >> e.lsb) & 1u;
    std::uint64_t out = 0;
    for (int bit = e.lsb; bit <= e.msb; ++bit)
      out |= ((base >> bit) & 1u) << (bit - e.lsb);
    return out;
  }
  case OpKind::Not:
    return value(*e.children[0], tr, cycle) == 0 ? 1 : 0;
  case OpKind::And:
    return value(*e.children[0], tr, cycle) != 0 &&
                   value(*e.children[1], tr, cycle) != 0
               ? 1
               : 0;
  case OpKind::Or:
    return value(*e.children[0], tr, cycle) != 0 ||
                   value(*e.children[1], tr, cycle) != 0
               ? 1
               : 0;
  case OpKind::Eq:
    return value(*e.children[0], tr, cycle) ==
                   value(*e.children[1], tr, cycle)
               ? 1
               : 0;
  case OpKind::Neq:
    return value(*e.children[0], tr, cycle) !=
                   value(*e.children[1], tr, cycle)
               ? 1
               : 0;
  case OpKind::Rose:
    return (value(*e.children[0], tr, cycle) & 1) == 1 &&
                   (value(*e.children[0], tr, cycle - 1) & 1) == 0
               ? 1
               : 0;
  case OpKind::Fell:
    return (value(*e.children[0], tr, cycle) & 1) == 0 &&
                   (value(*e.children[0], tr, cycle - 1) & 1) == 1
               ? 1
               : 0;
  case OpKind::Past:
    return value(*e.children[0], tr, cycle - e.param);
  case OpKind::Stable:
    return value(*e.children[0], tr, cycle) ==
                   value(*e.children[0], tr, cycle - 1)
               ? 1
               : 0;
  case OpKind::Onehot: {
    std::uint64_t v = value(*e.children[0], tr, cycle);
    int bits = 0;
    while (v) {
      bits += static_cast<int>(v & 1);
      v >>= 1;
    }
    return bits == 1 ? 1 : 0;
  }
  case OpKind::Onehot0: {
    std::uint64_t v = value(*e.children[0], tr, cycle);
    int bits = 0;
    while (v) {
      bits += static_cast<int>(v & 1);
      v >>= 1;
    }
    return bits <= 1 ? 1 : 0;
  }
  default:
    throw std::logic_error("refeval::value on non-value node");
  }
}

struct Matches {
  std::vector<long> ends;
  bool pending = false;
};

inline Matches match(const nl2sva::Expr& e, const nl2sva::Trace& tr,
                     long start) {
  using nl2sva::OpKind;
  if (e.kind == OpKind::Delay) {
    if (e.children.size() == 1) return match(*e.children[0], tr, start + e.param);
    Matches left = match(*e.children[0], tr, start);
    Matches out;
    out.pending = left.pending;
    for (long end : left.ends) {
      Matches right = match(*e.children[1], tr, end + e.param);
      out.pending = out.pending || right.pending;
      for (long re : right.ends) out.ends.push_back(re);
    }
    return out;
  }
  Matches out;
  if (start >= static_cast<long>(tr.length)) {
    out.pending = true;
    return out;
  }
  if (value(e, tr, start) != 0) out.ends.push_back(start);
  return out;
}

inline bool holds(const nl2sva::Expr& e, const nl2sva::Trace& tr, long cycle,
                  bool strict) {
  using nl2sva::OpKind;
  long len = static_cast<long>(tr.length);
  switch (e.kind) {
  case OpKind::OverlapImpl:
  case OpKind::NonOverlapImpl: {
    Matches m = match(*e.children[0], tr, cycle);
    for (long end : m.ends) {
      long p_start = e.kind == OpKind::OverlapImpl ? end : end + 1;
      if (p_start >= len) {
        if (strict) return false;
        continue;
      }
      if (!holds(*e.children[1], tr, p_start, strict)) return false;
    }
    return true;
  }
  case OpKind::SEventually: {
    if (!strict) return true;
    for (long c = cycle; c < len; ++c)
      if (holds(*e.children[0], tr, c, strict)) return true;
    return false;
  }
  case OpKind::Iff:
    return holds(*e.children[0], tr, cycle, strict) ==
           holds(*e.children[1], tr, cycle, strict);
  default: {
    Matches m = match(e, tr, cycle);
    if (!m.ends.empty()) return true;
    if (m.pending) return !strict;
    return false;
  }
  }
}

} // namespace refeval
