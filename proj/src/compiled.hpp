// SPDX-License-Identifier: Apache-2.0
//
// Internal compiled form of an assertion body: signal references resolved to
// column indices, sequences flattened to (cycle offset, value check)
// obligation lists. Shared by the single-trace checker and the exhaustive
// equivalence enumerator; not installed.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "nl2sva/errors.hpp"
#include "nl2sva/sva.hpp"

namespace nl2sva::detail {

/// Column-major view over trace storage: value(sig, c) = vals[sig * stride + c].
/// Cycles before 0 sample the default value 0.
struct TraceView {
  const std::uint64_t* vals = nullptr;
  int length = 0;
  std::size_t stride = 0;

  std::uint64_t sample(int sig, int cycle) const {
    return cycle < 0 ? 0 : vals[static_cast<std::size_t>(sig) * stride +
                                static_cast<std::size_t>(cycle)];
  }
};

struct CValue {
  OpKind kind;
  int sig = -1;          // SignalRef: resolved column
  std::uint64_t lit = 0; // IntLiteral
  int param = 1;         // Past depth
  int shift = 0;         // Select lsb
  std::uint64_t mask = ~std::uint64_t{0}; // Select width mask
  std::unique_ptr<CValue> a, b;

  std::uint64_t eval(const TraceView& t, int cycle) const;
};

struct CObligation {
  int offset = 0;
  CValue check;
};

/// Fixed-duration sequence: obligations sorted by offset; the match end
/// point is start + duration, where duration equals the last offset.
struct CSeq {
  std::vector<CObligation> obligations;
  int duration = 0;
};

enum class MatchKind { Match, NoMatch, Pending };

struct MatchResult {
  MatchKind kind;
  int end = 0;     // valid for Match
  int touched = 0; // last cycle examined
};

MatchResult match_seq(const CSeq& s, const TraceView& t, int start);

struct CProp {
  enum class Kind { Seq, Impl, Eventually, Iff };
  Kind kind = Kind::Seq;
  bool overlap = true; // Impl: |-> vs |=>
  CSeq seq;            // Seq body or Impl antecedent
  std::unique_ptr<CProp> a, b;
};

struct PropOutcome {
  bool holds = true;
  bool root_matched = true; // false only for an implication whose antecedent
                            // did not complete a match
  int touched = 0;
};

/// Evaluates one attempt starting at `start`. Under weak end-of-trace
/// semantics obligations running past the end count as holding; `strict`
/// flips them to failing. s_eventually can never be refuted on a finite
/// trace under weak semantics.
PropOutcome eval_prop(const CProp& p, const TraceView& t, int start,
                      bool strict);

/// Maps signal names to trace columns.
class ColumnBinder {
public:
  virtual ~ColumnBinder() = default;
  virtual int column(const std::string& name) const = 0; // -1 when unknown
};

CValue compile_value(const Expr& e, const ColumnBinder& binder);
CSeq compile_sequence(const Expr& e, const ColumnBinder& binder);
CProp compile_property(const Expr& e, const ColumnBinder& binder);

} // namespace nl2sva::detail
