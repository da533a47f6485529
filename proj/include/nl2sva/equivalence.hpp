// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "nl2sva/sva.hpp"
#include "nl2sva/trace.hpp"

namespace nl2sva {

struct EquivalenceOptions {
  std::size_t max_len = 5;
  /// Worker threads for partitioning the trace space. Results are identical
  /// for any worker count; the first counterexample in canonical order wins.
  unsigned workers = 1;
};

struct EquivalenceResult {
  enum class Kind { Equivalent, Inequivalent, ClockMismatch };
  Kind kind = Kind::Equivalent;
  std::optional<Trace> counterexample; // present iff Inequivalent
  std::size_t cex_cycle = 0;
  bool compared_bodies_only = false;
  std::uint64_t traces_checked = 0;
  std::string note;

  bool equivalent() const { return kind == Kind::Equivalent; }
};

/// Decides bounded-trace equivalence of two assertions by enumerating every
/// trace over the referenced signals for each length in [1, max_len] and
/// comparing per-cycle attempt outcomes under weak end-of-trace semantics.
///
/// When the disable conditions are structurally equal (or both absent) only
/// the bodies are compared; otherwise full attempt semantics including
/// disable apply. Differing clock edge or clock signal short-circuits to
/// ClockMismatch without a trace search.
///
/// The canonical counterexample is the first disagreement in ascending
/// trace-code order, where bit (cycle * total_width + signal_offset + bit)
/// of the code holds that signal bit; ties in the same trace resolve to the
/// smallest cycle.
///
/// Throws Error(BudgetExceeded) when total_width * max_len > 26 and
/// Error(UnknownSignal) when a referenced signal is undeclared.
EquivalenceResult equivalent(const SvaAst& golden, const SvaAst& candidate,
                             const SignalTable& signals,
                             const EquivalenceOptions& options = {});

} // namespace nl2sva
