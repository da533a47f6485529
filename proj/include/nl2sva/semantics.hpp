// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nl2sva/sva.hpp"
#include "nl2sva/trace.hpp"

namespace nl2sva {

struct EvalOptions {
  /// Weak end-of-trace semantics by default: obligations that run past the
  /// last cycle count as holding. Strict mode flips them to failing.
  bool strict_end_of_trace = false;
};

enum class AttemptStatus { Holds, Fails, Vacuous, Disabled };

struct Verdict {
  enum class Status { Holds, Fails, VacuousHolds };
  Status status = Status::VacuousHolds;
  std::vector<std::pair<std::size_t, AttemptStatus>> per_attempt;

  bool failed() const { return status == Status::Fails; }
};

const char* verdict_status_name(Verdict::Status status);
const char* attempt_status_name(AttemptStatus status);

/// Samples a value expression at one cycle. Cycles before 0 read as 0, which
/// is also the default prior value seen by the sampled-value functions.
std::uint64_t eval_value(const Expr& expr, const Trace& trace,
                         std::size_t cycle);

/// Evaluates one attempt of a property expression starting at `cycle`.
bool eval_property_at(const Expr& body, const Trace& trace, std::size_t cycle,
                      const EvalOptions& options = {});

/// Runs one evaluation attempt per cycle, honoring the disable condition: an
/// attempt is discarded as Disabled when the condition samples true at any
/// cycle the attempt examined. Throws Error(UnknownSignal) when the body or
/// disable condition references a signal missing from the trace.
Verdict check_assertion(const SvaAst& ast, const Trace& trace,
                        const EvalOptions& options = {});

} // namespace nl2sva
