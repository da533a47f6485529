// SPDX-License-Identifier: Apache-2.0

#include "nl2sva/semantics.hpp"

#include "compiled.hpp"

namespace nl2sva {

namespace {

using detail::CProp;
using detail::CValue;
using detail::PropOutcome;
using detail::TraceView;

class TraceBinder : public detail::ColumnBinder {
public:
  explicit TraceBinder(const Trace& t) : trace_(t) {}
  int column(const std::string& name) const override {
    return trace_.column_of(name);
  }

private:
  const Trace& trace_;
};

/// Contiguous copy of trace values in the layout TraceView expects.
struct FlatTrace {
  std::vector<std::uint64_t> storage;
  TraceView view;

  explicit FlatTrace(const Trace& t) {
    std::size_t n = t.signals.size();
    storage.assign(n * t.length, 0);
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t c = 0; c < t.length; ++c)
        storage[s * t.length + c] = t.values[s][c];
    view.vals = storage.data();
    view.length = static_cast<int>(t.length);
    view.stride = t.length;
  }
};

} // namespace

const char* verdict_status_name(Verdict::Status status) {
  switch (status) {
  case Verdict::Status::Holds:
    return "holds";
  case Verdict::Status::Fails:
    return "fails";
  case Verdict::Status::VacuousHolds:
    return "vacuous";
  }
  return "unknown";
}

const char* attempt_status_name(AttemptStatus status) {
  switch (status) {
  case AttemptStatus::Holds:
    return "holds";
  case AttemptStatus::Fails:
    return "fails";
  case AttemptStatus::Vacuous:
    return "vacuous";
  case AttemptStatus::Disabled:
    return "disabled";
  }
  return "unknown";
}

std::uint64_t eval_value(const Expr& expr, const Trace& trace,
                         std::size_t cycle) {
  if (cycle >= trace.length)
    throw Error(ErrorCode::Data, "cycle index past end of trace");
  TraceBinder binder(trace);
  CValue v = detail::compile_value(expr, binder);
  FlatTrace flat(trace);
  return v.eval(flat.view, static_cast<int>(cycle));
}

bool eval_property_at(const Expr& body, const Trace& trace, std::size_t cycle,
                      const EvalOptions& options) {
  if (cycle >= trace.length)
    throw Error(ErrorCode::Data, "cycle index past end of trace");
  TraceBinder binder(trace);
  CProp p = detail::compile_property(body, binder);
  FlatTrace flat(trace);
  return detail::eval_prop(p, flat.view, static_cast<int>(cycle),
                           options.strict_end_of_trace)
      .holds;
}

Verdict check_assertion(const SvaAst& ast, const Trace& trace,
                        const EvalOptions& options) {
  TraceBinder binder(trace);
  CProp body = detail::compile_property(*ast.body, binder);
  std::unique_ptr<CValue> disable;
  if (ast.disable_condition)
    disable = std::make_unique<CValue>(
        detail::compile_value(*ast.disable_condition, binder));
  FlatTrace flat(trace);

  Verdict verdict;
  bool any_fail = false;
  bool any_hold = false;
  for (int t = 0; t < flat.view.length; ++t) {
    PropOutcome out =
        detail::eval_prop(body, flat.view, t, options.strict_end_of_trace);
    AttemptStatus status;
    bool disabled = false;
    if (disable) {
      for (int c = t; c <= out.touched && !disabled; ++c)
        disabled = disable->eval(flat.view, c) != 0;
    }
    if (disabled) {
      status = AttemptStatus::Disabled;
    } else if (!out.holds) {
      status = AttemptStatus::Fails;
      any_fail = true;
    } else if (out.root_matched) {
      status = AttemptStatus::Holds;
      any_hold = true;
    } else {
      status = AttemptStatus::Vacuous;
    }
    verdict.per_attempt.emplace_back(static_cast<std::size_t>(t), status);
  }
  verdict.status = any_fail   ? Verdict::Status::Fails
                   : any_hold ? Verdict::Status::Holds
                              : Verdict::Status::VacuousHolds;
  return verdict;
}

} // namespace nl2sva
