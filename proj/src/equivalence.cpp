// SPDX-License-Identifier: Apache-2.0

#include "nl2sva/equivalence.hpp"

#include <algorithm>
#include <thread>
#include <unordered_map>

#include "compiled.hpp"

namespace nl2sva {

namespace {

using detail::CProp;
using detail::CValue;
using detail::TraceView;

struct EnumSignal {
  std::string name;
  int width = 1;
  int bit_offset = 0; // within one cycle's bit block
};

class EnumBinder : public detail::ColumnBinder {
public:
  explicit EnumBinder(const std::vector<EnumSignal>& sigs) {
    for (std::size_t i = 0; i < sigs.size(); ++i)
      index_[sigs[i].name] = static_cast<int>(i);
  }
  int column(const std::string& name) const override {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
  }

private:
  std::unordered_map<std::string, int> index_;
};

/// Does the attempt starting at `t` fail? Vacuous and disabled attempts
/// count as passing, mirroring how an FPV tool reports only failures.
bool attempt_fails(const CProp& body, const CValue* disable,
                   const TraceView& view, int t) {
  detail::PropOutcome out = detail::eval_prop(body, view, t, false);
  if (out.holds) return false;
  if (disable) {
    for (int c = t; c <= out.touched; ++c)
      if (disable->eval(view, c)) return false;
  }
  return true;
}

void decode_trace(std::uint64_t code, const std::vector<EnumSignal>& sigs,
                  int total_width, int len, std::uint64_t* vals) {
  for (std::size_t s = 0; s < sigs.size(); ++s) {
    for (int c = 0; c < len; ++c) {
      int pos = c * total_width + sigs[s].bit_offset;
      std::uint64_t mask = sigs[s].width >= 64
                               ? ~std::uint64_t{0}
                               : ((std::uint64_t{1} << sigs[s].width) - 1);
      vals[s * static_cast<std::size_t>(len) + c] = (code >> pos) & mask;
    }
  }
}

struct Disagreement {
  std::uint64_t code = 0;
  int cycle = 0;
  int len = 0;
};

} // namespace

EquivalenceResult equivalent(const SvaAst& golden, const SvaAst& candidate,
                             const SignalTable& signals,
                             const EquivalenceOptions& options) {
  if (options.max_len < 1)
    throw Error(ErrorCode::InvalidConfig, "max_len must be >= 1");

  EquivalenceResult result;
  if (golden.clocking.edge != candidate.clocking.edge ||
      golden.clocking.clock_signal != candidate.clocking.clock_signal) {
    result.kind = EquivalenceResult::Kind::ClockMismatch;
    result.note = "clocking events differ (@(" +
                  std::string(golden.clocking.edge == ClockingEvent::Edge::Posedge
                                  ? "posedge "
                                  : "negedge ") +
                  golden.clocking.clock_signal + ") vs @(" +
                  (candidate.clocking.edge == ClockingEvent::Edge::Posedge
                       ? "posedge "
                       : "negedge ") +
                  candidate.clocking.clock_signal + "))";
    return result;
  }

  bool both_absent = !golden.disable_condition && !candidate.disable_condition;
  bool both_equal = golden.disable_condition && candidate.disable_condition &&
                    structurally_equal(*golden.disable_condition,
                                       *candidate.disable_condition);
  bool bodies_only = both_absent || both_equal;
  result.compared_bodies_only = bodies_only;

  // The enumeration alphabet: signals referenced by either body, in
  // first-occurrence order, plus disable signals when disables differ.
  std::vector<std::string> names = referenced_signals(*golden.body);
  auto add_names = [&names](const std::vector<std::string>& more) {
    for (const std::string& n : more)
      if (std::find(names.begin(), names.end(), n) == names.end())
        names.push_back(n);
  };
  add_names(referenced_signals(*candidate.body));
  if (!bodies_only) {
    if (golden.disable_condition)
      add_names(referenced_signals(*golden.disable_condition));
    if (candidate.disable_condition)
      add_names(referenced_signals(*candidate.disable_condition));
  }

  std::vector<EnumSignal> sigs;
  int total_width = 0;
  for (const std::string& n : names) {
    const SignalInfo* info = signals.find(n);
    if (!info)
      throw Error(ErrorCode::UnknownSignal, "undeclared signal '" + n + "'");
    sigs.push_back({n, info->width, total_width});
    total_width += info->width;
  }

  std::size_t budget = static_cast<std::size_t>(total_width) * options.max_len;
  if (budget > 26)
    throw Error(ErrorCode::BudgetExceeded,
                "exhaustive bound " + std::to_string(budget) +
                    " bits exceeds the 26-bit budget; shrink max_len or the "
                    "signal set");

  // Constant bodies (no referenced signals) still need one evaluation pass.
  EnumBinder binder(sigs);
  CProp gold_body = detail::compile_property(*golden.body, binder);
  CProp cand_body = detail::compile_property(*candidate.body, binder);
  std::unique_ptr<CValue> gold_disable, cand_disable;
  if (!bodies_only) {
    if (golden.disable_condition)
      gold_disable = std::make_unique<CValue>(
          detail::compile_value(*golden.disable_condition, binder));
    if (candidate.disable_condition)
      cand_disable = std::make_unique<CValue>(
          detail::compile_value(*candidate.disable_condition, binder));
  }

  unsigned workers = std::max(1u, options.workers);
  std::uint64_t traces_checked = 0;

  for (std::size_t len = 1; len <= options.max_len; ++len) {
    int bits = total_width * static_cast<int>(len);
    std::uint64_t count = std::uint64_t{1} << bits;

    auto scan = [&](std::uint64_t begin, std::uint64_t end,
                    std::optional<Disagreement>& found,
                    std::uint64_t& scanned) {
      std::vector<std::uint64_t> vals(std::max<std::size_t>(1, sigs.size()) *
                                      len);
      TraceView view;
      view.vals = vals.data();
      view.length = static_cast<int>(len);
      view.stride = len;
      for (std::uint64_t code = begin; code < end; ++code) {
        decode_trace(code, sigs, total_width, static_cast<int>(len),
                     vals.data());
        ++scanned;
        for (int t = 0; t < static_cast<int>(len); ++t) {
          bool gf = attempt_fails(gold_body, gold_disable.get(), view, t);
          bool cf = attempt_fails(cand_body, cand_disable.get(), view, t);
          if (gf != cf) {
            found = Disagreement{code, t, static_cast<int>(len)};
            return;
          }
        }
      }
    };

    std::optional<Disagreement> found;
    if (workers == 1 || count < 1024) {
      std::uint64_t scanned = 0;
      scan(0, count, found, scanned);
      traces_checked += scanned;
    } else {
      std::vector<std::optional<Disagreement>> founds(workers);
      std::vector<std::uint64_t> scanneds(workers, 0);
      std::vector<std::thread> threads;
      std::uint64_t chunk = count / workers + 1;
      for (unsigned w = 0; w < workers; ++w) {
        std::uint64_t begin = w * chunk;
        std::uint64_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back([&, w, begin, end] {
          scan(begin, end, founds[w], scanneds[w]);
        });
      }
      for (std::thread& th : threads) th.join();
      for (unsigned w = 0; w < workers; ++w) {
        traces_checked += scanneds[w];
        if (founds[w] && (!found || founds[w]->code < found->code))
          found = founds[w];
      }
    }

    if (found) {
      std::vector<std::uint64_t> vals(std::max<std::size_t>(1, sigs.size()) *
                                      len);
      decode_trace(found->code, sigs, total_width, found->len, vals.data());
      Trace cex;
      for (const EnumSignal& s : sigs) cex.signals.push_back({s.name, s.width});
      if (sigs.empty()) cex.signals.push_back({"_unused", 1});
      cex.length = len;
      cex.values.assign(cex.signals.size(),
                        std::vector<std::uint64_t>(len, 0));
      for (std::size_t s = 0; s < sigs.size(); ++s)
        for (std::size_t c = 0; c < len; ++c)
          cex.values[s][c] = vals[s * len + c];
      result.kind = EquivalenceResult::Kind::Inequivalent;
      result.counterexample = std::move(cex);
      result.cex_cycle = static_cast<std::size_t>(found->cycle);
      result.traces_checked = traces_checked;
      return result;
    }
  }

  result.kind = EquivalenceResult::Kind::Equivalent;
  result.traces_checked = traces_checked;
  return result;
}

} // namespace nl2sva
