// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nl2sva/dataset.hpp"
#include "nl2sva/equivalence.hpp"
#include "nl2sva/pipeline.hpp"

namespace nl2sva {

/// True when the candidate parses and references only declared signals.
bool check_syntax(const std::string& sva, const SignalTable& signals,
                  std::string* error = nullptr);

struct FunctionalResult {
  std::string method = "bounded_trace"; // or "external_fpv", "unknown"
  bool known = false;   // false: excluded from fm counts (e.g. budget)
  bool matched = false; // meaningful only when known
  std::string note;
};

/// Bounded-trace functional match against the golden assertion. A candidate
/// that fails syntax is a definitive mismatch; a trace budget overflow makes
/// the result unknown rather than a mismatch.
FunctionalResult check_functionality(const SvaAst& golden,
                                     const std::string& candidate,
                                     const SignalTable& signals,
                                     const EquivalenceOptions& options);

struct EvalOutcome {
  std::string record_id;
  Mode mode = Mode::LLM;
  std::string final_sva;
  bool sc = false;
  std::string sc_error;
  FunctionalResult fm;
  bool degraded = false;
};

struct ModeMetrics {
  Mode mode = Mode::LLM;
  std::size_t total = 0;
  std::size_t sc_count = 0;
  std::size_t fm_count = 0;
  std::size_t fm_unknown = 0; // unknown-method records among total
};

struct Improvement {
  Mode mode = Mode::LLM;
  bool sc_defined = false; // false when the baseline count is zero
  bool fm_defined = false;
  double sc_pct = 0.0; // relative change of sc_count vs the llm baseline
  double fm_pct = 0.0;
};

struct MetricsReport {
  std::vector<ModeMetrics> modes;
  bool has_baseline = false; // true when Mode::LLM was evaluated
  std::vector<Improvement> improvements; // one per non-baseline mode
};

struct EvalRunResult {
  std::vector<EvalOutcome> outcomes;
  MetricsReport report;
};

/// Runs every record through every requested mode and scores the finals.
EvalRunResult run_eval(const EvalDataset& dataset,
                       const std::vector<Mode>& modes, PipelineDeps& deps,
                       const PipelineConfig& config,
                       const EquivalenceOptions& equivalence);

MetricsReport build_metrics(const std::vector<EvalOutcome>& outcomes,
                            const std::vector<Mode>& modes);

/// Human-readable table; percentages carry two decimals.
std::string metrics_to_text(const MetricsReport& report);
std::string metrics_to_json(const MetricsReport& report);

/// Shown whenever results come from the bundled mock scenario: the reference
/// functional-match rates (58.42% baseline, 59.05% retrieval-augmented) were
/// measured with a commercial LLM and formal tool and cannot be reproduced
/// by this offline setup.
std::string non_reproduction_banner();

struct FpvExport {
  std::string checker_path;
  std::string script_path;
  std::string design_path;
};

/// Writes a self-contained checker (<record>_check.sv with the golden and
/// candidate bodies combined under `iff`, golden first), a copy of the
/// design, and a template script for an external FPV tool. Deterministic:
/// identical inputs give byte-identical files. Throws Error(ClockMismatch)
/// when the clocking events differ.
FpvExport export_fpv(const DatasetDesign& design, const DatasetRecord& record,
                     const std::string& candidate_sva,
                     const std::string& out_dir);

} // namespace nl2sva
