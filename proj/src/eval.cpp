// SPDX-License-Identifier: Apache-2.0
#include "nl2sva/eval.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "nl2sva/parser.hpp"

namespace fs = std::filesystem;

namespace nl2sva {

namespace {

std::string pct(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

std::string signed_pct(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%+.2f", value);
  return buf;
}

} // namespace

bool check_syntax(const std::string& sva, const SignalTable& signals,
                  std::string* error) {
  try {
    SvaAst ast = parse_assertion(sva);
    check_against_signal_table(ast, signals);
    return true;
  } catch (const Error& e) {
    if (error) *error = e.what();
    return false;
  }
}

FunctionalResult check_functionality(const SvaAst& golden,
                                     const std::string& candidate,
                                     const SignalTable& signals,
                                     const EquivalenceOptions& options) {
  FunctionalResult result;
  SvaAst candidate_ast;
  try {
    candidate_ast = parse_assertion(candidate);
    check_against_signal_table(candidate_ast, signals);
  } catch (const Error& e) {
    result.known = true;
    result.matched = false;
    result.note = std::string("candidate is not checkable: ") + e.what();
    return result;
  }

  try {
    EquivalenceResult eq = equivalent(golden, candidate_ast, signals, options);
    result.known = true;
    switch (eq.kind) {
    case EquivalenceResult::Kind::Equivalent:
      result.matched = true;
      result.note = "equivalent over " + std::to_string(eq.traces_checked) +
                    " bounded traces";
      break;
    case EquivalenceResult::Kind::Inequivalent:
      result.matched = false;
      result.note = "counterexample trace of length " +
                    std::to_string(eq.counterexample->length) +
                    " disagrees at cycle " + std::to_string(eq.cex_cycle);
      break;
    case EquivalenceResult::Kind::ClockMismatch:
      result.matched = false;
      result.note = "clocking events differ: " + eq.note;
      break;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BudgetExceeded) {
      result.method = "unknown";
      result.known = false;
      result.matched = false;
      result.note = e.what();
    } else {
      result.known = true;
      result.matched = false;
      result.note = e.what();
    }
  }
  return result;
}

EvalRunResult run_eval(const EvalDataset& dataset,
                       const std::vector<Mode>& modes, PipelineDeps& deps,
                       const PipelineConfig& config,
                       const EquivalenceOptions& equivalence_options) {
  EvalRunResult run;
  for (Mode mode : modes) {
    for (const auto& record : dataset.records) {
      const DatasetDesign* design = dataset.design(record.design_id);
      GenerationJob job;
      job.record_id = record.record_id;
      job.spec = record.property_text;
      job.design_context = design_context_text(*design);
      job.mode = mode;
      GenerationResult gen = run_nl2sva(job, deps, config);

      EvalOutcome outcome;
      outcome.record_id = record.record_id;
      outcome.mode = mode;
      outcome.final_sva = gen.final_sva;
      outcome.degraded = gen.degraded;
      outcome.sc = check_syntax(gen.final_sva, design->signals,
                                &outcome.sc_error);
      SvaAst golden = parse_assertion(record.golden_sva);
      outcome.fm = check_functionality(golden, gen.final_sva, design->signals,
                                       equivalence_options);
      run.outcomes.push_back(std::move(outcome));
    }
  }
  run.report = build_metrics(run.outcomes, modes);
  return run;
}

MetricsReport build_metrics(const std::vector<EvalOutcome>& outcomes,
                            const std::vector<Mode>& modes) {
  MetricsReport report;
  for (Mode mode : modes) {
    ModeMetrics m;
    m.mode = mode;
    for (const auto& o : outcomes) {
      if (o.mode != mode) continue;
      m.total++;
      if (o.sc) m.sc_count++;
      if (o.fm.known && o.fm.matched) m.fm_count++;
      if (!o.fm.known) m.fm_unknown++;
    }
    report.modes.push_back(m);
  }

  const ModeMetrics* baseline = nullptr;
  for (const auto& m : report.modes)
    if (m.mode == Mode::LLM) baseline = &m;
  report.has_baseline = baseline != nullptr;
  if (baseline) {
    for (const auto& m : report.modes) {
      if (m.mode == Mode::LLM) continue;
      Improvement imp;
      imp.mode = m.mode;
      if (baseline->sc_count > 0) {
        imp.sc_defined = true;
        imp.sc_pct = 100.0 *
                     (static_cast<double>(m.sc_count) - baseline->sc_count) /
                     static_cast<double>(baseline->sc_count);
      }
      if (baseline->fm_count > 0) {
        imp.fm_defined = true;
        imp.fm_pct = 100.0 *
                     (static_cast<double>(m.fm_count) - baseline->fm_count) /
                     static_cast<double>(baseline->fm_count);
      }
      report.improvements.push_back(imp);
    }
  }
  return report;
}

std::string metrics_to_text(const MetricsReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %6s %6s %8s %6s %8s %10s\n", "mode",
                "total", "sc", "sc%", "fm", "fm%", "fm_unknown");
  out += line;
  for (const auto& m : report.modes) {
    double sc_pct = m.total ? 100.0 * static_cast<double>(m.sc_count) / m.total : 0.0;
    double fm_pct = m.total ? 100.0 * static_cast<double>(m.fm_count) / m.total : 0.0;
    std::snprintf(line, sizeof(line), "%-12s %6zu %6zu %8s %6zu %8s %10zu\n",
                  mode_name(m.mode), m.total, m.sc_count, pct(sc_pct).c_str(),
                  m.fm_count, pct(fm_pct).c_str(), m.fm_unknown);
    out += line;
  }
  if (report.has_baseline && !report.improvements.empty()) {
    out += "\nimprovement vs llm baseline:\n";
    for (const auto& imp : report.improvements) {
      out += "  ";
      out += mode_name(imp.mode);
      out += ": sc ";
      out += imp.sc_defined ? signed_pct(imp.sc_pct) + "%" : "n/a";
      out += ", fm ";
      out += imp.fm_defined ? signed_pct(imp.fm_pct) + "%" : "n/a";
      out += "\n";
    }
  }
  return out;
}

std::string metrics_to_json(const MetricsReport& report) {
  nlohmann::json j;
  j["modes"] = nlohmann::json::array();
  for (const auto& m : report.modes) {
    double sc_pct = m.total ? 100.0 * static_cast<double>(m.sc_count) / m.total : 0.0;
    double fm_pct = m.total ? 100.0 * static_cast<double>(m.fm_count) / m.total : 0.0;
    j["modes"].push_back({{"mode", mode_name(m.mode)},
                          {"total", m.total},
                          {"sc_count", m.sc_count},
                          {"sc_pct", pct(sc_pct)},
                          {"fm_count", m.fm_count},
                          {"fm_pct", pct(fm_pct)},
                          {"fm_unknown", m.fm_unknown}});
  }
  j["improvements"] = nlohmann::json::array();
  for (const auto& imp : report.improvements) {
    nlohmann::json e;
    e["mode"] = mode_name(imp.mode);
    e["sc_improvement_pct"] =
        imp.sc_defined ? nlohmann::json(pct(imp.sc_pct)) : nlohmann::json();
    e["fm_improvement_pct"] =
        imp.fm_defined ? nlohmann::json(pct(imp.fm_pct)) : nlohmann::json();
    j["improvements"].push_back(std::move(e));
  }
  return j.dump(2);
}

std::string non_reproduction_banner() {
  return "NOTE: these results come from the bundled offline scenario, not a "
         "live model.\n"
         "The reference functional-match rates of 58.42% (plain generation) "
         "and 59.05%\n"
         "(retrieval-augmented generation) were measured with a commercial "
         "LLM and a\n"
         "commercial formal verification tool on a proprietary benchmark. "
         "Neither is\n"
         "available in this environment, so those numbers are out of reach "
         "here; the\n"
         "figures in this report only exercise the pipeline mechanics end "
         "to end.\n";
}

FpvExport export_fpv(const DatasetDesign& design, const DatasetRecord& record,
                     const std::string& candidate_sva,
                     const std::string& out_dir) {
  SvaAst golden = parse_assertion(record.golden_sva);
  SvaAst candidate;
  try {
    candidate = parse_assertion(candidate_sva);
  } catch (const Error& e) {
    throw Error(ErrorCode::Data,
                std::string("candidate assertion does not parse: ") + e.what());
  }
  if (golden.clocking.edge != candidate.clocking.edge ||
      golden.clocking.clock_signal != candidate.clocking.clock_signal)
    throw Error(ErrorCode::ClockMismatch,
                "golden and candidate assertions use different clocking "
                "events; the combined checker would be meaningless");
  check_against_signal_table(candidate, design.signals);

  fs::create_directories(out_dir);
  FpvExport paths;
  std::string module_name = record.record_id + "_check";

  std::string edge = golden.clocking.edge == ClockingEvent::Edge::Posedge
                         ? "posedge"
                         : "negedge";
  std::string sv;
  sv += "// Equivalence checker for record " + record.record_id + " (design " +
        design.design_id + ").\n";
  sv += "// The golden property appears first; the candidate must agree with "
        "it in\n// every attempt, expressed with iff.\n";
  sv += "module " + module_name + " (\n";
  const auto& entries = design.signals.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& sig = entries[i];
    sv += "  input logic ";
    if (sig.width > 1)
      sv += "[" + std::to_string(sig.width - 1) + ":0] ";
    sv += sig.name;
    sv += (i + 1 < entries.size()) ? ",\n" : "\n";
  }
  sv += ");\n\n";
  bool disables_match =
      static_cast<bool>(golden.disable_condition) ==
          static_cast<bool>(candidate.disable_condition) &&
      (!golden.disable_condition ||
       structurally_equal(*golden.disable_condition,
                          *candidate.disable_condition));
  if (!disables_match)
    sv += "  // note: the candidate declares a different disable condition (" +
          (candidate.disable_condition
               ? render_expr(*candidate.disable_condition)
               : std::string("none")) +
          "); the golden one is used below.\n";
  sv += "  golden_vs_candidate: assert property (@(" + edge + " " +
        golden.clocking.clock_signal + ") ";
  if (golden.disable_condition)
    sv += "disable iff (" + render_expr(*golden.disable_condition) + ") ";
  sv += "(" + render_expr(*golden.body) + ") iff (" +
        render_expr(*candidate.body) + "));\n";
  sv += "\nendmodule\n";

  paths.checker_path = (fs::path(out_dir) / (module_name + ".sv")).string();
  {
    std::ofstream out(paths.checker_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + paths.checker_path);
    out << sv;
  }

  paths.design_path = (fs::path(out_dir) / "design.v").string();
  {
    std::ofstream out(paths.design_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + paths.design_path);
    out << design.verilog;
  }

  std::string script;
  script += "# Template script for an external FPV tool, record " +
            record.record_id + ".\n";
  script += "# Adjust the commands to your tool's dialect before running.\n";
  script += "analyze -sv12 design.v " + module_name + ".sv\n";
  script += "elaborate -top " + module_name + "\n";
  script += "clock " + golden.clocking.clock_signal + "\n";
  if (golden.disable_condition)
    script += "reset -expression (" + render_expr(*golden.disable_condition) +
              ")\n";
  else
    script += "reset -none\n";
  script += "prove -all\n";
  script += "report -summary\n";

  paths.script_path = (fs::path(out_dir) / "run_fpv.tcl").string();
  {
    std::ofstream out(paths.script_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + paths.script_path);
    out << script;
  }
  return paths;
}

} // namespace nl2sva
