// SPDX-License-Identifier: Apache-2.0
#include "nl2sva/pipeline.hpp"

#include <array>

#include "json.hpp"

#include "nl2sva/parser.hpp"

namespace nl2sva {

namespace {

struct ModeRow {
  Mode mode;
  const char* name;
  bool retrieval_global;
  bool retrieval_operator;
  bool recheck;
};

constexpr std::array<ModeRow, 8> kModes = {{
    {Mode::LLM, "llm", false, false, false},
    {Mode::StaticRAG, "static-rag", true, false, false},
    {Mode::DynamicRAG, "dynamic-rag", true, false, false},
    {Mode::HRP0, "hr-p0", true, false, false},
    {Mode::HRP1, "hr-p1", false, true, false},
    {Mode::HR, "hr", true, true, false},
    {Mode::SOR, "sor", false, false, true},
    {Mode::RAGSVAG, "ragsvag", true, true, true},
}};

const ModeRow& row_for(Mode mode) {
  for (const auto& row : kModes)
    if (row.mode == mode) return row;
  throw Error(ErrorCode::InvalidConfig, "unknown mode");
}

} // namespace

void recheck_feedback(const std::string& candidate, std::string& explanations,
                      std::string& syntax_feedback) {
  explanations.clear();
  syntax_feedback.clear();
  try {
    SvaAst ast = parse_assertion(candidate);
    auto ops = extract_operators(ast);
    if (ops.empty()) {
      explanations = "(the candidate uses no sequence or property operators)";
      return;
    }
    for (OpKind op : ops) {
      explanations += operator_surface_token(op);
      explanations += ": ";
      explanations += operator_explanation(op);
      explanations += "\n";
    }
    explanations.pop_back();
  } catch (const Error& e) {
    explanations = "(the candidate does not parse, so no operator semantics are shown)";
    syntax_feedback =
        std::string("Note: the candidate fails to parse: ") + e.what();
  }
}

const char* mode_name(Mode mode) { return row_for(mode).name; }

Mode mode_from_name(const std::string& name) {
  for (const auto& row : kModes)
    if (name == row.name) return row.mode;
  std::string known;
  for (const auto& row : kModes) {
    if (!known.empty()) known += ", ";
    known += row.name;
  }
  throw Error(ErrorCode::InvalidConfig,
              "unknown mode '" + name + "' (expected one of: " + known + ")");
}

std::vector<Mode> all_modes() {
  std::vector<Mode> out;
  for (const auto& row : kModes) out.push_back(row.mode);
  return out;
}

bool mode_uses_retrieval(Mode mode) {
  const ModeRow& row = row_for(mode);
  return row.retrieval_global || row.retrieval_operator;
}

bool mode_uses_recheck(Mode mode) { return row_for(mode).recheck; }

RecheckOutcome run_recheck(const std::string& spec,
                           const std::string& candidate, Gateway& gateway,
                           int max_iters, const ChatParams& params) {
  RecheckOutcome out;
  out.final_sva = candidate;
  std::string current = candidate;

  for (int iter = 0; iter < max_iters; ++iter) {
    std::string explanations, syntax_feedback;
    recheck_feedback(current, explanations, syntax_feedback);

    PromptRender prompt;
    ChatExchange ex;
    try {
      prompt = render_prompt("sva_rechecking",
                             {{"spec", spec},
                              {"candidate", current},
                              {"explanations", explanations},
                              {"syntax_feedback", syntax_feedback}});
      ex = gateway.complete(prompt, params);
    } catch (const Error& e) {
      out.final_sva = current;
      out.termination = "aborted";
      out.degraded = true;
      out.degraded_reason = e.what();
      return out;
    }

    RecheckIteration it;
    it.candidate_in = current;
    it.response = ex.response;
    it.reported_syntax_error = !syntax_feedback.empty();

    if (ex.response.find("VERDICT: CORRECT") != std::string::npos) {
      it.verdict = "correct";
      it.candidate_out = current;
      out.iterations.push_back(std::move(it));
      out.final_sva = current;
      out.termination = "confirmed";
      return out;
    }
    it.verdict = "revised";

    std::string revised;
    try {
      revised = extract_sva_from_response(ex.response);
    } catch (const Error& e) {
      it.candidate_out = current;
      out.iterations.push_back(std::move(it));
      out.final_sva = current;
      out.termination = "aborted";
      out.degraded = true;
      out.degraded_reason =
          std::string("revision contained no assertion: ") + e.what();
      return out;
    }

    it.candidate_out = revised;
    out.iterations.push_back(std::move(it));
    if (revised == current) {
      out.final_sva = current;
      out.termination = "unchanged";
      return out;
    }
    current = revised;
  }
  out.final_sva = current;
  out.termination = "max_iters";
  return out;
}

GenerationResult run_nl2sva(const GenerationJob& job, PipelineDeps& deps,
                            const PipelineConfig& config) {
  if (!deps.gateway)
    throw Error(ErrorCode::InvalidConfig, "pipeline requires a gateway");
  const ModeRow& row = row_for(job.mode);

  GenerationResult result;
  result.record_id = job.record_id;
  result.mode = job.mode;
  result.spec = job.spec;

  if (row.retrieval_global || row.retrieval_operator) {
    if (!deps.embedder || !deps.store || !deps.index)
      throw Error(ErrorCode::InvalidConfig,
                  std::string("mode ") + row.name +
                      " needs an embedder, chunk store, and index");
    result.used_retrieval = true;
    if (row.retrieval_global && row.retrieval_operator) {
      result.retrieval = hybrid_retrieve(*deps.store, *deps.index,
                                         *deps.embedder, *deps.gateway,
                                         job.spec, config.retrieval);
    } else if (row.retrieval_global) {
      try {
        result.retrieval.global_chunks = retrieve_global(
            *deps.index, *deps.embedder, job.spec, config.retrieval.k_global);
      } catch (const Error& e) {
        result.retrieval.global_degraded = true;
        result.retrieval.warnings.push_back(
            std::string("global retrieval failed: ") + e.what());
      }
    } else {
      try {
        result.retrieval.operator_hits = retrieve_operator_guided(
            *deps.store, *deps.index, *deps.embedder, *deps.gateway, job.spec,
            config.retrieval, &result.retrieval.keyword_map,
            &result.retrieval.warnings);
      } catch (const Error& e) {
        result.retrieval.operator_degraded = true;
        result.retrieval.warnings.push_back(
            std::string("operator-guided retrieval failed: ") + e.what());
      }
    }
    result.retrieved_context =
        render_retrieved_context(*deps.store, result.retrieval);
    for (const auto& w : result.retrieval.warnings)
      result.warnings.push_back(w);
  }

  auto prompt = render_prompt("initial_generation",
                              {{"spec", job.spec},
                               {"design_context", job.design_context},
                               {"retrieved_context", result.retrieved_context}});
  ChatExchange ex = deps.gateway->complete(prompt, config.chat);
  result.initial_response = ex.response;

  try {
    result.initial_sva = extract_sva_from_response(ex.response);
  } catch (const Error& e) {
    result.initial_sva.clear();
    result.degraded = true;
    result.warnings.push_back(
        std::string("initial response contained no assertion: ") + e.what());
  }

  result.final_sva = result.initial_sva;
  if (row.recheck && !result.initial_sva.empty()) {
    result.rechecked = true;
    result.recheck = run_recheck(job.spec, result.initial_sva, *deps.gateway,
                                 config.recheck_max_iters, config.chat);
    result.final_sva = result.recheck.final_sva;
    if (result.recheck.degraded) {
      result.degraded = true;
      result.warnings.push_back("recheck aborted: " +
                                result.recheck.degraded_reason);
    }
  }

  if (result.final_sva.empty()) {
    result.syntax_valid = false;
    result.syntax_error = "no assertion was produced";
  } else {
    try {
      parse_assertion(result.final_sva);
      result.syntax_valid = true;
    } catch (const Error& e) {
      result.syntax_valid = false;
      result.syntax_error = e.what();
    }
  }
  return result;
}

std::string generation_result_to_json(const GenerationResult& result) {
  nlohmann::json j;
  j["record_id"] = result.record_id;
  j["mode"] = mode_name(result.mode);
  j["spec"] = result.spec;
  j["used_retrieval"] = result.used_retrieval;
  if (result.used_retrieval) {
    nlohmann::json r;
    r["global_chunks"] = nlohmann::json::array();
    for (const auto& sc : result.retrieval.global_chunks)
      r["global_chunks"].push_back({{"chunk_id", sc.chunk_id},
                                    {"score", sc.score}});
    r["keyword_map"] = nlohmann::json::array();
    for (const auto& [phrase, op] : result.retrieval.keyword_map)
      r["keyword_map"].push_back({{"keyword", phrase}, {"operator", op}});
    r["operator_hits"] = nlohmann::json::array();
    for (const auto& hit : result.retrieval.operator_hits) {
      nlohmann::json h;
      h["operator"] = operator_surface_token(hit.op);
      h["keyword"] = hit.keyword;
      h["chunks"] = nlohmann::json::array();
      for (const auto& sc : hit.chunks)
        h["chunks"].push_back({{"chunk_id", sc.chunk_id}, {"score", sc.score}});
      r["operator_hits"].push_back(std::move(h));
    }
    r["global_degraded"] = result.retrieval.global_degraded;
    r["operator_degraded"] = result.retrieval.operator_degraded;
    j["retrieval"] = std::move(r);
    j["retrieved_context"] = result.retrieved_context;
  }
  j["initial_sva"] = result.initial_sva;
  if (result.rechecked) {
    nlohmann::json rc;
    rc["termination"] = result.recheck.termination;
    rc["iterations"] = nlohmann::json::array();
    for (const auto& it : result.recheck.iterations)
      rc["iterations"].push_back({{"candidate_in", it.candidate_in},
                                  {"verdict", it.verdict},
                                  {"candidate_out", it.candidate_out},
                                  {"reported_syntax_error",
                                   it.reported_syntax_error}});
    j["recheck"] = std::move(rc);
  }
  j["final_sva"] = result.final_sva;
  j["syntax_valid"] = result.syntax_valid;
  if (!result.syntax_valid) j["syntax_error"] = result.syntax_error;
  j["degraded"] = result.degraded;
  j["warnings"] = result.warnings;
  return j.dump(2);
}

} // namespace nl2sva
