// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "nl2sva/gateway.hpp"
#include "nl2sva/retrieval.hpp"

namespace nl2sva {

/// Ablation modes. LLM is the bare baseline; StaticRAG / DynamicRAG add
/// global retrieval over a statically or dynamically chunked store; HRP0 and
/// HRP1 are the two hybrid paths alone; HR combines them; SOR adds the
/// rechecking loop to the bare baseline; RAGSVAG is hybrid retrieval plus
/// rechecking.
enum class Mode { LLM, StaticRAG, DynamicRAG, HRP0, HRP1, HR, SOR, RAGSVAG };

const char* mode_name(Mode mode);
Mode mode_from_name(const std::string& name); // throws Error(InvalidConfig)
std::vector<Mode> all_modes();

bool mode_uses_retrieval(Mode mode);
bool mode_uses_recheck(Mode mode);

struct GenerationJob {
  std::string record_id; // optional label for artifacts
  std::string spec;
  std::string design_context;
  Mode mode = Mode::LLM;
};

struct PipelineConfig {
  RetrievalOptions retrieval;
  int recheck_max_iters = 3;
  ChatParams chat;
};

struct PipelineDeps {
  Gateway* gateway = nullptr;
  Embedder* embedder = nullptr;      // required for retrieval modes
  const ChunkStore* store = nullptr; // required for retrieval modes
  const VectorIndex* index = nullptr;
};

struct RecheckIteration {
  std::string candidate_in;
  std::string response;
  std::string verdict; // "correct" or "revised"
  std::string candidate_out;
  bool reported_syntax_error = false;
};

struct RecheckOutcome {
  std::string final_sva;
  std::vector<RecheckIteration> iterations;
  // "confirmed", "unchanged", "max_iters", or "aborted"
  std::string termination;
  bool degraded = false;
  std::string degraded_reason;
};

struct GenerationResult {
  std::string record_id;
  Mode mode = Mode::LLM;
  std::string spec;
  bool used_retrieval = false;
  RetrievalContext retrieval;
  std::string retrieved_context;
  std::string initial_response;
  std::string initial_sva;
  bool rechecked = false;
  RecheckOutcome recheck;
  std::string final_sva;
  bool syntax_valid = false;
  std::string syntax_error;
  bool degraded = false;
  std::vector<std::string> warnings;
};

/// The operator-semantics block and syntax note shown to the model when
/// reviewing `candidate`; both are deterministic functions of the candidate.
void recheck_feedback(const std::string& candidate, std::string& explanations,
                      std::string& syntax_feedback);

/// Reviews `candidate` against `spec` for up to `max_iters` rounds. Every
/// round shows the operator semantics used by the candidate (or its syntax
/// error) and asks for a verdict; the loop stops on a CORRECT verdict, an
/// unchanged revision, or the iteration cap. Gateway failures abort the loop
/// and return the best candidate so far, tagged degraded.
RecheckOutcome run_recheck(const std::string& spec,
                           const std::string& candidate, Gateway& gateway,
                           int max_iters, const ChatParams& params);

/// One end-to-end translation. A final candidate that does not parse is
/// still returned, with syntax_valid false and the parse error recorded.
GenerationResult run_nl2sva(const GenerationJob& job, PipelineDeps& deps,
                            const PipelineConfig& config);

std::string generation_result_to_json(const GenerationResult& result);

} // namespace nl2sva
