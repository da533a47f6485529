// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nl2sva/chunk_store.hpp"
#include "nl2sva/embedding.hpp"
#include "nl2sva/gateway.hpp"
#include "nl2sva/sva.hpp"

namespace nl2sva {

struct ScoredChunk {
  std::string chunk_id;
  float score = 0.0f;
};

struct VectorIndex {
  std::size_t dim = 0;
  std::vector<std::pair<std::string, std::vector<float>>> entries;
};

/// Embeds every chunk's retrieval text, reusing stored sidecar vectors when
/// their dimension matches the embedder's.
VectorIndex build_index(const ChunkStore& store, Embedder& embedder);

/// Top-k by cosine similarity (vectors are unit norm, so cosine == dot),
/// ties broken by ascending chunk_id.
std::vector<ScoredChunk> query_index(const VectorIndex& index,
                                     const std::vector<float>& query,
                                     std::size_t k);

struct RetrievalOptions {
  std::size_t k_global = 3;
  std::size_t k_per_op = 2;
  std::string rank_by = "spec"; // or "keyword"
};

struct OperatorHit {
  OpKind op = OpKind::Delay;
  std::string keyword; // phrase that elicited this operator
  std::vector<ScoredChunk> chunks;
};

struct RetrievalContext {
  std::vector<ScoredChunk> global_chunks;
  std::vector<std::pair<std::string, std::string>> keyword_map; // phrase -> op name
  std::vector<OperatorHit> operator_hits;
  std::vector<std::string> warnings;
  bool global_degraded = false;
  bool operator_degraded = false;
};

/// Whole-description path: embed the description, take the top k chunks.
std::vector<ScoredChunk> retrieve_global(const VectorIndex& index,
                                         Embedder& embedder,
                                         const std::string& spec,
                                         std::size_t k);

/// Operator-guided path: keyword extraction prompt, operator mapping prompt,
/// then a lexical filter on each operator's surface token followed by cosine
/// ranking. Keywords mapped to anything outside the ten supported operators
/// are dropped with a warning rather than failing the query.
std::vector<OperatorHit> retrieve_operator_guided(
    const ChunkStore& store, const VectorIndex& index, Embedder& embedder,
    Gateway& gateway, const std::string& spec, const RetrievalOptions& options,
    std::vector<std::pair<std::string, std::string>>* keyword_map,
    std::vector<std::string>* warnings);

/// Runs both paths. If exactly one fails, its half is returned empty with a
/// degraded flag and warning; if both fail, the first error propagates.
RetrievalContext hybrid_retrieve(const ChunkStore& store,
                                 const VectorIndex& index, Embedder& embedder,
                                 Gateway& gateway, const std::string& spec,
                                 const RetrievalOptions& options);

/// Assembles the prompt context block: global chunks first, then per
/// operator notes, each chunk rendered once even when retrieved twice.
std::string render_retrieved_context(const ChunkStore& store,
                                     const RetrievalContext& context);

/// Lexical test with token boundaries, so a $onehot probe does not match
/// text that only mentions $onehot0.
bool mentions_operator(const std::string& text, OpKind op);

/// Maps an extraction-stage operator spelling (surface token or name, case
/// insensitive for names) onto an operator. Returns nullopt for anything
/// outside the supported ten.
std::optional<OpKind> operator_from_label(const std::string& label);

/// Newline-joined "- phrase" list used as the {{keywords}} binding.
std::string format_keyword_binding(const std::vector<std::string>& keywords);

} // namespace nl2sva
