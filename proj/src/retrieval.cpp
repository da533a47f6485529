// SPDX-License-Identifier: Apache-2.0
#include "nl2sva/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace nl2sva {

namespace {

constexpr OpKind kRetrievalOps[] = {
    OpKind::Delay,       OpKind::Rose,           OpKind::Fell,
    OpKind::Past,        OpKind::Stable,         OpKind::Onehot,
    OpKind::Onehot0,     OpKind::OverlapImpl,    OpKind::NonOverlapImpl,
    OpKind::SEventually,
};

bool is_word_char(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '$';
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

} // namespace

VectorIndex build_index(const ChunkStore& store, Embedder& embedder) {
  VectorIndex index;
  for (const auto& chunk : store.chunks()) {
    const std::vector<float>* stored = store.embedding(chunk.chunk_id);
    std::vector<float> vec;
    if (stored && (index.dim == 0 || stored->size() == index.dim) &&
        (embedder.dim() == 0 || stored->size() == embedder.dim())) {
      vec = *stored;
    } else {
      vec = embedder.embed(chunk.retrieval_text());
    }
    if (index.dim == 0) index.dim = vec.size();
    if (vec.size() != index.dim)
      throw Error(ErrorCode::DimMismatch,
                  "chunk " + chunk.chunk_id + " has dimension " +
                      std::to_string(vec.size()) + ", index expects " +
                      std::to_string(index.dim));
    index.entries.emplace_back(chunk.chunk_id, std::move(vec));
  }
  return index;
}

std::vector<ScoredChunk> query_index(const VectorIndex& index,
                                     const std::vector<float>& query,
                                     std::size_t k) {
  std::vector<ScoredChunk> scored;
  scored.reserve(index.entries.size());
  for (const auto& [chunk_id, vec] : index.entries)
    scored.push_back({chunk_id, cosine(query, vec)});
  std::sort(scored.begin(), scored.end(),
            [](const ScoredChunk& a, const ScoredChunk& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.chunk_id < b.chunk_id;
            });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

std::vector<ScoredChunk> retrieve_global(const VectorIndex& index,
                                         Embedder& embedder,
                                         const std::string& spec,
                                         std::size_t k) {
  return query_index(index, embedder.embed(spec), k);
}

bool mentions_operator(const std::string& text, OpKind op) {
  if (op == OpKind::Delay) {
    for (std::size_t i = 0; (i = text.find("##", i)) != std::string::npos; ++i) {
      bool hash_before = i > 0 && text[i - 1] == '#';
      bool hash_after = i + 2 < text.size() && text[i + 2] == '#';
      if (!hash_before && !hash_after) return true;
    }
    return false;
  }
  if (op == OpKind::OverlapImpl) return text.find("|->") != std::string::npos;
  if (op == OpKind::NonOverlapImpl) return text.find("|=>") != std::string::npos;

  std::string token = operator_surface_token(op);
  for (std::size_t i = 0; (i = text.find(token, i)) != std::string::npos; ++i) {
    bool start_ok = token[0] == '$'
                        ? true
                        : (i == 0 || !is_word_char(text[i - 1]));
    std::size_t after = i + token.size();
    bool end_ok = after >= text.size() || !is_word_char(text[after]);
    if (start_ok && end_ok) return true;
  }
  return false;
}

std::optional<OpKind> operator_from_label(const std::string& raw) {
  std::string label = raw;
  std::size_t b = label.find_first_not_of(" \t\r\n`");
  std::size_t e = label.find_last_not_of(" \t\r\n`");
  label = (b == std::string::npos) ? "" : label.substr(b, e - b + 1);
  if (label.empty()) return std::nullopt;

  if (label.rfind("##", 0) == 0) {
    std::string rest = label.substr(2);
    if (rest.empty() || rest == "N" || rest == "n" ||
        std::all_of(rest.begin(), rest.end(), [](char c) {
          return std::isdigit(static_cast<unsigned char>(c));
        }))
      return OpKind::Delay;
    return std::nullopt;
  }
  for (OpKind op : kRetrievalOps) {
    if (label == operator_surface_token(op)) return op;
    if (lower(label) == lower(op_kind_name(op))) return op;
  }
  if (lower(label) == "delay") return OpKind::Delay;
  return std::nullopt;
}

std::string format_keyword_binding(const std::vector<std::string>& keywords) {
  std::string out;
  for (const auto& k : keywords) {
    out += "- ";
    out += k;
    out += "\n";
  }
  if (!out.empty()) out.pop_back();
  return out;
}

std::vector<OperatorHit> retrieve_operator_guided(
    const ChunkStore& store, const VectorIndex& index, Embedder& embedder,
    Gateway& gateway, const std::string& spec, const RetrievalOptions& options,
    std::vector<std::pair<std::string, std::string>>* keyword_map,
    std::vector<std::string>* warnings) {
  auto keyword_prompt = render_prompt("keyword_extraction", {{"spec", spec}});
  auto keywords = parse_string_list(gateway.complete(keyword_prompt).response);

  auto operator_prompt = render_prompt(
      "operator_extraction",
      {{"keywords", format_keyword_binding(keywords)}});
  auto raw_pairs = parse_string_map(gateway.complete(operator_prompt).response);

  std::vector<std::pair<std::string, OpKind>> mapped;
  for (const auto& [phrase, label] : raw_pairs) {
    auto op = operator_from_label(label);
    if (!op) {
      if (warnings)
        warnings->push_back("dropped keyword '" + phrase + "': '" + label +
                            "' is not one of the ten supported operators");
      continue;
    }
    mapped.emplace_back(phrase, *op);
    if (keyword_map)
      keyword_map->emplace_back(phrase, operator_surface_token(*op));
  }

  std::vector<float> spec_vec;
  if (options.rank_by != "keyword") spec_vec = embedder.embed(spec);

  std::vector<OperatorHit> hits;
  std::set<OpKind> seen;
  for (const auto& [phrase, op] : mapped) {
    if (!seen.insert(op).second) continue;
    VectorIndex filtered;
    filtered.dim = index.dim;
    for (const auto& entry : index.entries) {
      const Chunk* chunk = store.find(entry.first);
      if (chunk && mentions_operator(chunk->retrieval_text(), op))
        filtered.entries.push_back(entry);
    }
    OperatorHit hit;
    hit.op = op;
    hit.keyword = phrase;
    if (!filtered.entries.empty()) {
      const std::vector<float>& qvec =
          options.rank_by == "keyword" ? embedder.embed(phrase) : spec_vec;
      hit.chunks = query_index(filtered, qvec, options.k_per_op);
    }
    hits.push_back(std::move(hit));
  }
  return hits;
}

RetrievalContext hybrid_retrieve(const ChunkStore& store,
                                 const VectorIndex& index, Embedder& embedder,
                                 Gateway& gateway, const std::string& spec,
                                 const RetrievalOptions& options) {
  RetrievalContext ctx;
  std::optional<Error> first_error;

  try {
    ctx.global_chunks = retrieve_global(index, embedder, spec, options.k_global);
  } catch (const Error& e) {
    ctx.global_degraded = true;
    ctx.warnings.push_back(std::string("global retrieval failed: ") + e.what());
    first_error = e;
  }

  try {
    ctx.operator_hits = retrieve_operator_guided(
        store, index, embedder, gateway, spec, options, &ctx.keyword_map,
        &ctx.warnings);
  } catch (const Error& e) {
    ctx.operator_degraded = true;
    ctx.warnings.push_back(std::string("operator-guided retrieval failed: ") +
                           e.what());
    if (first_error) throw *first_error;
  }
  return ctx;
}

std::string render_retrieved_context(const ChunkStore& store,
                                     const RetrievalContext& context) {
  std::string out;
  std::set<std::string> rendered;
  auto append_chunk = [&](const ScoredChunk& sc) {
    if (!rendered.insert(sc.chunk_id).second) return;
    const Chunk* chunk = store.find(sc.chunk_id);
    if (!chunk) return;
    out += "[chunk " + sc.chunk_id + "]\n";
    out += chunk->retrieval_text();
    out += "\n\n";
  };

  if (!context.global_chunks.empty()) {
    out += "Similar documentation:\n\n";
    for (const auto& sc : context.global_chunks) append_chunk(sc);
  }
  for (const auto& hit : context.operator_hits) {
    if (hit.chunks.empty()) continue;
    bool any_new = false;
    for (const auto& sc : hit.chunks)
      if (!rendered.count(sc.chunk_id)) any_new = true;
    if (!any_new) continue;
    out += "Notes for operator " + std::string(operator_surface_token(hit.op)) +
           ":\n\n";
    for (const auto& sc : hit.chunks) append_chunk(sc);
  }
  while (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

} // namespace nl2sva
