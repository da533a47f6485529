// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nl2sva/chunking.hpp"

namespace nl2sva {

/// On-disk store: a directory holding chunks.jsonl (versioned header line,
/// then one record per chunk, append order preserved) and embeddings.jsonl
/// (sidecar vectors keyed by chunk_id).
class ChunkStore {
public:
  void add(Chunk chunk);
  void set_embedding(const std::string& chunk_id, std::vector<float> values);

  const std::vector<Chunk>& chunks() const { return chunks_; }
  const Chunk* find(const std::string& chunk_id) const;
  const std::vector<float>* embedding(const std::string& chunk_id) const;
  std::size_t size() const { return chunks_.size(); }

  void save(const std::string& dir) const;
  static ChunkStore load(const std::string& dir);

private:
  std::vector<Chunk> chunks_;
  std::vector<std::pair<std::string, std::vector<float>>> embeddings_;
};

/// Reads every .md / .txt file under `corpus_dir` (sorted by filename) as a
/// SourceDocument; doc_id is the filename without extension.
std::vector<SourceDocument> load_corpus(const std::string& corpus_dir);

} // namespace nl2sva
