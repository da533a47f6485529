// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nl2sva/errors.hpp"

namespace nl2sva {

/// Produces unit-L2-norm embedding vectors of a fixed dimension.
class Embedder {
public:
  virtual ~Embedder() = default;
  virtual std::size_t dim() const = 0;
  /// Throws Error(EmptyText) on empty/whitespace-only input and
  /// Error(Provider) on remote failures.
  virtual std::vector<float> embed(const std::string& text) = 0;
  virtual std::vector<std::vector<float>> embed_batch(
      const std::vector<std::string>& texts);
};

/// Deterministic offline embedder: tokens are lowercased runs of
/// [a-z0-9_$#], hashed into `dim` buckets with a hash-derived sign and
/// term-frequency weights, then L2-normalized. Bit-stable across runs and
/// platforms.
class FallbackEmbedder final : public Embedder {
public:
  explicit FallbackEmbedder(std::size_t dim = 256);
  std::size_t dim() const override { return dim_; }
  std::vector<float> embed(const std::string& text) override;

private:
  std::size_t dim_;
};

struct HttpEmbedderConfig {
  std::string base_url;            // e.g. http://localhost:8801
  std::string path = "/v1/embeddings";
  std::string model = "text-embedding";
  std::string api_key_env = "NL2SVA_EMBED_API_KEY";
  int max_retries = 3;
  int backoff_ms = 200;
  int timeout_s = 30;
};

/// Remote provider speaking the common embeddings-API shape:
/// POST {input: [texts], model} -> {data: [{embedding: [...]}, ...]}.
/// Responses are re-normalized to unit length.
class HttpEmbedder final : public Embedder {
public:
  explicit HttpEmbedder(HttpEmbedderConfig config);
  std::size_t dim() const override { return dim_; }
  std::vector<float> embed(const std::string& text) override;
  std::vector<std::vector<float>> embed_batch(
      const std::vector<std::string>& texts) override;

private:
  HttpEmbedderConfig config_;
  std::size_t dim_ = 0; // learned from the first response
};

float cosine(const std::vector<float>& a, const std::vector<float>& b);

/// FNV-1a over bytes; the project-wide stable hash.
std::uint64_t fnv1a64(const std::string& bytes);

} // namespace nl2sva
