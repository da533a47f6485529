// SPDX-License-Identifier: Apache-2.0
#include "nl2sva/embedding.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <unordered_map>

#include "httplib.h"
#include "json.hpp"

namespace nl2sva {

namespace {

bool is_token_char(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '$' || c == '#';
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (is_token_char(c)) {
      cur.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(c))));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

void normalize(std::vector<float>& v) {
  double norm = 0.0;
  for (float x : v) norm += static_cast<double>(x) * x;
  norm = std::sqrt(norm);
  if (norm == 0.0) {
    v[0] = 1.0f;
    return;
  }
  for (float& x : v) x = static_cast<float>(x / norm);
}

} // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<std::vector<float>> Embedder::embed_batch(
    const std::vector<std::string>& texts) {
  std::vector<std::vector<float>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed(t));
  return out;
}

FallbackEmbedder::FallbackEmbedder(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw Error(ErrorCode::InvalidConfig, "embedding dim must be positive");
}

std::vector<float> FallbackEmbedder::embed(const std::string& text) {
  auto tokens = tokenize(text);
  if (tokens.empty())
    throw Error(ErrorCode::EmptyText, "cannot embed empty text");
  std::unordered_map<std::string, int> counts;
  for (const auto& t : tokens) counts[t]++;
  std::vector<float> v(dim_, 0.0f);
  for (const auto& [token, count] : counts) {
    std::uint64_t h = fnv1a64(token);
    std::size_t bucket = h % dim_;
    float sign = ((h >> 32) & 1u) ? 1.0f : -1.0f;
    v[bucket] += sign * static_cast<float>(count);
  }
  normalize(v);
  return v;
}

HttpEmbedder::HttpEmbedder(HttpEmbedderConfig config)
    : config_(std::move(config)) {
  if (config_.base_url.empty())
    throw Error(ErrorCode::InvalidConfig, "embedding base_url is empty");
}

std::vector<float> HttpEmbedder::embed(const std::string& text) {
  return embed_batch({text}).front();
}

std::vector<std::vector<float>> HttpEmbedder::embed_batch(
    const std::vector<std::string>& texts) {
  for (const auto& t : texts)
    if (tokenize(t).empty())
      throw Error(ErrorCode::EmptyText, "cannot embed empty text");

  nlohmann::json body;
  body["model"] = config_.model;
  body["input"] = texts;

  httplib::Client client(config_.base_url);
  client.set_connection_timeout(config_.timeout_s, 0);
  client.set_read_timeout(config_.timeout_s, 0);
  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()))
    headers.emplace("Authorization", std::string("Bearer ") + key);

  std::string payload = body.dump();
  int backoff = config_.backoff_ms;
  std::string last_failure = "no attempt made";
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff *= 2;
    }
    auto res = client.Post(config_.path, headers, payload, "application/json");
    if (!res) {
      last_failure = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_failure = "server returned status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw Error(ErrorCode::Provider,
                  "embedding request failed with status " +
                      std::to_string(res->status) + ": " + res->body);

    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Provider,
                  std::string("embedding response is not valid JSON: ") + e.what());
    }
    if (!parsed.contains("data") || !parsed["data"].is_array() ||
        parsed["data"].size() != texts.size())
      throw Error(ErrorCode::Provider,
                  "embedding response data array is missing or has the wrong length");

    std::vector<std::vector<float>> out;
    out.reserve(texts.size());
    for (const auto& item : parsed["data"]) {
      if (!item.contains("embedding") || !item["embedding"].is_array())
        throw Error(ErrorCode::Provider, "embedding response item lacks an embedding array");
      std::vector<float> v = item["embedding"].get<std::vector<float>>();
      if (v.empty())
        throw Error(ErrorCode::Provider, "embedding response contains an empty vector");
      if (dim_ == 0) dim_ = v.size();
      if (v.size() != dim_)
        throw Error(ErrorCode::DimMismatch,
                    "embedding dimension " + std::to_string(v.size()) +
                        " does not match expected " + std::to_string(dim_));
      normalize(v);
      out.push_back(std::move(v));
    }
    return out;
  }
  throw Error(ErrorCode::Provider,
              "embedding request failed after " +
                  std::to_string(config_.max_retries + 1) +
                  " attempts; last failure: " + last_failure);
}

float cosine(const std::vector<float>& a, const std::vector<float>& b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::DimMismatch,
                "cosine requires equal dimensions, got " +
                    std::to_string(a.size()) + " and " + std::to_string(b.size()));
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    dot += static_cast<double>(a[i]) * b[i];
  return static_cast<float>(dot);
}

} // namespace nl2sva
