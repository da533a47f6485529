// SPDX-License-Identifier: Apache-2.0
#include "nl2sva/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace nl2sva {

namespace {

void reject_unknown(const nlohmann::json& obj, const std::string& where,
                    const std::set<std::string>& known) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!known.count(key))
      throw Error(ErrorCode::InvalidConfig,
                  "unknown config key '" + where + key + "'");
  }
}

} // namespace

AppConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::InvalidConfig, "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig,
                path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object())
    throw Error(ErrorCode::InvalidConfig, path + " must hold a JSON object");

  AppConfig config;
  reject_unknown(j, "",
                 {"provider", "mock_dir", "chat_http", "chat",
                  "embedding_provider", "embedding_dim", "embed_http",
                  "retrieval", "recheck_max_iters", "equivalence", "store_dir",
                  "dataset_dir", "transcript_path"});

  config.provider = j.value("provider", config.provider);
  config.mock_dir = j.value("mock_dir", config.mock_dir);
  if (j.contains("chat_http")) {
    const auto& h = j["chat_http"];
    reject_unknown(h, "chat_http.",
                   {"base_url", "path", "model", "api_key_env", "max_retries",
                    "backoff_ms", "timeout_s"});
    config.chat_http.base_url = h.value("base_url", config.chat_http.base_url);
    config.chat_http.path = h.value("path", config.chat_http.path);
    config.chat_http.model = h.value("model", config.chat_http.model);
    config.chat_http.api_key_env =
        h.value("api_key_env", config.chat_http.api_key_env);
    config.chat_http.max_retries =
        h.value("max_retries", config.chat_http.max_retries);
    config.chat_http.backoff_ms =
        h.value("backoff_ms", config.chat_http.backoff_ms);
    config.chat_http.timeout_s =
        h.value("timeout_s", config.chat_http.timeout_s);
  }
  if (j.contains("chat")) {
    const auto& c = j["chat"];
    reject_unknown(c, "chat.", {"temperature", "top_p", "max_tokens"});
    config.chat.temperature = c.value("temperature", config.chat.temperature);
    config.chat.top_p = c.value("top_p", config.chat.top_p);
    config.chat.max_tokens = c.value("max_tokens", config.chat.max_tokens);
  }
  config.embedding_provider =
      j.value("embedding_provider", config.embedding_provider);
  config.embedding_dim = j.value("embedding_dim", config.embedding_dim);
  if (j.contains("embed_http")) {
    const auto& h = j["embed_http"];
    reject_unknown(h, "embed_http.",
                   {"base_url", "path", "model", "api_key_env", "max_retries",
                    "backoff_ms", "timeout_s"});
    config.embed_http.base_url =
        h.value("base_url", config.embed_http.base_url);
    config.embed_http.path = h.value("path", config.embed_http.path);
    config.embed_http.model = h.value("model", config.embed_http.model);
    config.embed_http.api_key_env =
        h.value("api_key_env", config.embed_http.api_key_env);
    config.embed_http.max_retries =
        h.value("max_retries", config.embed_http.max_retries);
    config.embed_http.backoff_ms =
        h.value("backoff_ms", config.embed_http.backoff_ms);
    config.embed_http.timeout_s =
        h.value("timeout_s", config.embed_http.timeout_s);
  }
  if (j.contains("retrieval")) {
    const auto& r = j["retrieval"];
    reject_unknown(r, "retrieval.", {"k_global", "k_per_op", "rank_by"});
    config.retrieval.k_global = r.value("k_global", config.retrieval.k_global);
    config.retrieval.k_per_op = r.value("k_per_op", config.retrieval.k_per_op);
    config.retrieval.rank_by = r.value("rank_by", config.retrieval.rank_by);
  }
  config.recheck_max_iters =
      j.value("recheck_max_iters", config.recheck_max_iters);
  if (j.contains("equivalence")) {
    const auto& e = j["equivalence"];
    reject_unknown(e, "equivalence.", {"max_len", "workers"});
    config.equivalence.max_len = e.value("max_len", config.equivalence.max_len);
    config.equivalence.workers = e.value("workers", config.equivalence.workers);
  }
  config.store_dir = j.value("store_dir", config.store_dir);
  config.dataset_dir = j.value("dataset_dir", config.dataset_dir);
  config.transcript_path = j.value("transcript_path", config.transcript_path);

  validate_config(config);
  return config;
}

void validate_config(const AppConfig& config) {
  if (config.provider != "mock" && config.provider != "http")
    throw Error(ErrorCode::InvalidConfig,
                "provider must be 'mock' or 'http', got '" + config.provider +
                    "'");
  if (config.embedding_provider != "fallback" &&
      config.embedding_provider != "http")
    throw Error(ErrorCode::InvalidConfig,
                "embedding_provider must be 'fallback' or 'http', got '" +
                    config.embedding_provider + "'");
  if (config.embedding_dim == 0)
    throw Error(ErrorCode::InvalidConfig, "embedding_dim must be positive");
  if (config.retrieval.rank_by != "spec" &&
      config.retrieval.rank_by != "keyword")
    throw Error(ErrorCode::InvalidConfig,
                "retrieval.rank_by must be 'spec' or 'keyword', got '" +
                    config.retrieval.rank_by + "'");
  if (config.retrieval.k_global == 0 || config.retrieval.k_per_op == 0)
    throw Error(ErrorCode::InvalidConfig,
                "retrieval depths must be positive");
  if (config.recheck_max_iters < 1)
    throw Error(ErrorCode::InvalidConfig, "recheck_max_iters must be >= 1");
  if (config.equivalence.max_len < 1)
    throw Error(ErrorCode::InvalidConfig, "equivalence.max_len must be >= 1");
  if (config.equivalence.workers < 1)
    throw Error(ErrorCode::InvalidConfig, "equivalence.workers must be >= 1");
}

} // namespace nl2sva
