// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "nl2sva/embedding.hpp"
#include "nl2sva/equivalence.hpp"
#include "nl2sva/gateway.hpp"
#include "nl2sva/retrieval.hpp"

namespace nl2sva {

/// Everything the CLI and pipeline need, with working defaults. Loadable
/// from a JSON file; unknown keys are rejected so typos surface early.
struct AppConfig {
  std::string provider = "mock"; // "mock" or "http"
  std::string mock_dir = "fixtures/mock";
  HttpChatConfig chat_http;
  ChatParams chat;

  std::string embedding_provider = "fallback"; // "fallback" or "http"
  std::size_t embedding_dim = 256;
  HttpEmbedderConfig embed_http;

  RetrievalOptions retrieval;
  int recheck_max_iters = 3;
  EquivalenceOptions equivalence;

  std::string store_dir = "demo/store";
  std::string dataset_dir = "fixtures/dataset";
  std::string transcript_path;
};

AppConfig load_config(const std::string& path); // Error(InvalidConfig)

/// Validates ranges and enumerations; load_config calls this.
void validate_config(const AppConfig& config);

} // namespace nl2sva
