// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nl2sva/errors.hpp"
#include "nl2sva/prompts.hpp"

namespace nl2sva {

struct ChatParams {
  double temperature = 0.6;
  double top_p = 0.95;
  int max_tokens = 1024;
};

struct ChatExchange {
  std::string template_id;
  std::string system;
  std::string user;
  std::string response;
  std::string provider;
  int retries = 0;
  long elapsed_ms = 0;
};

class ChatProvider {
public:
  virtual ~ChatProvider() = default;
  virtual std::string name() const = 0;
  virtual ChatExchange complete(const PromptRender& prompt,
                                const ChatParams& params) = 0;
};

/// Stable replay key for a prompt: hex FNV-1a of the template id and the
/// sorted bindings.
std::string mock_key(const std::string& template_id,
                     const std::map<std::string, std::string>& bindings);

/// Writes `<key>.txt` under `dir` and records the key in `index.json`.
void mock_install(const std::string& dir, const std::string& template_id,
                  const std::map<std::string, std::string>& bindings,
                  const std::string& response);

/// Serves canned responses keyed by mock_key. A prompt with no fixture
/// throws Error(MockMiss) naming the key that was looked up.
class MockChatProvider final : public ChatProvider {
public:
  explicit MockChatProvider(std::string dir);
  std::string name() const override { return "mock"; }
  ChatExchange complete(const PromptRender& prompt,
                        const ChatParams& params) override;

private:
  std::string dir_;
};

struct HttpChatConfig {
  std::string base_url;
  std::string path = "/v1/chat/completions";
  std::string model = "nl2sva-chat";
  std::string api_key_env = "NL2SVA_API_KEY";
  int max_retries = 3;
  int backoff_ms = 200;
  int timeout_s = 60;
};

/// Chat-completions provider. Retries transport failures and 5xx responses
/// with exponential backoff, up to max_retries extra attempts.
class HttpChatProvider final : public ChatProvider {
public:
  explicit HttpChatProvider(HttpChatConfig config);
  std::string name() const override { return "http"; }
  ChatExchange complete(const PromptRender& prompt,
                        const ChatParams& params) override;

private:
  HttpChatConfig config_;
};

/// Routes prompts to a provider and appends every exchange to an optional
/// JSONL transcript.
class Gateway {
public:
  explicit Gateway(std::shared_ptr<ChatProvider> provider,
                   std::string transcript_path = "");
  ChatExchange complete(const PromptRender& prompt,
                        const ChatParams& params = ChatParams{});
  const std::string& transcript_path() const { return transcript_path_; }

private:
  std::shared_ptr<ChatProvider> provider_;
  std::string transcript_path_;
};

/// Pulls the assertion out of a model response: first the fenced code blocks
/// containing `assert property`, then bare line runs, trimmed to the
/// terminating `);` or `;`. The result is always a substring of `response`.
/// Throws Error(NoAssertionFound) when nothing matches.
std::string extract_sva_from_response(const std::string& response);

/// Parses a JSON list of strings, falling back to one item per non-empty
/// line (list markers and quotes stripped). Throws Error(MalformedResponse)
/// when nothing usable remains.
std::vector<std::string> parse_string_list(const std::string& response);

/// Parses a JSON object of string pairs (insertion order preserved), falling
/// back to `lhs -> rhs` lines. Throws Error(MalformedResponse) when nothing
/// usable remains.
std::vector<std::pair<std::string, std::string>> parse_string_map(
    const std::string& response);

} // namespace nl2sva
