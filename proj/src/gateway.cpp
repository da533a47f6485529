// SPDX-License-Identifier: Apache-2.0
#include "nl2sva/gateway.hpp"

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "nl2sva/embedding.hpp"

namespace fs = std::filesystem;

namespace nl2sva {

namespace {

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

std::string serialize_bindings(
    const std::map<std::string, std::string>& bindings) {
  std::string blob;
  for (const auto& [name, value] : bindings) {
    blob += name;
    blob.push_back('\x1e');
    blob += value;
    blob.push_back('\x1d');
  }
  return blob;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

} // namespace

std::string mock_key(const std::string& template_id,
                     const std::map<std::string, std::string>& bindings) {
  std::string blob = template_id;
  blob.push_back('\x1f');
  blob += serialize_bindings(bindings);
  return hex64(fnv1a64(blob));
}

void mock_install(const std::string& dir, const std::string& template_id,
                  const std::map<std::string, std::string>& bindings,
                  const std::string& response) {
  fs::create_directories(dir);
  std::string key = mock_key(template_id, bindings);

  std::ofstream out(fs::path(dir) / (key + ".txt"), std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write mock fixture in " + dir);
  out << response;
  out.close();

  fs::path index_path = fs::path(dir) / "index.json";
  nlohmann::json index;
  if (fs::exists(index_path)) {
    try {
      index = nlohmann::json::parse(read_file(index_path));
    } catch (const nlohmann::json::exception&) {
      index = nlohmann::json::object();
    }
  }
  if (!index.is_object()) index = nlohmann::json::object();
  index[key] = {
      {"template_id", template_id},
      {"bindings_digest", hex64(fnv1a64(serialize_bindings(bindings)))},
  };
  std::ofstream idx(index_path, std::ios::binary);
  idx << index.dump(2) << "\n";
}

MockChatProvider::MockChatProvider(std::string dir) : dir_(std::move(dir)) {
  if (!fs::is_directory(dir_))
    throw Error(ErrorCode::InvalidConfig,
                "mock fixture directory does not exist: " + dir_);
}

ChatExchange MockChatProvider::complete(const PromptRender& prompt,
                                        const ChatParams&) {
  std::string key = mock_key(prompt.template_id, prompt.bindings);
  fs::path path = fs::path(dir_) / (key + ".txt");
  if (!fs::exists(path))
    throw Error(ErrorCode::MockMiss,
                "no mock fixture for key " + key + " (template " +
                    prompt.template_id + ") under " + dir_);
  ChatExchange ex;
  ex.template_id = prompt.template_id;
  ex.system = prompt.system;
  ex.user = prompt.user;
  ex.response = read_file(path);
  ex.provider = name();
  return ex;
}

HttpChatProvider::HttpChatProvider(HttpChatConfig config)
    : config_(std::move(config)) {
  if (config_.base_url.empty())
    throw Error(ErrorCode::InvalidConfig, "chat base_url is empty");
}

ChatExchange HttpChatProvider::complete(const PromptRender& prompt,
                                        const ChatParams& params) {
  nlohmann::json body;
  body["model"] = config_.model;
  body["messages"] = nlohmann::json::array(
      {{{"role", "system"}, {"content", prompt.system}},
       {{"role", "user"}, {"content", prompt.user}}});
  body["temperature"] = params.temperature;
  body["top_p"] = params.top_p;
  body["max_tokens"] = params.max_tokens;

  httplib::Client client(config_.base_url);
  client.set_connection_timeout(config_.timeout_s, 0);
  client.set_read_timeout(config_.timeout_s, 0);
  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()))
    headers.emplace("Authorization", std::string("Bearer ") + key);

  std::string payload = body.dump();
  auto started = std::chrono::steady_clock::now();
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
                  "chat request failed with status " +
                      std::to_string(res->status) + ": " + res->body);

    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedResponse,
                  std::string("chat response is not valid JSON: ") + e.what());
    }
    if (!parsed.contains("choices") || !parsed["choices"].is_array() ||
        parsed["choices"].empty() ||
        !parsed["choices"][0].contains("message") ||
        !parsed["choices"][0]["message"].contains("content"))
      throw Error(ErrorCode::MalformedResponse,
                  "chat response lacks choices[0].message.content");

    ChatExchange ex;
    ex.template_id = prompt.template_id;
    ex.system = prompt.system;
    ex.user = prompt.user;
    ex.response = parsed["choices"][0]["message"]["content"].get<std::string>();
    ex.provider = name();
    ex.retries = attempt;
    ex.elapsed_ms = static_cast<long>(
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - started)
            .count());
    return ex;
  }
  throw Error(ErrorCode::Provider,
              "chat request failed after " +
                  std::to_string(config_.max_retries + 1) +
                  " attempts; last failure: " + last_failure);
}

Gateway::Gateway(std::shared_ptr<ChatProvider> provider,
                 std::string transcript_path)
    : provider_(std::move(provider)),
      transcript_path_(std::move(transcript_path)) {
  if (!provider_)
    throw Error(ErrorCode::InvalidConfig, "gateway requires a provider");
}

ChatExchange Gateway::complete(const PromptRender& prompt,
                               const ChatParams& params) {
  ChatExchange ex = provider_->complete(prompt, params);
  if (!transcript_path_.empty()) {
    nlohmann::json line = {
        {"template_id", ex.template_id}, {"system", ex.system},
        {"user", ex.user},               {"response", ex.response},
        {"provider", ex.provider},       {"retries", ex.retries},
    };
    std::ofstream out(transcript_path_, std::ios::binary | std::ios::app);
    if (!out)
      throw Error(ErrorCode::Io, "cannot append transcript " + transcript_path_);
    out << line.dump() << "\n";
  }
  return ex;
}

namespace {

// Extracts `assert property (...)` starting inside [begin, end), including a
// leading label on the same line; returns npos-pair when absent.
std::pair<std::size_t, std::size_t> find_assert_span(const std::string& text,
                                                     std::size_t begin,
                                                     std::size_t end) {
  std::size_t at = text.find("assert property", begin);
  if (at == std::string::npos || at >= end) return {std::string::npos, 0};

  std::size_t line_start = text.rfind('\n', at);
  line_start = (line_start == std::string::npos) ? begin : line_start + 1;
  if (line_start < begin) line_start = begin;
  // Keep a `label:` prefix but drop unrelated leading prose.
  std::string prefix = trim(text.substr(line_start, at - line_start));
  std::size_t start = at;
  if (!prefix.empty() && prefix.back() == ':') {
    bool ident = true;
    for (std::size_t i = 0; i + 1 < prefix.size(); ++i) {
      unsigned char c = static_cast<unsigned char>(prefix[i]);
      if (!std::isalnum(c) && c != '_' && c != '$') { ident = false; break; }
    }
    if (ident && prefix.size() > 1) start = text.find(prefix, line_start);
  }

  std::size_t open = text.find('(', at);
  if (open == std::string::npos || open >= end) {
    std::size_t eol = text.find('\n', at);
    return {start, std::min(eol == std::string::npos ? end : eol, end)};
  }
  int depth = 0;
  std::size_t i = open;
  for (; i < end; ++i) {
    if (text[i] == '(') depth++;
    else if (text[i] == ')') {
      depth--;
      if (depth == 0) break;
    }
  }
  if (i >= end) return {start, end}; // unbalanced: keep the rest verbatim
  std::size_t stop = i + 1;
  while (stop < end &&
         (text[stop] == ' ' || text[stop] == '\t')) stop++;
  if (stop < end && text[stop] == ';') stop++;
  return {start, stop};
}

} // namespace

std::string extract_sva_from_response(const std::string& response) {
  // Pass 1: fenced code blocks.
  std::size_t pos = 0;
  while (true) {
    std::size_t fence = response.find("```", pos);
    if (fence == std::string::npos) break;
    std::size_t body = response.find('\n', fence);
    if (body == std::string::npos) break;
    body++;
    std::size_t close = response.find("```", body);
    std::size_t block_end = (close == std::string::npos) ? response.size() : close;
    auto [b, e] = find_assert_span(response, body, block_end);
    if (b != std::string::npos) return trim(response.substr(b, e - b));
    if (close == std::string::npos) break;
    pos = close + 3;
  }
  // Pass 2: bare text.
  auto [b, e] = find_assert_span(response, 0, response.size());
  if (b != std::string::npos) return trim(response.substr(b, e - b));
  throw Error(ErrorCode::NoAssertionFound,
              "response contains no `assert property` statement");
}

std::vector<std::string> parse_string_list(const std::string& response) {
  std::size_t open = response.find('[');
  if (open != std::string::npos) {
    std::size_t close = response.rfind(']');
    if (close != std::string::npos && close > open) {
      try {
        auto arr = nlohmann::json::parse(
            response.substr(open, close - open + 1));
        if (arr.is_array()) {
          std::vector<std::string> out;
          for (const auto& item : arr)
            if (item.is_string()) out.push_back(item.get<std::string>());
          if (!out.empty()) return out;
        }
      } catch (const nlohmann::json::exception&) {
        // fall through to line parsing
      }
    }
  }
  std::vector<std::string> out;
  std::istringstream in(response);
  std::string line;
  while (std::getline(in, line)) {
    std::string s = trim(line);
    if (s.empty() || s.rfind("```", 0) == 0) continue;
    while (!s.empty() && (s[0] == '-' || s[0] == '*')) s = trim(s.substr(1));
    std::size_t i = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) i++;
    if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')'))
      s = trim(s.substr(i + 1));
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
      s = s.substr(1, s.size() - 2);
    if (!s.empty()) out.push_back(s);
  }
  if (out.empty())
    throw Error(ErrorCode::MalformedResponse,
                "response contains no usable list items");
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_string_map(
    const std::string& response) {
  std::size_t open = response.find('{');
  if (open != std::string::npos) {
    std::size_t close = response.rfind('}');
    if (close != std::string::npos && close > open) {
      try {
        auto obj = nlohmann::ordered_json::parse(
            response.substr(open, close - open + 1));
        if (obj.is_object()) {
          std::vector<std::pair<std::string, std::string>> out;
          for (const auto& [key, value] : obj.items())
            if (value.is_string())
              out.emplace_back(key, value.get<std::string>());
          if (!out.empty()) return out;
        }
      } catch (const nlohmann::json::exception&) {
        // fall through to line parsing
      }
    }
  }
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(response);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t arrow = line.find("->");
    if (arrow == std::string::npos) continue;
    std::string lhs = trim(line.substr(0, arrow));
    std::string rhs = trim(line.substr(arrow + 2));
    while (!lhs.empty() && (lhs[0] == '-' || lhs[0] == '*'))
      lhs = trim(lhs.substr(1));
    if (lhs.size() >= 2 && lhs.front() == '"' && lhs.back() == '"')
      lhs = lhs.substr(1, lhs.size() - 2);
    if (rhs.size() >= 2 && rhs.front() == '"' && rhs.back() == '"')
      rhs = rhs.substr(1, rhs.size() - 2);
    if (!lhs.empty() && !rhs.empty()) out.emplace_back(lhs, rhs);
  }
  if (out.empty())
    throw Error(ErrorCode::MalformedResponse,
                "response contains no usable keyword-to-operator pairs");
  return out;
}

} // namespace nl2sva
