// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "nl2sva/embedding.hpp"
#include "nl2sva/gateway.hpp"
#include "nl2sva/retrieval.hpp"

using namespace nl2sva;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// In-process HTTP endpoint for provider tests.
struct TestServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;

  void start() {
    port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port); }

  ~TestServer() {
    server.stop();
    if (thread.joinable()) thread.join();
  }
};

} // namespace

TEST_CASE("all five prompt templates are registered with their variables") {
  auto ids = template_ids();
  REQUIRE(ids.size() == 5);
  CHECK(get_template("initial_generation").required_vars ==
        std::vector<std::string>{"spec", "design_context", "retrieved_context"});
  CHECK(get_template("keyword_extraction").required_vars ==
        std::vector<std::string>{"spec"});
  CHECK(get_template("operator_extraction").required_vars ==
        std::vector<std::string>{"keywords"});
  CHECK(get_template("sva_rechecking").required_vars ==
        std::vector<std::string>{"spec", "candidate", "explanations",
                                 "syntax_feedback"});
  CHECK(get_template("derivation_generation").required_vars ==
        std::vector<std::string>{"explanation", "operator", "fragment_count"});

  // The decomposition instruction the keyword stage relies on.
  CHECK(get_template("keyword_extraction")
            .user.find("parts, each representing an operation over a single "
                       "signal or a group of signals") != std::string::npos);

  try {
    get_template("nonsense");
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidConfig);
  }
}

TEST_CASE("substitution binds every placeholder verbatim") {
  PromptRender r = render_prompt(
      "operator_extraction",
      {{"keywords", format_keyword_binding({"first phrase", "second phrase"})}});
  CHECK(r.user.find("- first phrase") != std::string::npos);
  CHECK(r.user.find("- second phrase") != std::string::npos);
  CHECK(r.user.find("{{") == std::string::npos);
}

TEST_CASE("missing variables are reported together") {
  try {
    render_prompt("initial_generation", {{"spec", "x"}});
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingVariable);
    std::string msg = e.what();
    CHECK(msg.find("design_context") != std::string::npos);
    CHECK(msg.find("retrieved_context") != std::string::npos);
  }
}

TEST_CASE("mock provider replays installed fixtures and misses loudly") {
  fs::path dir = fresh_dir("nl2sva_mock_test");
  std::map<std::string, std::string> bindings = {{"spec", "some property"}};
  mock_install(dir.string(), "keyword_extraction", bindings, "[\"a phrase\"]");

  // The key is a pure function of template and bindings.
  CHECK(mock_key("keyword_extraction", bindings) ==
        mock_key("keyword_extraction", bindings));
  CHECK(mock_key("keyword_extraction", bindings) !=
        mock_key("sva_rechecking", bindings));

  MockChatProvider provider(dir.string());
  ChatExchange ex =
      provider.complete(render_prompt("keyword_extraction", bindings), {});
  CHECK(ex.response == "[\"a phrase\"]");
  CHECK(ex.provider == "mock");

  auto index = nlohmann::json::parse(slurp(dir / "index.json"));
  std::string key = mock_key("keyword_extraction", bindings);
  REQUIRE(index.contains(key));
  CHECK(index[key]["template_id"] == "keyword_extraction");

  try {
    provider.complete(
        render_prompt("keyword_extraction", {{"spec", "unseen"}}), {});
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MockMiss);
    std::string msg = e.what();
    CHECK(msg.find(mock_key("keyword_extraction", {{"spec", "unseen"}})) !=
          std::string::npos);
    CHECK(msg.find("keyword_extraction") != std::string::npos);
  }
  fs::remove_all(dir);

  try {
    MockChatProvider missing((dir / "nope").string());
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidConfig);
  }
}

TEST_CASE("gateway appends transcripts without timestamps") {
  fs::path dir = fresh_dir("nl2sva_transcript_test");
  mock_install(dir.string(), "keyword_extraction", {{"spec", "p"}}, "[\"k\"]");
  fs::path transcript = dir / "log.jsonl";
  Gateway gateway(std::make_shared<MockChatProvider>(dir.string()),
                  transcript.string());
  gateway.complete(render_prompt("keyword_extraction", {{"spec", "p"}}));
  gateway.complete(render_prompt("keyword_extraction", {{"spec", "p"}}));

  std::ifstream in(transcript);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    auto j = nlohmann::json::parse(line);
    CHECK(j["template_id"] == "keyword_extraction");
    CHECK(j["provider"] == "mock");
    CHECK(j.contains("system"));
    CHECK(j.contains("user"));
    CHECK(j.contains("response"));
    CHECK(j.contains("retries"));
    CHECK_FALSE(j.contains("timestamp"));
  }
  CHECK(lines == 2);
  fs::remove_all(dir);
}

TEST_CASE("http chat provider retries 5xx with backoff then succeeds") {
  TestServer ts;
  std::atomic<int> calls{0};
  ts.server.Post("/v1/chat/completions",
                 [&](const httplib::Request& req, httplib::Response& res) {
                   auto body = nlohmann::json::parse(req.body);
                   CHECK(body["messages"].size() == 2);
                   if (++calls <= 2) {
                     res.status = 500;
                     res.set_content("overloaded", "text/plain");
                     return;
                   }
                   nlohmann::json reply = {
                       {"choices",
                        {{{"message", {{"content", "the reply text"}}}}}}};
                   res.set_content(reply.dump(), "application/json");
                 });
  ts.start();

  HttpChatConfig config;
  config.base_url = ts.url();
  config.backoff_ms = 5;
  config.max_retries = 3;
  HttpChatProvider provider(config);
  ChatExchange ex =
      provider.complete(render_prompt("keyword_extraction", {{"spec", "x"}}),
                        {});
  CHECK(ex.response == "the reply text");
  CHECK(ex.retries == 2);
  CHECK(calls == 3);
}

TEST_CASE("http chat provider gives up after max_retries attempts") {
  TestServer ts;
  std::atomic<int> calls{0};
  ts.server.Post("/v1/chat/completions",
                 [&](const httplib::Request&, httplib::Response& res) {
                   ++calls;
                   res.status = 503;
                 });
  ts.start();

  HttpChatConfig config;
  config.base_url = ts.url();
  config.backoff_ms = 1;
  config.max_retries = 2;
  HttpChatProvider provider(config);
  try {
    provider.complete(render_prompt("keyword_extraction", {{"spec", "x"}}), {});
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Provider);
    CHECK(std::string(e.what()).find("503") != std::string::npos);
  }
  CHECK(calls == 3); // first attempt plus two retries
}

TEST_CASE("http chat provider rejects 4xx and malformed replies immediately") {
  TestServer ts;
  std::atomic<int> calls{0};
  std::atomic<int> status{401};
  ts.server.Post("/v1/chat/completions",
                 [&](const httplib::Request&, httplib::Response& res) {
                   ++calls;
                   res.status = status;
                   res.set_content(status == 200 ? "not json at all" : "denied",
                                   "text/plain");
                 });
  ts.start();

  HttpChatConfig config;
  config.base_url = ts.url();
  config.backoff_ms = 1;
  HttpChatProvider provider(config);
  auto prompt = render_prompt("keyword_extraction", {{"spec", "x"}});

  try {
    provider.complete(prompt, {});
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Provider);
  }
  CHECK(calls == 1); // no retry on a definite rejection

  status = 200;
  try {
    provider.complete(prompt, {});
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedResponse);
  }

  // Structurally wrong JSON is also malformed.
  TestServer ts2;
  ts2.server.Post("/v1/chat/completions",
                  [&](const httplib::Request&, httplib::Response& res) {
                    res.set_content(R"({"choices": []})", "application/json");
                  });
  ts2.start();
  config.base_url = ts2.url();
  HttpChatProvider provider2(config);
  try {
    provider2.complete(prompt, {});
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedResponse);
  }
}

TEST_CASE("http embedder learns its dimension and re-normalizes") {
  TestServer ts;
  ts.server.Post("/v1/embeddings",
                 [&](const httplib::Request& req, httplib::Response& res) {
                   auto body = nlohmann::json::parse(req.body);
                   nlohmann::json data = nlohmann::json::array();
                   for (std::size_t i = 0; i < body["input"].size(); ++i)
                     data.push_back({{"embedding", {3.0, 4.0, 0.0}}});
                   res.set_content(nlohmann::json{{"data", data}}.dump(),
                                   "application/json");
                 });
  ts.start();

  HttpEmbedderConfig config;
  config.base_url = ts.url();
  config.backoff_ms = 1;
  HttpEmbedder embedder(config);
  auto v = embedder.embed("some text");
  REQUIRE(v.size() == 3);
  CHECK(v[0] == doctest::Approx(0.6f));
  CHECK(v[1] == doctest::Approx(0.8f));
  CHECK(embedder.dim() == 3);

  auto batch = embedder.embed_batch({"a", "b"});
  CHECK(batch.size() == 2);
}

TEST_CASE("assertion extraction prefers fenced code blocks") {
  std::string fenced =
      "Sure, here it is:\n```systemverilog\nassert property (@(posedge clk) "
      "a |-> b);\n```\nHope that helps.";
  CHECK(extract_sva_from_response(fenced) ==
        "assert property (@(posedge clk) a |-> b);");

  // A fence without an assertion is skipped in favor of a bare statement.
  std::string mixed =
      "```\nmodule m;\n```\nassert property (@(posedge clk) x |=> y);";
  CHECK(extract_sva_from_response(mixed) ==
        "assert property (@(posedge clk) x |=> y);");
}

TEST_CASE("assertion extraction keeps labels and spans lines") {
  std::string labeled =
      "```\np_handshake: assert property (@(posedge clk)\n  req |=>\n  ack\n"
      ");\n```";
  CHECK(extract_sva_from_response(labeled) ==
        "p_handshake: assert property (@(posedge clk)\n  req |=>\n  ack\n);");

  std::string prose_prefix =
      "The fix is assert property (@(posedge clk) a |-> b); as shown.";
  CHECK(extract_sva_from_response(prose_prefix) ==
        "assert property (@(posedge clk) a |-> b);");

  try {
    extract_sva_from_response("no assertion in sight");
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoAssertionFound);
  }
}

TEST_CASE("string list parsing takes JSON first, lines second") {
  auto json_list = parse_string_list("Keywords:\n[\"one\", \"two words\"]\n");
  REQUIRE(json_list.size() == 2);
  CHECK(json_list[1] == "two words");

  auto lines = parse_string_list("- first\n* second\n3. third\n\"fourth\"\n");
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "first");
  CHECK(lines[1] == "second");
  CHECK(lines[2] == "third");
  CHECK(lines[3] == "fourth");

  try {
    parse_string_list("   \n \n");
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedResponse);
  }
}

TEST_CASE("string map parsing preserves insertion order") {
  auto pairs = parse_string_map(
      R"({"zeta phrase": "##N", "alpha phrase": "$rose"})");
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].first == "zeta phrase");
  CHECK(pairs[0].second == "##N");
  CHECK(pairs[1].first == "alpha phrase");

  auto arrows = parse_string_map("one phrase -> $stable\nother -> |=>\n");
  REQUIRE(arrows.size() == 2);
  CHECK(arrows[0].second == "$stable");

  try {
    parse_string_map("nothing mappable");
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedResponse);
  }
}
