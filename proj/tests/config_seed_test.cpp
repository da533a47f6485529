// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "nl2sva/config.hpp"
#include "nl2sva/seed.hpp"

using namespace nl2sva;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const std::string& name, const std::string& body) {
  fs::path path = fs::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out << body;
  return path;
}

void expect_invalid(const std::string& body) {
  fs::path path = write_config("nl2sva_bad_config.json", body);
  try {
    load_config(path.string());
    FAIL("expected Error for config " << body);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidConfig);
  }
  fs::remove(path);
}

std::map<std::string, std::string> dir_bytes(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    out[fs::relative(entry.path(), root).string()] = buf.str();
  }
  return out;
}

} // namespace

TEST_CASE("config files override defaults and keep the rest") {
  fs::path path = write_config("nl2sva_config.json", R"({
  "provider": "http",
  "chat_http": {"base_url": "http://example.invalid:1", "max_retries": 5},
  "embedding_dim": 64,
  "retrieval": {"k_global": 4, "rank_by": "keyword"},
  "equivalence": {"max_len": 3},
  "store_dir": "elsewhere/store"
})");
  AppConfig config = load_config(path.string());
  CHECK(config.provider == "http");
  CHECK(config.chat_http.base_url == "http://example.invalid:1");
  CHECK(config.chat_http.max_retries == 5);
  CHECK(config.chat_http.path == "/v1/chat/completions");
  CHECK(config.embedding_dim == 64);
  CHECK(config.retrieval.k_global == 4);
  CHECK(config.retrieval.k_per_op == 2);
  CHECK(config.retrieval.rank_by == "keyword");
  CHECK(config.equivalence.max_len == 3);
  CHECK(config.store_dir == "elsewhere/store");
  CHECK(config.dataset_dir == "fixtures/dataset");
  CHECK(config.mock_dir == "fixtures/mock");
  fs::remove(path);

  AppConfig defaults;
  CHECK_NOTHROW(validate_config(defaults));
}

TEST_CASE("config loading rejects unknown keys and bad values") {
  try {
    load_config((fs::temp_directory_path() / "nl2sva_missing.json").string());
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidConfig);
  }
  expect_invalid("not json");
  expect_invalid("[1, 2]");
  expect_invalid(R"({"providr": "mock"})");
  expect_invalid(R"({"chat_http": {"url": "x"}})");
  expect_invalid(R"({"provider": "llama"})");
  expect_invalid(R"({"embedding_provider": "random"})");
  expect_invalid(R"({"embedding_dim": 0})");
  expect_invalid(R"({"retrieval": {"rank_by": "alphabetical"}})");
  expect_invalid(R"({"retrieval": {"k_global": 0}})");
  expect_invalid(R"({"recheck_max_iters": 0})");
  expect_invalid(R"({"equivalence": {"max_len": 0}})");
  expect_invalid(R"({"equivalence": {"workers": 0}})");

  fs::path typo = write_config("nl2sva_typo.json", R"({"providr": "mock"})");
  try {
    load_config(typo.string());
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("providr") != std::string::npos);
  }
  fs::remove(typo);
}

TEST_CASE("seeding the demo collateral is deterministic and idempotent") {
  AppConfig first;
  first.store_dir = (fs::temp_directory_path() / "nl2sva_seed1/store").string();
  first.mock_dir = (fs::temp_directory_path() / "nl2sva_seed1/mock").string();
  AppConfig second;
  second.store_dir =
      (fs::temp_directory_path() / "nl2sva_seed2/store").string();
  second.mock_dir = (fs::temp_directory_path() / "nl2sva_seed2/mock").string();
  fs::remove_all(fs::temp_directory_path() / "nl2sva_seed1");
  fs::remove_all(fs::temp_directory_path() / "nl2sva_seed2");

  SeedReport r1 = seed_demo(first, "fixtures");
  SeedReport r2 = seed_demo(second, "fixtures");
  CHECK(r1.document_count == 7);
  CHECK(r1.chunk_count == 10);
  CHECK(r1.fixture_count == 62);
  CHECK(r2.fixture_count == r1.fixture_count);

  CHECK(dir_bytes(first.store_dir) == dir_bytes(second.store_dir));
  CHECK(dir_bytes(first.mock_dir) == dir_bytes(second.mock_dir));

  // Running again over existing output must not change a byte.
  auto before = dir_bytes(first.mock_dir);
  seed_demo(first, "fixtures");
  CHECK(dir_bytes(first.mock_dir) == before);

  fs::remove_all(fs::temp_directory_path() / "nl2sva_seed1");
  fs::remove_all(fs::temp_directory_path() / "nl2sva_seed2");
}

TEST_CASE("seeding reproduces the fixtures shipped with the repository") {
  AppConfig config;
  config.store_dir =
      (fs::temp_directory_path() / "nl2sva_seed_ship/store").string();
  config.mock_dir =
      (fs::temp_directory_path() / "nl2sva_seed_ship/mock").string();
  fs::remove_all(fs::temp_directory_path() / "nl2sva_seed_ship");
  seed_demo(config, "fixtures");

  auto seeded = dir_bytes(config.mock_dir);
  auto shipped = dir_bytes("fixtures/mock");
  REQUIRE(seeded.size() == shipped.size());
  for (const auto& [name, bytes] : shipped) {
    REQUIRE(seeded.count(name));
    if (name != "index.json") CHECK(seeded[name] == bytes);
  }
  auto seeded_index = nlohmann::json::parse(seeded["index.json"]);
  auto shipped_index = nlohmann::json::parse(shipped["index.json"]);
  CHECK(seeded_index == shipped_index);

  fs::remove_all(fs::temp_directory_path() / "nl2sva_seed_ship");
}
