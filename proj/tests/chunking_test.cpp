// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "nl2sva/chunk_store.hpp"

using namespace nl2sva;
namespace fs = std::filesystem;

namespace {

SourceDocument md(const std::string& id, const std::string& text) {
  return {id, SourceDocument::Format::Markdown, text};
}

std::string fenced(const std::string& code) {
  return "```systemverilog\n" + code + "```\n";
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

} // namespace

TEST_CASE("dynamic splitting yields one chunk per code block") {
  // Synthetic documents with 0..4 fenced blocks in assorted arrangements.
  struct Doc {
    std::string text;
    std::size_t blocks;
  };
  std::string p = "Some prose paragraph about assertions.\n";
  std::string c = fenced("assert property (@(posedge clk) a |-> b);\n");
  std::vector<Doc> docs = {
      {p, 0},
      {c, 1},
      {p + "\n" + c, 1},
      {c + "\n" + p, 1},
      {p + "\n" + c + "\n" + p, 1},
      {c + "\n" + c, 2},
      {p + "\n" + c + "\n" + p + "\n" + c + "\n" + p, 2},
      {"# Heading\n\n" + p + "\n" + c + "\n## Sub\n\n" + c, 2},
      {c + "\n" + p + "\n" + c + "\n" + p + "\n" + c, 3},
      {p + "\n" + c + "\n" + c + "\n" + p + "\n" + c + "\n" + p + "\n" + c, 4},
  };
  REQUIRE(docs.size() == 10);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    SourceDocument doc = md("doc" + std::to_string(i), docs[i].text);
    CHECK(detect_code_blocks(doc).size() == docs[i].blocks);
    CHECK(dynamic_split(doc).size() == docs[i].blocks);
  }
}

TEST_CASE("paragraph-code-paragraph collapses into one three-part chunk") {
  SourceDocument doc = md(
      "pcp",
      "Before the code there is an introduction paragraph\nspanning two "
      "lines.\n\n" +
          fenced("assert property (@(posedge clk) req |=> ack);\n") +
          "\nAfter the code a short conclusion follows.\n");
  auto chunks = dynamic_split(doc);
  REQUIRE(chunks.size() == 1);
  const Chunk& c = chunks[0];
  CHECK(c.kind == Chunk::Kind::Code);
  CHECK(c.pre ==
        "Before the code there is an introduction paragraph\nspanning two "
        "lines.");
  CHECK(c.code == "assert property (@(posedge clk) req |=> ack);\n");
  CHECK(c.post == "After the code a short conclusion follows.");
  std::string joined = c.retrieval_text();
  CHECK(joined.find(c.pre) != std::string::npos);
  CHECK(joined.find(c.code) != std::string::npos);
  CHECK(joined.find(c.post) != std::string::npos);
}

TEST_CASE("a paragraph between two code blocks lands in both chunks") {
  SourceDocument doc =
      md("shared", "Intro paragraph.\n\n" + fenced("module a;\n") +
                       "\nShared middle paragraph.\n\n" + fenced("module b;\n") +
                       "\nClosing paragraph.\n");
  auto chunks = dynamic_split(doc);
  REQUIRE(chunks.size() == 2);
  CHECK(chunks[0].pre == "Intro paragraph.");
  CHECK(chunks[0].post == "Shared middle paragraph.");
  CHECK(chunks[1].pre == "Shared middle paragraph.");
  CHECK(chunks[1].post == "Closing paragraph.");
}

TEST_CASE("every detected code span appears verbatim in exactly one chunk") {
  SourceDocument doc =
      md("verbatim",
         "One.\n\n" + fenced("assert property (@(posedge clk) a |-> b);\n") +
             "\nTwo.\n\n" + fenced("wire x;\nassign x = a && b;\n") +
             "\nThree.\n");
  auto spans = detect_code_blocks(doc);
  auto chunks = dynamic_split(doc);
  REQUIRE(spans.size() == chunks.size());
  for (const ByteSpan& span : spans) {
    std::string text = doc.text.substr(span.begin, span.end - span.begin);
    std::size_t holders = 0;
    for (const Chunk& c : chunks)
      if (c.code == text) ++holders;
    CHECK(holders == 1);
  }
}

TEST_CASE("heading lines never join a paragraph") {
  SourceDocument doc = md("heads", "# Title\nActual prose line.\n\n" +
                                       fenced("module m;\n"));
  auto chunks = dynamic_split(doc);
  REQUIRE(chunks.size() == 1);
  CHECK(chunks[0].pre == "Actual prose line.");
}

TEST_CASE("prose not adjacent to any code block is discarded") {
  SourceDocument doc =
      md("faraway", "First paragraph.\n\nSecond paragraph.\n\n" +
                        fenced("module m;\n") + "\nThird.\n\nFourth.\n");
  auto chunks = dynamic_split(doc);
  REQUIRE(chunks.size() == 1);
  CHECK(chunks[0].pre == "Second paragraph.");
  CHECK(chunks[0].post == "Third.");
}

TEST_CASE("plaintext code detection needs a keyword or two indented lines") {
  SourceDocument doc{"plain", SourceDocument::Format::Plaintext,
                     "Prose describing the block.\n"
                     "\n"
                     "    module top(input clk);\n"
                     "    endmodule\n"
                     "\n"
                     "A single indented line without any keyword:\n"
                     "\n"
                     "    x + y\n"
                     "\n"
                     "assert property (@(posedge clk) a |-> b);\n"};
  auto spans = detect_code_blocks(doc);
  REQUIRE(spans.size() == 2);
  std::string first = doc.text.substr(spans[0].begin,
                                      spans[0].end - spans[0].begin);
  CHECK(first.find("module top") != std::string::npos);
  std::string second = doc.text.substr(spans[1].begin,
                                       spans[1].end - spans[1].begin);
  CHECK(second.find("assert property") != std::string::npos);
}

TEST_CASE("static splitting uses fixed windows with overlap") {
  std::string text(1000, 'x');
  for (std::size_t i = 0; i < text.size(); i += 7) text[i] = ' ';
  auto chunks = static_split(md("fixed", text), 400, 100);
  REQUIRE(chunks.size() == 3);
  CHECK(chunks[0].span.begin == 0);
  CHECK(chunks[0].span.end == 400);
  CHECK(chunks[1].span.begin == 300);
  CHECK(chunks[1].span.end == 700);
  CHECK(chunks[2].span.begin == 600);
  CHECK(chunks[2].span.end == 1000);
  for (const Chunk& c : chunks) {
    CHECK(c.kind == Chunk::Kind::Text);
    CHECK(c.text == text.substr(c.span.begin, c.span.end - c.span.begin));
  }
}

TEST_CASE("static splitting counts code points, not bytes") {
  // Two-byte code points: 10 of them with window 6/overlap 2 span
  // [0,6) and [4,10) in code points.
  std::string text;
  for (int i = 0; i < 10; ++i) text += "\xC3\xA9";
  auto chunks = static_split(md("utf8", text), 6, 2);
  REQUIRE(chunks.size() == 2);
  CHECK(chunks[0].text.size() == 12);
  CHECK(chunks[1].span.begin == 8);
}

TEST_CASE("static split size must exceed overlap") {
  for (auto [size, overlap] : {std::pair<std::size_t, std::size_t>{100, 100},
                               {100, 150}, {0, 0}}) {
    try {
      static_split(md("bad", "text"), size, overlap);
      FAIL("expected Error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidConfig);
    }
  }
}

TEST_CASE("chunk store round-trips through disk") {
  fs::path dir = fresh_dir("nl2sva_store_test");
  ChunkStore store;
  SourceDocument doc =
      md("roundtrip", "Pre paragraph.\n\n" + fenced("module m;\n") + "\nPost.\n");
  for (auto& chunk : dynamic_split(doc)) store.add(std::move(chunk));
  for (auto& chunk : static_split(md("windows", std::string(300, 'a')), 200, 50))
    store.add(std::move(chunk));
  store.set_embedding("roundtrip#c0", {0.6f, 0.8f});
  store.save(dir.string());

  ChunkStore loaded = ChunkStore::load(dir.string());
  REQUIRE(loaded.size() == store.size());
  for (const Chunk& c : store.chunks()) {
    const Chunk* l = loaded.find(c.chunk_id);
    REQUIRE(l != nullptr);
    CHECK(l->doc_id == c.doc_id);
    CHECK(l->kind == c.kind);
    CHECK(l->pre == c.pre);
    CHECK(l->code == c.code);
    CHECK(l->post == c.post);
    CHECK(l->text == c.text);
    CHECK(l->span.begin == c.span.begin);
    CHECK(l->span.end == c.span.end);
  }
  const std::vector<float>* emb = loaded.embedding("roundtrip#c0");
  REQUIRE(emb != nullptr);
  CHECK((*emb)[0] == doctest::Approx(0.6f));
  fs::remove_all(dir);
}

TEST_CASE("store load validates the header line") {
  fs::path dir = fresh_dir("nl2sva_store_header_test");
  {
    std::ofstream out(dir / "chunks.jsonl");
    out << R"({"format":"something-else","version":1})" << "\n";
  }
  try {
    ChunkStore::load(dir.string());
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Data);
  }
  {
    std::ofstream out(dir / "chunks.jsonl", std::ios::trunc);
    out << R"({"format":"nl2sva-chunk-store","version":99})" << "\n";
  }
  try {
    ChunkStore::load(dir.string());
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("version") != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("duplicate chunk ids are rejected") {
  ChunkStore store;
  Chunk c;
  c.chunk_id = "dup#c0";
  c.doc_id = "dup";
  c.code = "module m;";
  store.add(c);
  try {
    store.add(c);
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Data);
  }
}

TEST_CASE("load_corpus reads markdown and plaintext sorted by filename") {
  fs::path dir = fresh_dir("nl2sva_corpus_test");
  std::ofstream(dir / "b_doc.md") << "# B\n\nText.\n";
  std::ofstream(dir / "a_doc.txt") << "Plain text.\n";
  std::ofstream(dir / "ignored.sv") << "module m; endmodule\n";
  auto docs = load_corpus(dir.string());
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].doc_id == "a_doc");
  CHECK(docs[0].format == SourceDocument::Format::Plaintext);
  CHECK(docs[1].doc_id == "b_doc");
  CHECK(docs[1].format == SourceDocument::Format::Markdown);
  fs::remove_all(dir);
}
