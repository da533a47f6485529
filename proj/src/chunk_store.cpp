// SPDX-License-Identifier: Apache-2.0

#include "nl2sva/chunk_store.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace nl2sva {

namespace {

constexpr const char* kStoreFormat = "nl2sva-chunk-store";
constexpr int kStoreVersion = 1;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

} // namespace

void ChunkStore::add(Chunk chunk) {
  if (find(chunk.chunk_id))
    throw Error(ErrorCode::Data, "duplicate chunk_id '" + chunk.chunk_id + "'");
  chunks_.push_back(std::move(chunk));
}

void ChunkStore::set_embedding(const std::string& chunk_id,
                               std::vector<float> values) {
  if (!find(chunk_id))
    throw Error(ErrorCode::Data,
                "embedding for unknown chunk_id '" + chunk_id + "'");
  for (auto& [id, vec] : embeddings_) {
    if (id == chunk_id) {
      vec = std::move(values);
      return;
    }
  }
  embeddings_.emplace_back(chunk_id, std::move(values));
}

const Chunk* ChunkStore::find(const std::string& chunk_id) const {
  for (const Chunk& c : chunks_)
    if (c.chunk_id == chunk_id) return &c;
  return nullptr;
}

const std::vector<float>* ChunkStore::embedding(
    const std::string& chunk_id) const {
  for (const auto& [id, vec] : embeddings_)
    if (id == chunk_id) return &vec;
  return nullptr;
}

void ChunkStore::save(const std::string& dir) const {
  fs::create_directories(dir);
  {
    std::ofstream out(fs::path(dir) / "chunks.jsonl", std::ios::trunc);
    if (!out)
      throw Error(ErrorCode::Io, "cannot write chunk store to " + dir);
    out << json{{"format", kStoreFormat}, {"version", kStoreVersion}}.dump()
        << '\n';
    for (const Chunk& c : chunks_) {
      json rec{{"chunk_id", c.chunk_id},
               {"doc_id", c.doc_id},
               {"kind", c.kind == Chunk::Kind::Code ? "code" : "text"},
               {"span", {{"begin", c.span.begin}, {"end", c.span.end}}}};
      if (c.kind == Chunk::Kind::Code) {
        rec["pre"] = c.pre;
        rec["code"] = c.code;
        rec["post"] = c.post;
      } else {
        rec["text"] = c.text;
      }
      out << rec.dump() << '\n';
    }
  }
  {
    std::ofstream out(fs::path(dir) / "embeddings.jsonl", std::ios::trunc);
    if (!out)
      throw Error(ErrorCode::Io, "cannot write embeddings to " + dir);
    for (const auto& [id, vec] : embeddings_) {
      json rec{{"chunk_id", id}, {"dim", vec.size()}, {"values", vec}};
      out << rec.dump() << '\n';
    }
  }
}

ChunkStore ChunkStore::load(const std::string& dir) {
  ChunkStore store;
  fs::path chunks_path = fs::path(dir) / "chunks.jsonl";
  std::ifstream in(chunks_path);
  if (!in)
    throw Error(ErrorCode::Io, "cannot open chunk store " + chunks_path.string());
  std::string line;
  bool header = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Data, "bad store record at line " +
                                       std::to_string(lineno) + ": " + e.what());
    }
    if (header) {
      if (rec.value("format", "") != kStoreFormat)
        throw Error(ErrorCode::Data,
                    "not a chunk store: missing format header");
      if (rec.value("version", 0) != kStoreVersion)
        throw Error(ErrorCode::Data,
                    "unsupported chunk store version " +
                        std::to_string(rec.value("version", 0)));
      header = false;
      continue;
    }
    Chunk c;
    c.chunk_id = rec.at("chunk_id").get<std::string>();
    c.doc_id = rec.at("doc_id").get<std::string>();
    c.kind = rec.at("kind").get<std::string>() == "code" ? Chunk::Kind::Code
                                                         : Chunk::Kind::Text;
    c.span.begin = rec.at("span").at("begin").get<std::size_t>();
    c.span.end = rec.at("span").at("end").get<std::size_t>();
    if (c.kind == Chunk::Kind::Code) {
      c.pre = rec.value("pre", "");
      c.code = rec.at("code").get<std::string>();
      c.post = rec.value("post", "");
    } else {
      c.text = rec.at("text").get<std::string>();
    }
    store.chunks_.push_back(std::move(c));
  }
  if (header)
    throw Error(ErrorCode::Data, "chunk store is empty (no header line)");

  fs::path emb_path = fs::path(dir) / "embeddings.jsonl";
  std::ifstream emb(emb_path);
  if (emb) {
    lineno = 0;
    while (std::getline(emb, line)) {
      ++lineno;
      if (line.empty()) continue;
      json rec;
      try {
        rec = json::parse(line);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::Data, "bad embedding record at line " +
                                         std::to_string(lineno) + ": " +
                                         e.what());
      }
      store.set_embedding(rec.at("chunk_id").get<std::string>(),
                          rec.at("values").get<std::vector<float>>());
    }
  }
  return store;
}

std::vector<SourceDocument> load_corpus(const std::string& corpus_dir) {
  if (!fs::is_directory(corpus_dir))
    throw Error(ErrorCode::Io, "corpus directory not found: " + corpus_dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(corpus_dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    if (ext == ".md" || ext == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<SourceDocument> docs;
  for (const fs::path& f : files) {
    SourceDocument doc;
    doc.doc_id = f.stem().string();
    doc.format = f.extension() == ".md" ? SourceDocument::Format::Markdown
                                        : SourceDocument::Format::Plaintext;
    doc.text = read_file(f);
    if (doc.text.empty())
      throw Error(ErrorCode::Data, "empty corpus document: " + f.string());
    docs.push_back(std::move(doc));
  }
  return docs;
}

} // namespace nl2sva
