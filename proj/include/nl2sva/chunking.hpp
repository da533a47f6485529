// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nl2sva/errors.hpp"

namespace nl2sva {

struct SourceDocument {
  enum class Format { Markdown, Plaintext };
  std::string doc_id;
  Format format = Format::Markdown;
  std::string text;
};

struct ByteSpan {
  std::size_t begin = 0;
  std::size_t end = 0; // exclusive
};

/// One retrieval unit. Code chunks carry the paragraph immediately before
/// and after the code block; text chunks are fixed-size windows.
struct Chunk {
  enum class Kind { Code, Text };
  std::string chunk_id;
  std::string doc_id;
  Kind kind = Kind::Code;
  std::string pre;  // code chunks only, possibly empty
  std::string code; // code chunks only
  std::string post; // code chunks only, possibly empty
  std::string text; // text chunks only
  ByteSpan span;

  /// The text handed to the embedder and the prompt assembler.
  std::string retrieval_text() const;
};

/// Finds code blocks: fenced ``` blocks in markdown (spans cover the fenced
/// content, not the fences); in plaintext, maximal runs of lines indented by
/// at least four spaces or starting with a SystemVerilog keyword, kept when
/// the run contains a keyword or spans two or more indented lines.
std::vector<ByteSpan> detect_code_blocks(const SourceDocument& doc);

/// Code-centric splitting: one chunk per code block with the nearest
/// paragraph before and after it. A paragraph between two code blocks lands
/// in both chunks. Prose not adjacent to any code block is discarded.
std::vector<Chunk> dynamic_split(const SourceDocument& doc);

/// Fixed-size sliding windows of `size` code points advancing by
/// size - overlap. Throws Error(InvalidConfig) when size <= overlap.
std::vector<Chunk> static_split(const SourceDocument& doc, std::size_t size,
                                std::size_t overlap);

} // namespace nl2sva
