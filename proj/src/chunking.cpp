// SPDX-License-Identifier: Apache-2.0

#include "nl2sva/chunking.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace nl2sva {

std::string Chunk::retrieval_text() const {
  if (kind == Kind::Text) return text;
  std::string out;
  if (!pre.empty()) out += pre;
  if (!code.empty()) {
    if (!out.empty()) out += "\n\n";
    out += code;
  }
  if (!post.empty()) {
    if (!out.empty()) out += "\n\n";
    out += post;
  }
  return out;
}

namespace {

struct Line {
  std::size_t begin = 0;
  std::size_t end = 0; // exclusive, includes the trailing newline if present
  std::size_t content_end = 0; // end without the newline
};

std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    Line l;
    l.begin = pos;
    if (nl == std::string::npos) {
      l.content_end = text.size();
      l.end = text.size();
    } else {
      l.content_end = nl;
      l.end = nl + 1;
    }
    lines.push_back(l);
    pos = l.end;
  }
  return lines;
}

bool is_blank(const std::string& text, const Line& l) {
  for (std::size_t i = l.begin; i < l.content_end; ++i)
    if (!std::isspace(static_cast<unsigned char>(text[i]))) return false;
  return true;
}

bool is_heading(const std::string& text, const Line& l) {
  std::size_t i = l.begin;
  while (i < l.content_end &&
         std::isspace(static_cast<unsigned char>(text[i])))
    ++i;
  return i < l.content_end && text[i] == '#';
}

bool is_fence(const std::string& text, const Line& l) {
  std::size_t i = l.begin;
  while (i < l.content_end && (text[i] == ' ' || text[i] == '\t')) ++i;
  return i + 3 <= l.content_end && text.compare(i, 3, "```") == 0;
}

constexpr std::array<const char*, 10> kCodeKeywords = {
    "module", "assert", "always",  "assign",  "property",
    "endmodule", "initial", "wire", "reg",     "logic"};

bool starts_with_keyword(const std::string& text, const Line& l) {
  std::size_t i = l.begin;
  while (i < l.content_end &&
         std::isspace(static_cast<unsigned char>(text[i])))
    ++i;
  std::size_t start = i;
  while (i < l.content_end &&
         (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
    ++i;
  std::string word = text.substr(start, i - start);
  return std::find_if(kCodeKeywords.begin(), kCodeKeywords.end(),
                      [&word](const char* k) { return word == k; }) !=
         kCodeKeywords.end();
}

bool is_indented4(const std::string& text, const Line& l) {
  if (is_blank(text, l)) return false;
  std::size_t spaces = 0;
  for (std::size_t i = l.begin; i < l.content_end; ++i) {
    if (text[i] == ' ')
      ++spaces;
    else if (text[i] == '\t')
      spaces += 4;
    else
      break;
  }
  return spaces >= 4;
}

std::vector<ByteSpan> detect_markdown(const SourceDocument& doc,
                                      const std::vector<Line>& lines) {
  std::vector<ByteSpan> spans;
  std::size_t i = 0;
  while (i < lines.size()) {
    if (!is_fence(doc.text, lines[i])) {
      ++i;
      continue;
    }
    std::size_t content_begin = lines[i].end;
    std::size_t j = i + 1;
    while (j < lines.size() && !is_fence(doc.text, lines[j])) ++j;
    std::size_t content_end =
        j < lines.size() ? lines[j].begin : doc.text.size();
    spans.push_back({content_begin, content_end});
    i = j < lines.size() ? j + 1 : j;
  }
  return spans;
}

std::vector<ByteSpan> detect_plaintext(const SourceDocument& doc,
                                       const std::vector<Line>& lines) {
  std::vector<ByteSpan> spans;
  std::size_t i = 0;
  while (i < lines.size()) {
    bool codeish = !is_blank(doc.text, lines[i]) &&
                   (is_indented4(doc.text, lines[i]) ||
                    starts_with_keyword(doc.text, lines[i]));
    if (!codeish) {
      ++i;
      continue;
    }
    std::size_t start = i;
    int keyword_lines = 0;
    int indented_lines = 0;
    while (i < lines.size() && !is_blank(doc.text, lines[i]) &&
           (is_indented4(doc.text, lines[i]) ||
            starts_with_keyword(doc.text, lines[i]))) {
      if (starts_with_keyword(doc.text, lines[i])) ++keyword_lines;
      if (is_indented4(doc.text, lines[i])) ++indented_lines;
      ++i;
    }
    if (keyword_lines >= 1 || indented_lines >= 2)
      spans.push_back({lines[start].begin, lines[i - 1].end});
  }
  return spans;
}

struct Paragraph {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Paragraphs of the prose outside code spans. Heading lines delimit
/// paragraphs and never join one.
std::vector<Paragraph> collect_paragraphs(const SourceDocument& doc,
                                          const std::vector<Line>& lines,
                                          const std::vector<ByteSpan>& code) {
  auto in_code = [&code](const Line& l) {
    for (const ByteSpan& s : code)
      if (l.begin < s.end && l.end > s.begin) return true;
    return false;
  };
  auto is_md_fence = [&](const Line& l) {
    return doc.format == SourceDocument::Format::Markdown &&
           is_fence(doc.text, l);
  };

  std::vector<Paragraph> paras;
  std::size_t i = 0;
  while (i < lines.size()) {
    const Line& l = lines[i];
    if (is_blank(doc.text, l) || is_heading(doc.text, l) || in_code(l) ||
        is_md_fence(l)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < lines.size() && !is_blank(doc.text, lines[i]) &&
           !is_heading(doc.text, lines[i]) && !in_code(lines[i]) &&
           !is_md_fence(lines[i]))
      ++i;
    paras.push_back({lines[start].begin, lines[i - 1].content_end});
  }
  return paras;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

} // namespace

std::vector<ByteSpan> detect_code_blocks(const SourceDocument& doc) {
  std::vector<Line> lines = split_lines(doc.text);
  return doc.format == SourceDocument::Format::Markdown
             ? detect_markdown(doc, lines)
             : detect_plaintext(doc, lines);
}

std::vector<Chunk> dynamic_split(const SourceDocument& doc) {
  std::vector<Line> lines = split_lines(doc.text);
  std::vector<ByteSpan> code = detect_code_blocks(doc);
  std::vector<Paragraph> paras = collect_paragraphs(doc, lines, code);

  std::vector<Chunk> chunks;
  for (std::size_t k = 0; k < code.size(); ++k) {
    const ByteSpan& span = code[k];
    Chunk c;
    c.chunk_id = doc.doc_id + "#c" + std::to_string(k);
    c.doc_id = doc.doc_id;
    c.kind = Chunk::Kind::Code;
    c.span = span;
    // Kept verbatim so the span-to-code correspondence is exact.
    c.code = doc.text.substr(span.begin, span.end - span.begin);

    const Paragraph* before = nullptr;
    const Paragraph* after = nullptr;
    for (const Paragraph& p : paras) {
      if (p.end <= span.begin && (!before || p.begin > before->begin))
        before = &p;
      if (p.begin >= span.end && !after) after = &p;
    }
    if (before)
      c.pre = trim(doc.text.substr(before->begin, before->end - before->begin));
    if (after)
      c.post = trim(doc.text.substr(after->begin, after->end - after->begin));
    chunks.push_back(std::move(c));
  }
  return chunks;
}

std::vector<Chunk> static_split(const SourceDocument& doc, std::size_t size,
                                std::size_t overlap) {
  if (size <= overlap)
    throw Error(ErrorCode::InvalidConfig,
                "static split size must exceed overlap");

  // Byte offsets of each code point start, plus the end sentinel.
  std::vector<std::size_t> cp;
  for (std::size_t i = 0; i < doc.text.size();) {
    cp.push_back(i);
    unsigned char b = static_cast<unsigned char>(doc.text[i]);
    std::size_t adv = b < 0x80 ? 1 : b < 0xE0 ? 2 : b < 0xF0 ? 3 : 4;
    i += adv;
  }
  cp.push_back(doc.text.size());
  std::size_t n_points = cp.size() - 1;

  std::vector<Chunk> chunks;
  std::size_t step = size - overlap;
  std::size_t start = 0;
  std::size_t index = 0;
  while (true) {
    std::size_t end = std::min(n_points, start + size);
    Chunk c;
    c.chunk_id = doc.doc_id + "#s" + std::to_string(index++);
    c.doc_id = doc.doc_id;
    c.kind = Chunk::Kind::Text;
    c.span = {cp[start], cp[end]};
    c.text = doc.text.substr(cp[start], cp[end] - cp[start]);
    chunks.push_back(std::move(c));
    if (end >= n_points) break;
    start += step;
  }
  return chunks;
}

} // namespace nl2sva
