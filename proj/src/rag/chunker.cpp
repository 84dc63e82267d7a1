/*
 * Copyright 2026 The cellops Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <utility>

#include "cellops/error.hpp"
#include "cellops/rag.hpp"

namespace cellops::rag {
namespace {

bool is_term_byte(unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; }

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<std::string> heading_path;
};

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<Segment> split_at_headings(std::string_view text) {
  std::vector<Segment> segments{{0, 0, {}}};
  std::vector<std::pair<int, std::string>> stack;  // (level, title)
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    if (text[pos] == '#') {
      segments.back().end = pos;
      int level = 0;
      while (pos + level < eol && text[pos + level] == '#') ++level;
      std::string title = trim(text.substr(pos + level, eol - pos - level));
      while (!stack.empty() && stack.back().first >= level) stack.pop_back();
      stack.emplace_back(level, title);
      Segment seg{pos, 0, {}};
      for (const auto& [_, t] : stack) seg.heading_path.push_back(t);
      segments.push_back(std::move(seg));
    }
    pos = eol + 1;
  }
  segments.back().end = text.size();
  return segments;
}

std::string make_chunk_id(const std::string& doc_id, std::size_t ordinal) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04zu", ordinal);
  return doc_id + "#" + buf;
}

}  // namespace

std::vector<Token> tokenize_with_offsets(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_term_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    Token tok;
    tok.begin = i;
    while (j < text.size() && is_term_byte(static_cast<unsigned char>(text[j]))) {
      const auto c = static_cast<unsigned char>(text[j]);
      tok.term.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
      ++j;
    }
    tok.end = j;
    out.push_back(std::move(tok));
    i = j;
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize_with_offsets(text)) out.push_back(std::move(t.term));
  return out;
}

std::vector<DocChunk> chunk_document(const std::string& doc_id, std::string_view text) {
  std::vector<DocChunk> chunks;
  for (const auto& seg : split_at_headings(text)) {
    const std::string_view body = text.substr(seg.begin, seg.end - seg.begin);
    const auto tokens = tokenize_with_offsets(body);
    if (tokens.empty()) continue;

    std::size_t start = 0;
    while (true) {
      const std::size_t stop = std::min(start + kWindowTerms, tokens.size());
      // Chunk text runs up to (not including) the next term so trailing
      // punctuation stays attached; the first window keeps the heading marker.
      const std::size_t text_begin = start == 0 ? 0 : tokens[start].begin;
      const std::size_t text_end = stop < tokens.size() ? tokens[stop].begin : body.size();

      DocChunk c;
      c.doc_id = doc_id;
      c.chunk_id = make_chunk_id(doc_id, chunks.size());
      c.heading_path = seg.heading_path;
      c.text = trim(body.substr(text_begin, text_end - text_begin));
      for (std::size_t i = start; i < stop; ++i) ++c.term_counts[tokens[i].term];
      c.length_terms = static_cast<int>(stop - start);
      chunks.push_back(std::move(c));

      if (stop == tokens.size()) break;
      start += kWindowTerms - kWindowOverlap;
    }
  }
  if (chunks.empty()) throw Error("empty-document", "document '" + doc_id + "' contains no terms");
  return chunks;
}

}  // namespace cellops::rag
