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

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cellops::rag {

inline constexpr std::size_t kWindowTerms = 256;
inline constexpr std::size_t kWindowOverlap = 32;

struct Token {
  std::string term;
  std::size_t begin = 0;  // byte offsets into the tokenized text
  std::size_t end = 0;
};

/// Lowercases ASCII and splits on whitespace and ASCII punctuation. Bytes
/// >= 0x80 are kept inside terms so UTF-8 words survive intact. No stemming,
/// no stopwords.
std::vector<Token> tokenize_with_offsets(std::string_view text);
std::vector<std::string> tokenize(std::string_view text);

struct DocChunk {
  std::string doc_id;
  std::string chunk_id;
  std::vector<std::string> heading_path;
  std::string text;
  std::map<std::string, int> term_counts;
  int length_terms = 0;

  bool operator==(const DocChunk&) const = default;
};

/// Splits at lines starting with '#', then windows any segment longer than
/// 256 terms into 256-term windows overlapping by 32. Throws
/// Error("empty-document") when the text holds no terms.
std::vector<DocChunk> chunk_document(const std::string& doc_id, std::string_view text);

struct ScoredChunk {
  std::string chunk_id;
  double score = 0.0;

  bool operator==(const ScoredChunk&) const = default;
};

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

/// Immutable BM25 index over a set of chunks.
class Index {
 public:
  /// Throws Error("duplicate-chunk-id").
  static Index build(std::vector<DocChunk> chunks, Bm25Params params = {});

  std::span<const DocChunk> chunks() const { return chunks_; }
  const DocChunk* find(std::string_view chunk_id) const;
  int doc_freq(const std::string& term) const;
  double avg_chunk_length() const { return avg_chunk_length_; }
  const Bm25Params& params() const { return params_; }

  /// ln(1 + (N - df + 0.5) / (df + 0.5)); never negative.
  double idf(const std::string& term) const;

  /// Okapi BM25 of `chunk` (which must belong to this index) for the query
  /// terms; every occurrence of a repeated query term counts.
  double bm25_score(std::span<const std::string> query_terms, const DocChunk& chunk) const;

  /// Top-k chunks by score, descending, ties by ascending chunk_id, zero
  /// scores dropped. Scores through the postings lists rather than a scan.
  std::vector<ScoredChunk> retrieve(std::string_view query, std::size_t k) const;

 private:
  struct Posting {
    std::uint32_t chunk;
    std::uint32_t tf;
  };

  double term_weight(double idf, int tf, int length) const;

  std::vector<DocChunk> chunks_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  double avg_chunk_length_ = 0.0;
  Bm25Params params_;
};

/// Abstract text-to-vector service. Implementations signal failure by
/// throwing.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) = 0;
};

struct RerankResult {
  std::vector<ScoredChunk> candidates;
  bool degraded = false;
};

/// Stable reorder by descending cosine similarity to the query. Fails open:
/// any provider failure (exception, wrong vector count) returns the input
/// order with degraded = true.
RerankResult embed_rerank(const Index& index, std::string_view query, std::vector<ScoredChunk> candidates,
                          EmbeddingProvider* provider);

struct IngestReport {
  struct Doc {
    std::string doc_id;
    std::size_t chunks = 0;
  };
  std::vector<Doc> docs;
  std::vector<std::string> skipped;  // empty or unreadable files
  std::vector<DocChunk> chunks;
};

/// Walks `root` for .md/.markdown/.txt files in path order; doc_id is the
/// path relative to `root` with '/' separators.
IngestReport ingest_directory(const std::filesystem::path& root);

void save_index(const Index& index, const std::filesystem::path& path);
Index load_index(const std::filesystem::path& path);

/// Holder for the live index: readers take a shared snapshot, the single
/// writer swaps a freshly built index in.
class KnowledgeBase {
 public:
  explicit KnowledgeBase(std::shared_ptr<const Index> index = std::make_shared<const Index>(Index::build({})))
      : index_(std::move(index)) {}

  std::shared_ptr<const Index> current() const {
    std::lock_guard lock(mu_);
    return index_;
  }
  void swap(std::shared_ptr<const Index> next) {
    std::lock_guard lock(mu_);
    index_ = std::move(next);
  }

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const Index> index_;
};

}  // namespace cellops::rag
