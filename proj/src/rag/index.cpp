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
#include <cmath>

#include "cellops/error.hpp"
#include "cellops/rag.hpp"

namespace cellops::rag {
namespace {

bool ranks_before(const ScoredChunk& a, const ScoredChunk& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.chunk_id < b.chunk_id;
}

}  // namespace

Index Index::build(std::vector<DocChunk> chunks, Bm25Params params) {
  Index idx;
  idx.params_ = params;
  idx.chunks_ = std::move(chunks);
  double total_length = 0.0;
  for (std::size_t i = 0; i < idx.chunks_.size(); ++i) {
    const auto& c = idx.chunks_[i];
    if (!idx.by_id_.emplace(c.chunk_id, i).second) {
      throw Error("duplicate-chunk-id", "chunk id '" + c.chunk_id + "' appears twice");
    }
    total_length += c.length_terms;
    for (const auto& [term, tf] : c.term_counts) {
      idx.postings_[term].push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(tf)});
    }
  }
  if (!idx.chunks_.empty()) idx.avg_chunk_length_ = total_length / static_cast<double>(idx.chunks_.size());
  return idx;
}

const DocChunk* Index::find(std::string_view chunk_id) const {
  auto it = by_id_.find(std::string(chunk_id));
  return it == by_id_.end() ? nullptr : &chunks_[it->second];
}

int Index::doc_freq(const std::string& term) const {
  auto it = postings_.find(term);
  return it == postings_.end() ? 0 : static_cast<int>(it->second.size());
}

double Index::idf(const std::string& term) const {
  const double n = static_cast<double>(chunks_.size());
  const double df = doc_freq(term);
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double Index::term_weight(double idf, int tf, int length) const {
  const double norm = 1.0 - params_.b + params_.b * static_cast<double>(length) / avg_chunk_length_;
  return idf * (params_.k1 + 1.0) * tf / (tf + params_.k1 * norm);
}

double Index::bm25_score(std::span<const std::string> query_terms, const DocChunk& chunk) const {
  double score = 0.0;
  for (const auto& term : query_terms) {
    auto it = chunk.term_counts.find(term);
    if (it == chunk.term_counts.end() || it->second == 0) continue;
    score += term_weight(idf(term), it->second, chunk.length_terms);
  }
  return score;
}

std::vector<ScoredChunk> Index::retrieve(std::string_view query, std::size_t k) const {
  std::vector<double> acc(chunks_.size(), 0.0);
  std::vector<std::uint32_t> touched;
  for (const auto& term : tokenize(query)) {
    auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    const double w = idf(term);
    for (const auto& p : it->second) {
      if (acc[p.chunk] == 0.0) touched.push_back(p.chunk);
      acc[p.chunk] += term_weight(w, static_cast<int>(p.tf), chunks_[p.chunk].length_terms);
    }
  }

  std::vector<ScoredChunk> hits;
  hits.reserve(touched.size());
  for (auto i : touched) {
    if (acc[i] > 0.0) hits.push_back({chunks_[i].chunk_id, acc[i]});
  }
  const std::size_t keep = std::min(k, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end(), ranks_before);
  hits.resize(keep);
  return hits;
}

}  // namespace cellops::rag
