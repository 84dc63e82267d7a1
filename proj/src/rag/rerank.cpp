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

#include "cellops/rag.hpp"

namespace cellops::rag {
namespace {

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return 0.0;
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

RerankResult embed_rerank(const Index& index, std::string_view query, std::vector<ScoredChunk> candidates,
                          EmbeddingProvider* provider) {
  RerankResult out{std::move(candidates), false};
  if (out.candidates.empty()) return out;
  if (provider == nullptr) {
    out.degraded = true;
    return out;
  }

  std::vector<std::string> texts{std::string(query)};
  for (const auto& c : out.candidates) {
    const DocChunk* chunk = index.find(c.chunk_id);
    texts.push_back(chunk != nullptr ? chunk->text : std::string());
  }

  std::vector<std::vector<double>> vectors;
  try {
    vectors = provider->embed(texts);
  } catch (...) {
    out.degraded = true;
    return out;
  }
  if (vectors.size() != texts.size()) {
    out.degraded = true;
    return out;
  }

  std::vector<std::pair<double, ScoredChunk>> keyed;
  keyed.reserve(out.candidates.size());
  for (std::size_t i = 0; i < out.candidates.size(); ++i) {
    keyed.emplace_back(cosine(vectors[0], vectors[i + 1]), out.candidates[i]);
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; i < keyed.size(); ++i) out.candidates[i] = std::move(keyed[i].second);
  return out;
}

}  // namespace cellops::rag
