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
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cellops/error.hpp"
#include "cellops/rag.hpp"

namespace cellops::rag {
namespace fs = std::filesystem;

namespace {

constexpr int kIndexFormatVersion = 1;

bool is_knowledge_file(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".md" || ext == ".markdown" || ext == ".txt";
}

}  // namespace

IngestReport ingest_directory(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw Error("io-error", "not a directory: " + root.string());

  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && is_knowledge_file(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  IngestReport report;
  for (const auto& file : files) {
    const std::string doc_id = fs::relative(file, root).generic_string();
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      report.skipped.push_back(doc_id);
      continue;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      auto chunks = chunk_document(doc_id, buf.str());
      report.docs.push_back({doc_id, chunks.size()});
      std::move(chunks.begin(), chunks.end(), std::back_inserter(report.chunks));
    } catch (const Error&) {
      report.skipped.push_back(doc_id);
    }
  }
  return report;
}

void save_index(const Index& index, const fs::path& path) {
  nlohmann::json chunks = nlohmann::json::array();
  for (const auto& c : index.chunks()) {
    chunks.push_back({{"doc_id", c.doc_id},
                      {"chunk_id", c.chunk_id},
                      {"heading_path", c.heading_path},
                      {"text", c.text},
                      {"term_counts", c.term_counts},
                      {"length_terms", c.length_terms}});
  }
  nlohmann::json doc{{"version", kIndexFormatVersion},
                     {"k1", index.params().k1},
                     {"b", index.params().b},
                     {"chunks", std::move(chunks)}};
  std::ofstream out(path);
  if (!out) throw Error("io-error", "cannot write index " + path.string());
  out << doc.dump(1) << '\n';
}

Index load_index(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot read index " + path.string());
  try {
    const auto doc = nlohmann::json::parse(in);
    if (doc.at("version").get<int>() != kIndexFormatVersion) throw Error("bad-index", "unsupported index version");
    std::vector<DocChunk> chunks;
    for (const auto& j : doc.at("chunks")) {
      DocChunk c;
      c.doc_id = j.at("doc_id").get<std::string>();
      c.chunk_id = j.at("chunk_id").get<std::string>();
      c.heading_path = j.at("heading_path").get<std::vector<std::string>>();
      c.text = j.at("text").get<std::string>();
      c.term_counts = j.at("term_counts").get<std::map<std::string, int>>();
      c.length_terms = j.at("length_terms").get<int>();
      chunks.push_back(std::move(c));
    }
    return Index::build(std::move(chunks), {doc.at("k1").get<double>(), doc.at("b").get<double>()});
  } catch (const nlohmann::json::exception& ex) {
    throw Error("bad-index", path.string() + ": " + ex.what());
  }
}

}  // namespace cellops::rag
