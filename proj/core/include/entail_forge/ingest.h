// Copyright 2026 The entail-forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENTAIL_FORGE_INGEST_H_
#define ENTAIL_FORGE_INGEST_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace entail_forge::ingest {

struct RawArticle {
  std::string id;
  std::optional<std::string> title;
  std::string body;
  std::string source;
  std::optional<std::string> published;  // ISO-8601 date

  friend bool operator==(const RawArticle&, const RawArticle&) = default;
};

// A cleaned article: one entry per single-sentence paragraph, in body order.
struct Article {
  std::string id;
  std::optional<std::string> title;
  std::vector<std::string> paragraphs;
  std::string source;

  friend bool operator==(const Article&, const Article&) = default;
};

// Reads line-delimited JSON records with fields id, body (required) and
// title, source, published (optional). Blank lines are skipped. Malformed
// records raise DataError with the 1-based line number; a repeated id raises
// DataError naming it. `source_name` prefixes error messages.
std::vector<RawArticle> parse_articles(std::istream& in,
                                       const std::string& source_name);
std::vector<RawArticle> load_articles(const std::filesystem::path& path);

// Removes control characters other than '\n' and all format (Cf) characters,
// maps CRLF, lone CR, NEL and the Unicode line/paragraph separators to '\n',
// maps tabs and space separators to ' ', applies NFC and collapses runs of
// spaces. Invalid UTF-8 bytes are dropped.
std::string clean_text(std::string_view raw);

// Splits an already-cleaned body on runs of newlines, trims each piece and
// keeps those with at least min_tokens tokens.
std::vector<std::string> segment_paragraphs(std::string_view cleaned_body,
                                            std::size_t min_tokens);

struct IngestOptions {
  std::size_t min_tokens = 3;
  bool drop_empty = false;  // drop articles left with zero paragraphs
};

Article to_article(const RawArticle& raw, const IngestOptions& options);
std::vector<Article> ingest_articles(const std::vector<RawArticle>& raws,
                                     const IngestOptions& options);

// Cleaned-article JSONL: {"id","title","source","paragraphs":[...]}.
void write_articles(std::ostream& out, const std::vector<Article>& articles);
std::vector<Article> read_articles(std::istream& in,
                                   const std::string& source_name);
std::vector<Article> read_articles(const std::filesystem::path& path);

}  // namespace entail_forge::ingest

#endif  // ENTAIL_FORGE_INGEST_H_
