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

#ifndef ENTAIL_FORGE_TEXTPROC_H_
#define ENTAIL_FORGE_TEXTPROC_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "entail_forge/vectors.h"

namespace entail_forge::textproc {

using TokenList = std::vector<std::string>;

// Splits on anything that is not a letter, digit or combining mark. A hyphen
// between two word characters stays inside the token ("covid-19"). Tokens are
// lowercased with root-locale Unicode case mapping when requested.
TokenList tokenize(std::string_view text, bool lowercase);

std::string to_lower(std::string_view text);

// Document-frequency table over a tokenized corpus. Term ids are dense and
// assigned in byte-wise lexicographic order of the terms, so the table does
// not depend on document order.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Throws DataError on an empty corpus. Terms whose corpus frequency is
  // below min_count are left out.
  static Vocabulary build(const std::vector<TokenList>& docs,
                          std::uint64_t min_count);

  // Reassembles a table from serialized parts; validates 1 <= df <= n_docs.
  static Vocabulary from_parts(std::vector<std::string> terms,
                               std::vector<std::uint64_t> doc_freq,
                               std::vector<std::uint64_t> corpus_freq,
                               std::uint64_t n_docs,
                               std::uint64_t total_token_count);

  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  std::optional<std::uint32_t> find(std::string_view term) const;
  bool contains(std::string_view term) const { return find(term).has_value(); }

  const std::string& term(std::uint32_t id) const { return terms_.at(id); }
  std::uint64_t df(std::uint32_t id) const { return doc_freq_.at(id); }
  std::uint64_t corpus_count(std::uint32_t id) const {
    return corpus_freq_.at(id);
  }
  std::uint64_t n_docs() const { return n_docs_; }
  std::uint64_t total_token_count() const { return total_token_count_; }

  const std::vector<std::string>& terms() const { return terms_; }

 private:
  std::vector<std::string> terms_;
  std::vector<std::uint64_t> doc_freq_;
  std::vector<std::uint64_t> corpus_freq_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::uint64_t n_docs_ = 0;
  std::uint64_t total_token_count_ = 0;
};

// ln(n_docs / df). Unknown terms throw DataError.
double idf(std::string_view term, const Vocabulary& vocab);
double idf(std::uint32_t term_id, const Vocabulary& vocab);

using StopwordSet = std::unordered_set<std::string>;

// One token per line, '#' lines and blank lines ignored, surrounding
// whitespace trimmed.
StopwordSet parse_stopwords(std::istream& in);
StopwordSet load_stopwords(const std::filesystem::path& path);

// Drops stopwords, out-of-vocabulary tokens and tokens with idf < idf_min.
TokenList filter_function_words(const TokenList& tokens,
                                const Vocabulary& vocab,
                                const StopwordSet& stopwords, double idf_min);

// count(t) * idf(t), L2-normalized. Out-of-vocabulary tokens are ignored.
SparseVector tfidf_vector(const TokenList& tokens, const Vocabulary& vocab);

struct TextOptions {
  bool lowercase = true;
  double idf_min = 0.6931;
  std::uint64_t min_count = 1;
  std::filesystem::path stopwords_path;
};

}  // namespace entail_forge::textproc

#endif  // ENTAIL_FORGE_TEXTPROC_H_
