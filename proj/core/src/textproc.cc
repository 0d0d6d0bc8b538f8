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

#include "entail_forge/textproc.h"

#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/locid.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "entail_forge/error.h"

namespace entail_forge::textproc {
namespace {

bool is_word_char(UChar32 c) {
  if (c < 0x80) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9');
  }
  if (u_isalnum(c)) return true;
  const auto category = u_charType(c);
  return category == U_NON_SPACING_MARK || category == U_COMBINING_SPACING_MARK ||
         category == U_ENCLOSING_MARK || category == U_LETTER_NUMBER ||
         category == U_OTHER_NUMBER;
}

bool is_hyphen(UChar32 c) { return c == '-' || c == 0x2010 || c == 0x2011; }

// Decodes the code point at offset i; invalid bytes come back negative.
UChar32 peek(std::string_view text, std::int32_t i, std::int32_t* next) {
  UChar32 c;
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  U8_NEXT(s, i, length, c);
  *next = i;
  return c;
}

}  // namespace

std::string to_lower(std::string_view text) {
  const bool ascii = std::all_of(text.begin(), text.end(), [](char ch) {
    return static_cast<unsigned char>(ch) < 0x80;
  });
  if (ascii) {
    std::string out(text);
    for (char& ch : out) {
      if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    }
    return out;
  }
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  u.toLower(icu::Locale::getRoot());
  std::string out;
  u.toUTF8String(out);
  return out;
}

TokenList tokenize(std::string_view text, bool lowercase) {
  TokenList tokens;
  const auto length = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  std::int32_t start = -1;
  std::int32_t end = -1;
  auto flush = [&] {
    if (start >= 0) {
      std::string_view tok = text.substr(start, end - start);
      tokens.push_back(lowercase ? to_lower(tok) : std::string(tok));
      start = -1;
    }
  };
  while (i < length) {
    std::int32_t next;
    const UChar32 c = peek(text, i, &next);
    if (c >= 0 && is_word_char(c)) {
      if (start < 0) start = i;
      end = next;
    } else if (c >= 0 && is_hyphen(c) && start >= 0 && end == i &&
               next < length) {
      std::int32_t after;
      const UChar32 following = peek(text, next, &after);
      if (following >= 0 && is_word_char(following)) {
        end = next;
      } else {
        flush();
      }
    } else {
      flush();
    }
    i = next;
  }
  flush();
  return tokens;
}

Vocabulary Vocabulary::build(const std::vector<TokenList>& docs,
                             std::uint64_t min_count) {
  if (docs.empty()) throw DataError("build_vocab: empty corpus");
  struct Counts {
    std::uint64_t df = 0;
    std::uint64_t cf = 0;
    std::size_t last_doc = SIZE_MAX;
  };
  std::map<std::string, Counts, std::less<>> counts;
  std::uint64_t total = 0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& tok : docs[d]) {
      auto& c = counts[tok];
      ++c.cf;
      if (c.last_doc != d) {
        ++c.df;
        c.last_doc = d;
      }
      ++total;
    }
  }
  Vocabulary v;
  v.n_docs_ = docs.size();
  v.total_token_count_ = total;
  for (auto& [term, c] : counts) {
    if (c.cf < min_count) continue;
    const auto id = static_cast<std::uint32_t>(v.terms_.size());
    v.index_.emplace(term, id);
    v.terms_.push_back(term);
    v.doc_freq_.push_back(c.df);
    v.corpus_freq_.push_back(c.cf);
  }
  return v;
}

Vocabulary Vocabulary::from_parts(std::vector<std::string> terms,
                                  std::vector<std::uint64_t> doc_freq,
                                  std::vector<std::uint64_t> corpus_freq,
                                  std::uint64_t n_docs,
                                  std::uint64_t total_token_count) {
  if (terms.size() != doc_freq.size() || terms.size() != corpus_freq.size()) {
    throw DataError("vocabulary: inconsistent part sizes");
  }
  Vocabulary v;
  v.n_docs_ = n_docs;
  v.total_token_count_ = total_token_count;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (doc_freq[i] < 1 || doc_freq[i] > n_docs) {
      throw DataError("vocabulary: df out of range for term '" + terms[i] + "'");
    }
    if (!v.index_.emplace(terms[i], static_cast<std::uint32_t>(i)).second) {
      throw DataError("vocabulary: duplicate term '" + terms[i] + "'");
    }
  }
  v.terms_ = std::move(terms);
  v.doc_freq_ = std::move(doc_freq);
  v.corpus_freq_ = std::move(corpus_freq);
  return v;
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double idf(std::uint32_t term_id, const Vocabulary& vocab) {
  if (term_id >= vocab.size()) {
    throw DataError("idf: term id " + std::to_string(term_id) +
                    " not in vocabulary");
  }
  return std::log(static_cast<double>(vocab.n_docs()) /
                  static_cast<double>(vocab.df(term_id)));
}

double idf(std::string_view term, const Vocabulary& vocab) {
  auto id = vocab.find(term);
  if (!id) throw DataError("idf: unknown term '" + std::string(term) + "'");
  return idf(*id, vocab);
}

StopwordSet parse_stopwords(std::istream& in) {
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    words.insert(line.substr(first, last - first + 1));
  }
  return words;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read stopword file: " + path.string());
  return parse_stopwords(in);
}

TokenList filter_function_words(const TokenList& tokens,
                                const Vocabulary& vocab,
                                const StopwordSet& stopwords, double idf_min) {
  TokenList kept;
  kept.reserve(tokens.size());
  for (const auto& tok : tokens) {
    if (stopwords.contains(tok)) continue;
    auto id = vocab.find(tok);
    if (!id) continue;
    if (idf(*id, vocab) < idf_min) continue;
    kept.push_back(tok);
  }
  return kept;
}

SparseVector tfidf_vector(const TokenList& tokens, const Vocabulary& vocab) {
  std::map<std::uint32_t, std::uint64_t> counts;
  for (const auto& tok : tokens) {
    if (auto id = vocab.find(tok)) ++counts[*id];
  }
  SparseVector v;
  for (const auto& [id, count] : counts) {
    const double w = static_cast<double>(count) * idf(id, vocab);
    if (w != 0.0) v.entries.emplace_back(id, w);
  }
  normalize(v);
  return v;
}

}  // namespace entail_forge::textproc
