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

#include "entail_forge/ingest.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <regex>
#include <unordered_set>

#include "entail_forge/error.h"
#include "entail_forge/textproc.h"

namespace entail_forge::ingest {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

std::optional<std::string> optional_string(const json& record,
                                           const char* key,
                                           const std::string& at) {
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw DataError(at + "field \"" + key + "\" must be a string");
  }
  return it->get<std::string>();
}

std::string required_string(const json& record, const char* key,
                            const std::string& at) {
  auto value = optional_string(record, key, at);
  if (!value) throw DataError(at + "missing required field \"" + key + "\"");
  return *value;
}

bool is_iso_date(const std::string& s) {
  static const std::regex kDate(
      R"(\d{4}-\d{2}-\d{2}([T ]\d{2}:\d{2}(:\d{2}(\.\d+)?)?(Z|[+-]\d{2}:?\d{2})?)?)");
  return std::regex_match(s, kDate);
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  std::int32_t n = 0;
  UBool error = false;
  U8_APPEND(reinterpret_cast<uint8_t*>(buf), n, U8_MAX_LENGTH, c, error);
  if (!error) out.append(buf, static_cast<std::size_t>(n));
}

std::string trim_spaces(std::string_view s) {
  const auto first = s.find_first_not_of(' ');
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(' ');
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

std::vector<RawArticle> parse_articles(std::istream& in,
                                       const std::string& source_name) {
  std::vector<RawArticle> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const std::string at = where(source_name, line_no);
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(at + "malformed record: " + e.what());
    }
    if (!record.is_object()) throw DataError(at + "record is not an object");
    RawArticle a;
    a.id = required_string(record, "id", at);
    if (a.id.empty()) throw DataError(at + "empty id");
    a.body = required_string(record, "body", at);
    a.title = optional_string(record, "title", at);
    a.source = optional_string(record, "source", at).value_or("");
    a.published = optional_string(record, "published", at);
    if (a.published && !is_iso_date(*a.published)) {
      throw DataError(at + "field \"published\" is not an ISO-8601 date: " +
                      *a.published);
    }
    if (!seen.insert(a.id).second) {
      throw DataError(at + "duplicate id \"" + a.id + "\"");
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<RawArticle> load_articles(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read input file: " + path.string());
  return parse_articles(in, path.string());
}

std::string clean_text(std::string_view raw) {
  // Pass 1: character-class filtering and line-break/space mapping.
  std::string mapped;
  mapped.reserve(raw.size());
  const auto* s = reinterpret_cast<const uint8_t*>(raw.data());
  const auto length = static_cast<std::int32_t>(raw.size());
  std::int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) continue;
    if (c == '\r') {
      if (i < length && s[i] == '\n') continue;
      mapped.push_back('\n');
      continue;
    }
    if (c == '\n' || c == 0x85 || c == 0x2028 || c == 0x2029) {
      mapped.push_back('\n');
      continue;
    }
    if (c == '\t' || c == 0x0b || c == 0x0c) {
      mapped.push_back(' ');
      continue;
    }
    const auto category = u_charType(c);
    if (category == U_CONTROL_CHAR || category == U_FORMAT_CHAR) continue;
    if (category == U_SPACE_SEPARATOR) {
      mapped.push_back(' ');
      continue;
    }
    append_utf8(mapped, c);
  }

  // Pass 2: canonical composition.
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw InvariantError("ICU NFC normalizer unavailable");
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(mapped.data(), static_cast<int32_t>(mapped.size())));
  icu::UnicodeString normalized = nfc->normalize(u, status);
  if (U_FAILURE(status)) throw InvariantError("ICU NFC normalization failed");
  std::string composed;
  normalized.toUTF8String(composed);

  // Pass 3: collapse space runs.
  std::string out;
  out.reserve(composed.size());
  for (char ch : composed) {
    if (ch == ' ' && !out.empty() && out.back() == ' ') continue;
    out.push_back(ch);
  }
  return out;
}

std::vector<std::string> segment_paragraphs(std::string_view cleaned_body,
                                            std::size_t min_tokens) {
  std::vector<std::string> paragraphs;
  std::size_t pos = 0;
  while (pos <= cleaned_body.size()) {
    auto nl = cleaned_body.find('\n', pos);
    if (nl == std::string_view::npos) nl = cleaned_body.size();
    std::string piece = trim_spaces(cleaned_body.substr(pos, nl - pos));
    if (!piece.empty() &&
        textproc::tokenize(piece, /*lowercase=*/false).size() >= min_tokens) {
      paragraphs.push_back(std::move(piece));
    }
    pos = nl + 1;
  }
  return paragraphs;
}

Article to_article(const RawArticle& raw, const IngestOptions& options) {
  Article a;
  a.id = raw.id;
  if (raw.title) a.title = trim_spaces(clean_text(*raw.title));
  a.source = raw.source;
  a.paragraphs = segment_paragraphs(clean_text(raw.body), options.min_tokens);
  return a;
}

std::vector<Article> ingest_articles(const std::vector<RawArticle>& raws,
                                     const IngestOptions& options) {
  std::vector<Article> out;
  out.reserve(raws.size());
  for (const auto& raw : raws) {
    Article a = to_article(raw, options);
    if (options.drop_empty && a.paragraphs.empty()) continue;
    out.push_back(std::move(a));
  }
  return out;
}

void write_articles(std::ostream& out, const std::vector<Article>& articles) {
  for (const auto& a : articles) {
    ordered_json record;
    record["id"] = a.id;
    record["title"] = a.title ? ordered_json(*a.title) : ordered_json(nullptr);
    record["source"] = a.source;
    record["paragraphs"] = a.paragraphs;
    out << record.dump() << '\n';
  }
}

std::vector<Article> read_articles(std::istream& in,
                                   const std::string& source_name) {
  std::vector<Article> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const std::string at = where(source_name, line_no);
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(at + "malformed record: " + e.what());
    }
    if (!record.is_object()) throw DataError(at + "record is not an object");
    Article a;
    a.id = required_string(record, "id", at);
    a.title = optional_string(record, "title", at);
    a.source = optional_string(record, "source", at).value_or("");
    auto it = record.find("paragraphs");
    if (it == record.end() || !it->is_array()) {
      throw DataError(at + "missing \"paragraphs\" array");
    }
    for (const auto& p : *it) {
      if (!p.is_string() || p.get<std::string>().empty()) {
        throw DataError(at + "paragraphs must be non-empty strings");
      }
      a.paragraphs.push_back(p.get<std::string>());
    }
    if (!seen.insert(a.id).second) {
      throw DataError(at + "duplicate id \"" + a.id + "\"");
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<Article> read_articles(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read articles file: " + path.string());
  return read_articles(in, path.string());
}

}  // namespace entail_forge::ingest
