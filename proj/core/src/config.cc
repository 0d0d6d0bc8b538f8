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

#include "entail_forge/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <unordered_map>

#include "entail_forge/error.h"

namespace entail_forge {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value,
                            std::string_view expected) {
  throw UsageError("config key '" + std::string(key) + "': invalid value '" +
                   std::string(value) + "' (expected " + std::string(expected) + ")");
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    bad_value(key, v, "a non-negative integer");
  }
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty() ||
      !std::isfinite(out)) {
    bad_value(key, v, "a number");
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v, "true or false");
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

using Setter = std::function<void(PipelineConfig&, std::string_view, std::string_view)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"input_path", [](auto& c, auto, auto v) { c.input_path = std::string(v); }},
      {"output_dir", [](auto& c, auto, auto v) { c.output_dir = std::string(v); }},
      {"seed", [](auto& c, auto k, auto v) { c.seed = to_u64(k, v); }},
      {"threads",
       [](auto& c, auto k, auto v) { c.threads = static_cast<int>(to_u64(k, v)); }},
      {"deterministic", [](auto& c, auto k, auto v) { c.deterministic = to_bool(k, v); }},
      {"embedder",
       [](auto& c, auto k, auto v) {
         if (v == "pvdbow") c.embedder = EmbedderKind::kPvDbow;
         else if (v == "tfidf") c.embedder = EmbedderKind::kTfidf;
         else bad_value(k, v, "pvdbow or tfidf");
       }},
      {"dim", [](auto& c, auto k, auto v) { c.dim = to_u64(k, v); }},
      {"negatives", [](auto& c, auto k, auto v) { c.negatives = to_u64(k, v); }},
      {"epochs", [](auto& c, auto k, auto v) { c.epochs = to_u64(k, v); }},
      {"lr_start", [](auto& c, auto k, auto v) { c.lr_start = to_double(k, v); }},
      {"lr_end", [](auto& c, auto k, auto v) { c.lr_end = to_double(k, v); }},
      {"min_count", [](auto& c, auto k, auto v) { c.min_count = to_u64(k, v); }},
      {"noise_exponent", [](auto& c, auto k, auto v) { c.noise_exponent = to_double(k, v); }},
      {"stopwords_path", [](auto& c, auto, auto v) { c.stopwords_path = std::string(v); }},
      {"idf_min", [](auto& c, auto k, auto v) { c.idf_min = to_double(k, v); }},
      {"tfidf_min_count", [](auto& c, auto k, auto v) { c.tfidf_min_count = to_u64(k, v); }},
      {"lowercase", [](auto& c, auto k, auto v) { c.lowercase = to_bool(k, v); }},
      {"min_tokens", [](auto& c, auto k, auto v) { c.min_tokens = to_u64(k, v); }},
      {"drop_empty", [](auto& c, auto k, auto v) { c.drop_empty = to_bool(k, v); }},
      {"n_trees", [](auto& c, auto k, auto v) { c.n_trees = to_u64(k, v); }},
      {"leaf_size", [](auto& c, auto k, auto v) { c.leaf_size = to_u64(k, v); }},
      {"search_k",
       [](auto& c, auto k, auto v) {
         if (v == "auto") c.search_k.reset();
         else c.search_k = to_u64(k, v);
       }},
      {"threshold", [](auto& c, auto k, auto v) { c.threshold = to_double(k, v); }},
      {"k_neighbors", [](auto& c, auto k, auto v) { c.k_neighbors = to_u64(k, v); }},
      {"per_class", [](auto& c, auto k, auto v) { c.per_class = to_u64(k, v); }},
      {"contradiction_pool",
       [](auto& c, auto k, auto v) { c.contradiction_pool = to_u64(k, v); }},
      {"max_retries", [](auto& c, auto k, auto v) { c.max_retries = to_u64(k, v); }},
      {"split_train", [](auto& c, auto k, auto v) { c.split.train = to_double(k, v); }},
      {"split_val", [](auto& c, auto k, auto v) { c.split.validation = to_double(k, v); }},
      {"split_test", [](auto& c, auto k, auto v) { c.split.test = to_double(k, v); }},
      {"stratify", [](auto& c, auto k, auto v) { c.stratify = to_bool(k, v); }},
      {"article_disjoint", [](auto& c, auto k, auto v) { c.article_disjoint = to_bool(k, v); }},
      {"write_tsv", [](auto& c, auto k, auto v) { c.write_tsv = to_bool(k, v); }},
      {"pcts", [](auto& c, auto, auto v) { c.pcts = parse_pct_list(v); }},
      {"baseline_epochs", [](auto& c, auto k, auto v) { c.baseline_epochs = to_u64(k, v); }},
      {"baseline_lr", [](auto& c, auto k, auto v) { c.baseline_lr = to_double(k, v); }},
      {"baseline_l2", [](auto& c, auto k, auto v) { c.baseline_l2 = to_double(k, v); }},
  };
  return table;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw InvariantError("number formatting failed");
  return std::string(buf, end);
}

std::vector<double> parse_pct_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const std::string item = trim(text.substr(pos, comma - pos));
    const double pct = to_double("pcts", item);
    if (!(pct > 0.0 && pct <= 100.0)) bad_value("pcts", item, "percentages in (0, 100]");
    out.push_back(pct);
    pos = comma + 1;
  }
  return out;
}

const std::vector<std::string>& PipelineConfig::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [key, setter] : setters()) n.push_back(key);
    return n;
  }();
  return names;
}

void PipelineConfig::set(std::string_view key, std::string_view value) {
  for (const auto& [name, setter] : setters()) {
    if (name == key) {
      setter(*this, key, trim(value));
      return;
    }
  }
  throw UsageError("unknown config key '" + std::string(key) + "'");
}

void PipelineConfig::load(std::istream& in, const std::string& source_name) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw UsageError(source_name + ":" + std::to_string(line_no) +
                       ": expected key = value");
    }
    try {
      set(trim(std::string_view(t).substr(0, eq)), std::string_view(t).substr(eq + 1));
    } catch (const UsageError& e) {
      throw UsageError(source_name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void PipelineConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file: " + path.string());
  load(in, path.string());
}

void PipelineConfig::validate() const {
  pvdbow_params().validate();
  if (threads < 1) throw UsageError("threads must be >= 1");
  if (!(idf_min >= 0.0)) throw UsageError("idf_min must be >= 0");
  if (tfidf_min_count < 1) throw UsageError("tfidf_min_count must be >= 1");
  if (n_trees < 1) throw UsageError("n_trees must be >= 1");
  if (leaf_size < 1) throw UsageError("leaf_size must be >= 1");
  if (search_k && *search_k < 1) throw UsageError("search_k must be >= 1");
  if (!(threshold >= -1.0 && threshold <= 1.0)) {
    throw UsageError("threshold must lie in [-1, 1]");
  }
  if (k_neighbors < 1) throw UsageError("k_neighbors must be >= 1");
  if (per_class < 1) throw UsageError("per_class must be >= 1");
  if (contradiction_pool != 0 && contradiction_pool < per_class) {
    throw UsageError("contradiction_pool must be 0 or >= per_class");
  }
  if (max_retries < 1) throw UsageError("max_retries must be >= 1");
  if (split.train < 0 || split.validation < 0 || split.test < 0) {
    throw UsageError("split sizes must be non-negative");
  }
  (void)split_options();
  if (pcts.empty()) throw UsageError("pcts must not be empty");
  if (baseline_epochs < 1 || !(baseline_lr > 0.0) || !(baseline_l2 >= 0.0)) {
    throw UsageError("need baseline_epochs >= 1, baseline_lr > 0, baseline_l2 >= 0");
  }
}

std::map<std::string, std::string> PipelineConfig::effective() const {
  std::map<std::string, std::string> m;
  m["input_path"] = input_path.string();
  m["output_dir"] = output_dir.string();
  m["seed"] = std::to_string(seed);
  m["threads"] = std::to_string(threads);
  m["deterministic"] = bool_str(deterministic);
  m["embedder"] = embedder == EmbedderKind::kPvDbow ? "pvdbow" : "tfidf";
  m["dim"] = std::to_string(dim);
  m["negatives"] = std::to_string(negatives);
  m["epochs"] = std::to_string(epochs);
  m["lr_start"] = format_number(lr_start);
  m["lr_end"] = format_number(lr_end);
  m["min_count"] = std::to_string(min_count);
  m["noise_exponent"] = format_number(noise_exponent);
  m["stopwords_path"] = stopwords_path.string();
  m["idf_min"] = format_number(idf_min);
  m["tfidf_min_count"] = std::to_string(tfidf_min_count);
  m["lowercase"] = bool_str(lowercase);
  m["min_tokens"] = std::to_string(min_tokens);
  m["drop_empty"] = bool_str(drop_empty);
  m["n_trees"] = std::to_string(n_trees);
  m["leaf_size"] = std::to_string(leaf_size);
  m["search_k"] = search_k ? std::to_string(*search_k) : "auto";
  m["threshold"] = format_number(threshold);
  m["k_neighbors"] = std::to_string(k_neighbors);
  m["per_class"] = std::to_string(per_class);
  m["contradiction_pool"] = std::to_string(contradiction_pool);
  m["max_retries"] = std::to_string(max_retries);
  m["split_train"] = format_number(split.train);
  m["split_val"] = format_number(split.validation);
  m["split_test"] = format_number(split.test);
  m["stratify"] = bool_str(stratify);
  m["article_disjoint"] = bool_str(article_disjoint);
  m["write_tsv"] = bool_str(write_tsv);
  std::string p;
  for (std::size_t i = 0; i < pcts.size(); ++i) {
    if (i > 0) p += ",";
    p += format_number(pcts[i]);
  }
  m["pcts"] = p;
  m["baseline_epochs"] = std::to_string(baseline_epochs);
  m["baseline_lr"] = format_number(baseline_lr);
  m["baseline_l2"] = format_number(baseline_l2);
  return m;
}

embed::PvDbowParams PipelineConfig::pvdbow_params() const {
  embed::PvDbowParams p;
  p.dim = dim;
  p.negatives = negatives;
  p.epochs = epochs;
  p.lr_start = lr_start;
  p.lr_end = lr_end;
  p.min_count = min_count;
  p.noise_exponent = noise_exponent;
  p.seed = embed_seed();
  p.threads = threads;
  p.deterministic = deterministic;
  return p;
}

annindex::ForestParams PipelineConfig::forest_params() const {
  return {n_trees, leaf_size, forest_seed(), threads};
}

cluster::GraphParams PipelineConfig::graph_params() const {
  return {k_neighbors, threshold, search_k, threads};
}

ingest::IngestOptions PipelineConfig::ingest_options() const {
  return {min_tokens, drop_empty};
}

baseline::TrainConfig PipelineConfig::baseline_config() const {
  return {baseline_epochs, baseline_lr, baseline_l2, baseline_seed()};
}

pairgen::SplitOptions PipelineConfig::split_options() const {
  pairgen::SplitOptions o;
  // Any size above 1 switches all three to absolute counts.
  const bool counts = split.train > 1.0 || split.validation > 1.0 || split.test > 1.0;
  if (counts) {
    for (double v : {split.train, split.validation, split.test}) {
      if (v != std::floor(v)) {
        throw UsageError("split sizes mix counts and ratios");
      }
    }
    o.sizes = pairgen::SplitSizes::from_counts(static_cast<std::size_t>(split.train),
                                               static_cast<std::size_t>(split.validation),
                                               static_cast<std::size_t>(split.test));
  } else {
    o.sizes = pairgen::SplitSizes::from_ratios(split.train, split.validation, split.test);
  }
  o.seed = shuffle_seed();
  o.stratify = stratify;
  o.article_disjoint = article_disjoint;
  return o;
}

}  // namespace entail_forge
