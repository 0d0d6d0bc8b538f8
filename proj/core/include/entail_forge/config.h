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

#ifndef ENTAIL_FORGE_CONFIG_H_
#define ENTAIL_FORGE_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entail_forge/annindex.h"
#include "entail_forge/baseline.h"
#include "entail_forge/cluster.h"
#include "entail_forge/embed.h"
#include "entail_forge/ingest.h"
#include "entail_forge/pairgen.h"
#include "entail_forge/textproc.h"

namespace entail_forge {

enum class EmbedderKind { kPvDbow, kTfidf };

// Every tunable of the pipeline. Loaded from a flat `key = value` file
// ('#' comments allowed); command-line flags are applied afterwards through
// set() and therefore take precedence.
struct PipelineConfig {
  std::filesystem::path input_path;
  std::filesystem::path output_dir;
  std::uint64_t seed = 42;
  int threads = 1;
  bool deterministic = true;

  EmbedderKind embedder = EmbedderKind::kPvDbow;
  std::size_t dim = 100;
  std::size_t negatives = 5;
  std::size_t epochs = 20;
  double lr_start = 0.025;
  double lr_end = 0.0001;
  std::uint64_t min_count = 5;
  double noise_exponent = 0.75;

  std::filesystem::path stopwords_path;
  double idf_min = 0.6931;
  std::uint64_t tfidf_min_count = 1;
  bool lowercase = true;

  std::size_t min_tokens = 3;
  bool drop_empty = false;

  std::size_t n_trees = 32;
  std::size_t leaf_size = 30;
  std::optional<std::size_t> search_k;  // unset: n_trees * k * 32

  double threshold = cluster::kDefaultThreshold;
  std::size_t k_neighbors = 20;

  std::size_t per_class = 300000;
  std::size_t contradiction_pool = 0;  // 0: same as per_class
  std::size_t max_retries = 100;
  pairgen::SplitSizes split;
  bool stratify = true;
  bool article_disjoint = false;
  bool write_tsv = false;

  std::vector<double> pcts = {100, 50, 30, 10, 1};
  std::size_t baseline_epochs = 5;
  double baseline_lr = 0.1;
  double baseline_l2 = 1e-6;

  // Throws UsageError for unknown keys and unparsable values.
  void set(std::string_view key, std::string_view value);
  void load(std::istream& in, const std::string& source_name);
  void load_file(const std::filesystem::path& path);

  // Cross-field checks; throws UsageError.
  void validate() const;

  // Canonical string of every key, defaults included.
  std::map<std::string, std::string> effective() const;

  static const std::vector<std::string>& keys();

  // Independent per-stage streams derived from the single seed.
  std::uint64_t embed_seed() const { return seed + 1; }
  std::uint64_t forest_seed() const { return seed + 2; }
  std::uint64_t contradiction_seed() const { return seed + 3; }
  std::uint64_t shuffle_seed() const { return seed + 4; }
  std::uint64_t subsample_seed() const { return seed + 5; }
  std::uint64_t baseline_seed() const { return seed + 6; }

  embed::PvDbowParams pvdbow_params() const;
  annindex::ForestParams forest_params() const;
  cluster::GraphParams graph_params() const;
  ingest::IngestOptions ingest_options() const;
  baseline::TrainConfig baseline_config() const;
  pairgen::SplitOptions split_options() const;
};

// "100,50,30,10,1" -> {100, 50, 30, 10, 1}; throws UsageError.
std::vector<double> parse_pct_list(std::string_view text);
std::string format_number(double value);

}  // namespace entail_forge

#endif  // ENTAIL_FORGE_CONFIG_H_
