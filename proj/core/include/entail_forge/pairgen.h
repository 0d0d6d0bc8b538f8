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

#ifndef ENTAIL_FORGE_PAIRGEN_H_
#define ENTAIL_FORGE_PAIRGEN_H_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "entail_forge/cluster.h"
#include "entail_forge/embed.h"
#include "entail_forge/ingest.h"

namespace entail_forge::pairgen {

enum class Label { kEntailment, kContradiction };

std::string_view label_name(Label label);
// Throws DataError for anything but "entailment" / "contradiction".
Label parse_label(std::string_view name);

struct Provenance {
  std::string premise_article_id;
  std::size_t premise_para_idx = 0;
  std::string hypothesis_article_id;
  std::size_t hypothesis_para_idx = 0;

  friend bool operator==(const Provenance&, const Provenance&) = default;
  friend auto operator<=>(const Provenance&, const Provenance&) = default;
};

struct NLIPair {
  std::string premise;
  std::string hypothesis;
  Label label = Label::kEntailment;
  Provenance provenance;

  friend bool operator==(const NLIPair&, const NLIPair&) = default;
};

// Paragraph i as premise, paragraph i + 1 as hypothesis, for every i.
std::vector<NLIPair> gen_entailments(const ingest::Article& article);
// gen_entailments over all articles, concatenated in article order.
std::vector<NLIPair> gen_entailment_pool(const std::vector<ingest::Article>& articles);

struct ContradictionParams {
  std::size_t count = 0;
  double threshold = cluster::kDefaultThreshold;
  std::uint64_t seed = 0;
  std::size_t max_retries_per_pair = 100;
};

// Each pair: two distinct clusters drawn uniformly, one article uniformly
// from each, re-checked with are_dissimilar, then one paragraph uniformly
// from each (the first draw is the premise). A draw that fails the check or
// repeats an already emitted provenance is retried. Only clusters holding an
// article with paragraphs and a non-degenerate vector take part.
// Throws DataError with fewer than 2 such clusters or when a pair exhausts
// its retry budget.
std::vector<NLIPair> gen_contradictions(const std::vector<ingest::Article>& articles,
                                        const std::vector<cluster::Cluster>& clusters,
                                        const embed::DocVectorMap& vectors,
                                        const ContradictionParams& params);

// per_class drawn without replacement from each pool, union shuffled.
std::vector<NLIPair> assemble_dataset(const std::vector<NLIPair>& entailment_pool,
                                      const std::vector<NLIPair>& contradiction_pool,
                                      std::size_t per_class, std::uint64_t seed);

// Either three ratios or three absolute counts.
struct SplitSizes {
  double train = 0.70;
  double validation = 0.15;
  double test = 0.15;
  bool ratios = true;

  static SplitSizes from_ratios(double train, double validation, double test);
  static SplitSizes from_counts(std::size_t train, std::size_t validation,
                                std::size_t test);

  // Counts for a dataset of n pairs. Ratios are floored; if they sum to 1
  // the remainder goes to train. Throws DataError when counts exceed n.
  std::array<std::size_t, 3> resolve(std::size_t n) const;
};

struct SplitOptions {
  SplitSizes sizes;
  std::uint64_t seed = 0;
  bool stratify = true;
  // Keep all pairs sharing a premise article in one split. Sizes become
  // targets met greedily by whole groups; stratification is not applied.
  bool article_disjoint = false;
};

struct DatasetSplits {
  std::vector<NLIPair> train;
  std::vector<NLIPair> validation;
  std::vector<NLIPair> test;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> config;
};

// Seeded shuffle then contiguous slicing. With stratify, each label is
// sliced separately so every split is balanced within one pair.
DatasetSplits split_dataset(const std::vector<NLIPair>& pairs,
                            const SplitOptions& options);

std::size_t count_label(const std::vector<NLIPair>& pairs, Label label);

// One JSON object per line: premise, hypothesis, label, meta{...}.
void write_pairs(std::ostream& out, const std::vector<NLIPair>& pairs);
std::vector<NLIPair> read_pairs(std::istream& in, const std::string& source_name);
std::vector<NLIPair> read_pairs(const std::filesystem::path& path);

// premise<TAB>hypothesis<TAB>label; backslash, tab and newline escaped.
std::string escape_tsv(std::string_view text);
void write_pairs_tsv(std::ostream& out, const std::vector<NLIPair>& pairs);

inline constexpr std::array<std::string_view, 3> kSplitNames = {
    "train", "validation", "test"};

// Writes train/validation/test .jsonl (and .tsv when requested) into dir.
void write_splits(const std::filesystem::path& dir, const DatasetSplits& splits,
                  bool tsv);
DatasetSplits read_splits(const std::filesystem::path& dir);

}  // namespace entail_forge::pairgen

#endif  // ENTAIL_FORGE_PAIRGEN_H_
