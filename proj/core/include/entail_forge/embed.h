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

#ifndef ENTAIL_FORGE_EMBED_H_
#define ENTAIL_FORGE_EMBED_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "entail_forge/ingest.h"
#include "entail_forge/textproc.h"
#include "entail_forge/vectors.h"

namespace entail_forge::embed {

struct PvDbowParams {
  std::size_t dim = 100;
  std::size_t negatives = 5;
  std::size_t epochs = 20;
  double lr_start = 0.025;
  double lr_end = 0.0001;
  std::uint64_t min_count = 5;
  double noise_exponent = 0.75;
  std::uint64_t seed = 1;
  // Lock-free multi-threaded SGD; only used when deterministic is false.
  int threads = 1;
  bool deterministic = true;

  // Throws UsageError unless dim >= 2, negatives >= 1, epochs >= 1 and
  // lr_start > lr_end > 0.
  void validate() const;
};

// A unit-norm article embedding. Degenerate vectors (zero mean, all tokens
// filtered) carry no direction and are excluded from indexing.
struct DocVector {
  std::string article_id;
  AnyVector components;
  bool is_degenerate = false;

  friend bool operator==(const DocVector&, const DocVector&) = default;
};

using DocVectorMap = std::map<std::string, DocVector>;

struct NegativeSamplingLoss {
  double loss = 0.0;
  DenseVector grad_v;
  DenseVector grad_pos;
  std::vector<DenseVector> grad_negs;
};

// loss = -log sigma(v.u_pos) - sum_k log sigma(-v.u_neg_k), with exact
// gradients for every input. Throws InvariantError on a dimension mismatch.
NegativeSamplingLoss negative_sampling_loss_grad(
    std::span<const double> v, std::span<const double> u_pos,
    const std::vector<std::span<const double>>& u_negs);

// One in-place SGD step on the loss above: outputs[0] is the observed word,
// the rest are noise words. Returns the loss before the step.
double negative_sampling_step(std::span<float> paragraph,
                              std::span<const std::span<float>> outputs,
                              float lr, std::span<float> scratch);

// Probability of each vocabulary id being drawn as a noise word,
// proportional to corpus_count^exponent.
std::vector<double> noise_distribution(const textproc::Vocabulary& vocab,
                                       double exponent);

struct TokenizedArticle {
  std::string id;
  std::vector<textproc::TokenList> paragraphs;
};

class EmbeddingModel {
 public:
  struct ArticleRows {
    std::size_t first = 0;
    std::size_t count = 0;
  };

  const PvDbowParams& params() const { return params_; }
  std::size_t dim() const { return params_.dim; }
  const textproc::Vocabulary& vocab() const { return vocab_; }
  std::size_t n_paragraphs() const { return trained_.size(); }

  std::span<const float> paragraph_vector(std::size_t row) const;
  std::span<const float> word_vector(std::size_t word_id) const;
  bool paragraph_trained(std::size_t row) const { return trained_.at(row) != 0; }
  const std::vector<double>& noise() const { return noise_; }

  // Mean training loss per (paragraph, word) position, one entry per epoch.
  const std::vector<double>& epoch_losses() const { return epoch_losses_; }

  const ArticleRows* find_article(std::string_view id) const;
  const std::vector<std::string>& article_ids() const { return article_ids_; }

  // Binary layout documented in docs/FORMATS.md. Round trips are bit-exact.
  void save(std::ostream& out) const;
  static EmbeddingModel load(std::istream& in, const std::string& source_name);

  friend bool operator==(const EmbeddingModel&, const EmbeddingModel&);

 private:
  friend EmbeddingModel train_pvdbow(const std::vector<TokenizedArticle>&,
                                     const PvDbowParams&);

  PvDbowParams params_;
  textproc::Vocabulary vocab_;
  std::vector<std::string> article_ids_;
  std::vector<ArticleRows> article_rows_;
  std::unordered_map<std::string, std::size_t> article_index_;
  std::vector<std::uint8_t> trained_;
  std::vector<float> paragraphs_;  // n_paragraphs x dim, row-major
  std::vector<float> words_;       // |vocab| x dim, row-major
  std::vector<double> noise_;
  std::vector<double> epoch_losses_;
};

// PV-DBOW with negative sampling. Each paragraph vector is trained to predict
// the paragraph's words; article ids and paragraph order fix the row layout.
// Throws DataError on an empty corpus or when min_count leaves no words.
EmbeddingModel train_pvdbow(const std::vector<TokenizedArticle>& corpus,
                            const PvDbowParams& params);

// L2-normalized component-wise mean; a zero mean comes back degenerate.
// Throws DataError when paragraphs is empty.
DocVector normalized_mean(std::string article_id,
                          std::span<const std::span<const float>> paragraphs);

// Normalized mean of the article's trained paragraph vectors. Throws
// DataError when none of its paragraphs were embedded.
DocVector article_vector(const EmbeddingModel& model,
                         const ingest::Article& article);
DocVector article_vector(const EmbeddingModel& model,
                         std::string_view article_id);

// Article vectors for every article in the model; articles without embedded
// paragraphs come back degenerate.
DocVectorMap embed_corpus_pvdbow(const EmbeddingModel& model);

// Fallback embedder: normalized TF-IDF of each article's concatenated tokens.
DocVectorMap embed_corpus_tfidf(const std::vector<TokenizedArticle>& articles,
                                const textproc::Vocabulary& vocab);

void save_doc_vectors(std::ostream& out, const DocVectorMap& vectors);
DocVectorMap load_doc_vectors(std::istream& in, const std::string& source_name);
void save_doc_vectors(const std::filesystem::path& path,
                      const DocVectorMap& vectors);
DocVectorMap load_doc_vectors(const std::filesystem::path& path);

}  // namespace entail_forge::embed

#endif  // ENTAIL_FORGE_EMBED_H_
