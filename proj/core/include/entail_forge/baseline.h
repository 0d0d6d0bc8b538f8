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

#ifndef ENTAIL_FORGE_BASELINE_H_
#define ENTAIL_FORGE_BASELINE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "entail_forge/degrade.h"
#include "entail_forge/pairgen.h"
#include "entail_forge/textproc.h"
#include "entail_forge/vectors.h"

namespace entail_forge::baseline {

inline constexpr std::string_view kModelName = "baseline-logreg";

// Lexical feature ids: 3 * term_id + kind.
enum class FeatureKind : std::uint32_t { kPremise = 0, kHypothesis = 1, kShared = 2 };

inline std::uint32_t feature_id(std::uint32_t term_id, FeatureKind kind) {
  return 3 * term_id + static_cast<std::uint32_t>(kind);
}

struct PairFeatures {
  // TF-IDF weighted p:/h:/s: features, L2-normalized as one block.
  SparseVector lexical;
  // TF-IDF cosine between premise and hypothesis; 0 when either side is empty.
  double overlap_cosine = 0.0;
};

// Premises and hypotheses are separate documents; min_count 1, lowercased.
textproc::Vocabulary build_pair_vocab(const std::vector<pairgen::NLIPair>& pairs);

PairFeatures featurize(const pairgen::NLIPair& pair, const textproc::Vocabulary& vocab);

struct TrainConfig {
  std::size_t epochs = 5;
  double lr = 0.1;
  double l2 = 1e-6;
  std::uint64_t seed = 0;
};

struct LinearModel {
  // One weight per lexical feature id, then the overlap-cosine weight.
  std::vector<double> weights;
  double bias = 0.0;
  textproc::Vocabulary vocab;
  TrainConfig config;

  std::size_t cosine_index() const { return weights.size() - 1; }
  double score(const PairFeatures& x) const;
  double probability(const PairFeatures& x) const;  // P(entailment)
};

struct LossGrad {
  double loss = 0.0;
  std::vector<std::pair<std::size_t, double>> grad_weights;  // support only
  double grad_bias = 0.0;
};

// Binary log-loss of sigma(w.x + b) for label y in {0, 1} plus
// l2/2 * |w|^2 over the weights the example touches (its lexical support and
// the cosine weight). The bias is not regularized.
LossGrad logistic_loss_grad(std::span<const double> weights, double bias,
                            const PairFeatures& x, int label, double l2);

// Seeded per-epoch shuffling, constant learning rate. Throws DataError on an
// empty set or when only one label is present.
LinearModel train_logreg(const std::vector<pairgen::NLIPair>& train,
                         const TrainConfig& config);

struct Evaluation {
  double mean_log_loss = 0.0;
  double accuracy = 0.0;  // percent; entailment predicted when P >= 0.5
};

Evaluation evaluate(const LinearModel& model, const std::vector<pairgen::NLIPair>& pairs);

// For each pct: subsample the train split (subsample_seed), train, and score
// on the untouched test split.
std::vector<degrade::DegradationRecord> run_degradation_suite(
    const pairgen::DatasetSplits& splits, std::span<const double> pcts,
    std::uint64_t subsample_seed, const TrainConfig& config, bool stratify = true);

}  // namespace entail_forge::baseline

#endif  // ENTAIL_FORGE_BASELINE_H_
