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

#include "entail_forge/baseline.h"

#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "entail_forge/error.h"
#include "entail_forge/random.h"

namespace entail_forge::baseline {
namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double neg_log_sigmoid(double x) {
  if (x >= 0) return std::log1p(std::exp(-x));
  return -x + std::log1p(std::exp(x));
}

int target(pairgen::Label label) { return label == pairgen::Label::kEntailment ? 1 : 0; }

std::map<std::uint32_t, std::uint64_t> term_counts(const textproc::TokenList& tokens,
                                                   const textproc::Vocabulary& vocab) {
  std::map<std::uint32_t, std::uint64_t> counts;
  for (const auto& t : tokens) {
    if (auto id = vocab.find(t)) ++counts[*id];
  }
  return counts;
}

}  // namespace

textproc::Vocabulary build_pair_vocab(const std::vector<pairgen::NLIPair>& pairs) {
  std::vector<textproc::TokenList> docs;
  docs.reserve(2 * pairs.size());
  for (const auto& p : pairs) {
    docs.push_back(textproc::tokenize(p.premise, true));
    docs.push_back(textproc::tokenize(p.hypothesis, true));
  }
  return textproc::Vocabulary::build(docs, 1);
}

PairFeatures featurize(const pairgen::NLIPair& pair, const textproc::Vocabulary& vocab) {
  const auto premise = textproc::tokenize(pair.premise, true);
  const auto hypothesis = textproc::tokenize(pair.hypothesis, true);
  const auto pc = term_counts(premise, vocab);
  const auto hc = term_counts(hypothesis, vocab);

  std::map<std::uint32_t, double> weights;
  for (const auto& [id, n] : pc) {
    const double w = static_cast<double>(n) * textproc::idf(id, vocab);
    if (w != 0.0) weights[feature_id(id, FeatureKind::kPremise)] = w;
  }
  for (const auto& [id, n] : hc) {
    const double w = static_cast<double>(n) * textproc::idf(id, vocab);
    if (w != 0.0) weights[feature_id(id, FeatureKind::kHypothesis)] = w;
    if (auto it = pc.find(id); it != pc.end()) {
      const double s = static_cast<double>(std::min(n, it->second)) *
                       textproc::idf(id, vocab);
      if (s != 0.0) weights[feature_id(id, FeatureKind::kShared)] = s;
    }
  }
  PairFeatures f;
  for (const auto& [id, w] : weights) f.lexical.entries.emplace_back(id, w);
  normalize(f.lexical);

  const SparseVector pv = textproc::tfidf_vector(premise, vocab);
  const SparseVector hv = textproc::tfidf_vector(hypothesis, vocab);
  f.overlap_cosine = (pv.is_zero || hv.is_zero) ? 0.0 : dot(pv, hv);
  return f;
}

double LinearModel::score(const PairFeatures& x) const {
  double z = bias + weights[cosine_index()] * x.overlap_cosine;
  for (const auto& [id, v] : x.lexical.entries) {
    if (id < cosine_index()) z += weights[id] * v;
  }
  return z;
}

double LinearModel::probability(const PairFeatures& x) const { return sigmoid(score(x)); }

LossGrad logistic_loss_grad(std::span<const double> weights, double bias,
                            const PairFeatures& x, int label, double l2) {
  if (weights.empty()) throw InvariantError("logistic_loss_grad: no weights");
  const std::size_t cos_id = weights.size() - 1;
  double z = bias + weights[cos_id] * x.overlap_cosine;
  for (const auto& [id, v] : x.lexical.entries) {
    if (id >= cos_id) throw InvariantError("logistic_loss_grad: feature id out of range");
    z += weights[id] * v;
  }
  LossGrad r;
  r.loss = label == 1 ? neg_log_sigmoid(z) : neg_log_sigmoid(-z);
  const double g = sigmoid(z) - static_cast<double>(label);
  for (const auto& [id, v] : x.lexical.entries) {
    r.loss += 0.5 * l2 * weights[id] * weights[id];
    r.grad_weights.emplace_back(id, g * v + l2 * weights[id]);
  }
  r.loss += 0.5 * l2 * weights[cos_id] * weights[cos_id];
  r.grad_weights.emplace_back(cos_id, g * x.overlap_cosine + l2 * weights[cos_id]);
  r.grad_bias = g;
  return r;
}

LinearModel train_logreg(const std::vector<pairgen::NLIPair>& train,
                         const TrainConfig& config) {
  if (train.empty()) throw DataError("train_logreg: empty training set");
  const std::size_t positives = pairgen::count_label(train, pairgen::Label::kEntailment);
  if (positives == 0 || positives == train.size()) {
    throw DataError("train_logreg: training set has a single label");
  }
  if (config.epochs < 1 || !(config.lr > 0.0) || !(config.l2 >= 0.0)) {
    throw UsageError("train_logreg: need epochs >= 1, lr > 0, l2 >= 0");
  }
  LinearModel model;
  model.config = config;
  model.vocab = build_pair_vocab(train);
  model.weights.assign(3 * model.vocab.size() + 1, 0.0);

  std::vector<PairFeatures> features;
  features.reserve(train.size());
  for (const auto& p : train) features.push_back(featurize(p, model.vocab));

  Rng rng(config.seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      const LossGrad lg = logistic_loss_grad(model.weights, model.bias, features[i],
                                             target(train[i].label), config.l2);
      for (const auto& [id, g] : lg.grad_weights) model.weights[id] -= config.lr * g;
      model.bias -= config.lr * lg.grad_bias;
    }
  }
  for (double w : model.weights) {
    if (!std::isfinite(w)) throw InvariantError("train_logreg: non-finite weight");
  }
  return model;
}

Evaluation evaluate(const LinearModel& model, const std::vector<pairgen::NLIPair>& pairs) {
  if (pairs.empty()) throw DataError("evaluate: empty evaluation set");
  double loss = 0.0;
  std::size_t correct = 0;
  for (const auto& p : pairs) {
    const double z = model.score(featurize(p, model.vocab));
    const int y = target(p.label);
    loss += y == 1 ? neg_log_sigmoid(z) : neg_log_sigmoid(-z);
    const int predicted = sigmoid(z) >= 0.5 ? 1 : 0;
    if (predicted == y) ++correct;
  }
  const auto n = static_cast<double>(pairs.size());
  return {loss / n, 100.0 * static_cast<double>(correct) / n};
}

std::vector<degrade::DegradationRecord> run_degradation_suite(
    const pairgen::DatasetSplits& splits, std::span<const double> pcts,
    std::uint64_t subsample_seed, const TrainConfig& config, bool stratify) {
  if (pcts.empty()) throw UsageError("run_degradation_suite: no data percentages");
  std::vector<degrade::DegradationRecord> records;
  for (double pct : pcts) {
    const auto subset = degrade::subsample_train(splits.train, pct, subsample_seed, stratify);
    const LinearModel model = train_logreg(subset, config);
    const Evaluation eval = evaluate(model, splits.test);
    records.push_back({std::string(kModelName), pct, eval.mean_log_loss, eval.accuracy});
  }
  return records;
}

}  // namespace entail_forge::baseline
