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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "entail_forge/error.h"
#include "gradcheck.h"
#include "planted_corpus.h"

namespace entail_forge::baseline {
namespace {

using pairgen::Label;
using pairgen::NLIPair;

NLIPair pair(std::string p, std::string h, Label label) {
  return NLIPair{std::move(p), std::move(h), label, {}};
}

double lexical(const PairFeatures& f, const textproc::Vocabulary& vocab, std::string_view term,
               FeatureKind kind) {
  const auto id = vocab.find(term);
  if (!id) return -1.0;
  const auto fid = feature_id(*id, kind);
  for (const auto& [i, v] : f.lexical.entries) {
    if (i == fid) return v;
  }
  return 0.0;
}

// Background pairs make the test tokens rare enough to carry idf > 0.
std::vector<NLIPair> with_background(std::vector<NLIPair> pairs) {
  for (int i = 0; i < 6; ++i) {
    const std::string w = "bg" + std::string(1, char('a' + i));
    pairs.push_back(pair(w, w + "x", i % 2 ? Label::kEntailment : Label::kContradiction));
  }
  return pairs;
}

TEST(Featurize, IdenticalSidesShareEverything) {
  const auto p = pair("Ang aso ay tumakbo", "ang aso ay tumakbo", Label::kEntailment);
  const auto vocab = build_pair_vocab(with_background({p}));
  const auto f = featurize(p, vocab);
  EXPECT_NEAR(f.overlap_cosine, 1.0, 1e-12);
  for (std::string_view t : {"ang", "aso", "ay", "tumakbo"}) {
    EXPECT_GT(lexical(f, vocab, t, FeatureKind::kPremise), 0.0) << t;
    EXPECT_GT(lexical(f, vocab, t, FeatureKind::kHypothesis), 0.0) << t;
    EXPECT_GT(lexical(f, vocab, t, FeatureKind::kShared), 0.0) << t;
  }
  EXPECT_NEAR(norm(f.lexical), 1.0, 1e-12);
}

TEST(Featurize, DisjointSidesShareNothing) {
  const auto p = pair("umuulan ngayon", "mainit kahapon", Label::kContradiction);
  const auto vocab = build_pair_vocab(with_background({p}));
  const auto f = featurize(p, vocab);
  EXPECT_EQ(f.overlap_cosine, 0.0);
  for (const auto& [id, v] : f.lexical.entries) {
    EXPECT_NE(id % 3, static_cast<std::uint32_t>(FeatureKind::kShared));
  }
  EXPECT_EQ(f.lexical.entries.size(), 4u);
}

TEST(Featurize, ToyVocabularyOracle) {
  // Four documents: df(alpha) = df(beta) = 2, others 1.
  const std::vector<NLIPair> pairs = {pair("alpha beta", "beta gamma", Label::kEntailment),
                                      pair("delta", "epsilon alpha", Label::kContradiction)};
  const auto vocab = build_pair_vocab(pairs);
  ASSERT_EQ(vocab.n_docs(), 4u);
  const auto f = featurize(pairs[0], vocab);
  // Raw weights ln2 (p:alpha, p:beta, h:beta, s:beta) and ln4 = 2 ln2 (h:gamma).
  const double s8 = std::sqrt(8.0);
  EXPECT_NEAR(lexical(f, vocab, "alpha", FeatureKind::kPremise), 1 / s8, 1e-12);
  EXPECT_NEAR(lexical(f, vocab, "beta", FeatureKind::kPremise), 1 / s8, 1e-12);
  EXPECT_NEAR(lexical(f, vocab, "beta", FeatureKind::kHypothesis), 1 / s8, 1e-12);
  EXPECT_NEAR(lexical(f, vocab, "beta", FeatureKind::kShared), 1 / s8, 1e-12);
  EXPECT_NEAR(lexical(f, vocab, "gamma", FeatureKind::kHypothesis), 2 / s8, 1e-12);
  EXPECT_EQ(lexical(f, vocab, "alpha", FeatureKind::kShared), 0.0);
  EXPECT_EQ(f.lexical.entries.size(), 5u);
  // Premise (1, 1)/sqrt2 over (alpha, beta); hypothesis (1, 2)/sqrt5 over (beta, gamma).
  EXPECT_NEAR(f.overlap_cosine, 1 / std::sqrt(10.0), 1e-12);

  const auto g = featurize(pairs[1], vocab);
  EXPECT_EQ(g.overlap_cosine, 0.0);
  // delta and epsilon carry ln4, alpha ln2: norm sqrt(4 + 4 + 1) ln2.
  EXPECT_NEAR(lexical(g, vocab, "delta", FeatureKind::kPremise), 2 / 3.0, 1e-12);
  EXPECT_NEAR(lexical(g, vocab, "alpha", FeatureKind::kHypothesis), 1 / 3.0, 1e-12);
}

TEST(Featurize, TokenFreePairIsBiasOnly) {
  const auto vocab = build_pair_vocab({pair("alpha", "beta", Label::kEntailment)});
  const auto f = featurize(pair("...", "zzz unknown", Label::kEntailment), vocab);
  EXPECT_TRUE(f.lexical.entries.empty());
  EXPECT_EQ(f.overlap_cosine, 0.0);
  LinearModel m;
  m.weights.assign(3 * vocab.size() + 1, 5.0);
  m.bias = -0.25;
  EXPECT_EQ(m.score(f), -0.25);
}

TEST(LogisticLoss, ClosedForm) {
  PairFeatures x;
  x.lexical.entries = {{0, 0.6}, {2, 0.8}};
  x.lexical.is_zero = false;
  x.overlap_cosine = 0.5;
  const std::vector<double> w = {1.0, 9.0, -0.5, 2.0};  // index 3 is the cosine weight
  const double z = 0.1 + 1.0 * 0.6 - 0.5 * 0.8 + 2.0 * 0.5;
  const double p = 1 / (1 + std::exp(-z));
  const auto lg = logistic_loss_grad(w, 0.1, x, 1, 0.0);
  EXPECT_NEAR(lg.loss, -std::log(p), 1e-12);
  EXPECT_NEAR(lg.grad_bias, p - 1, 1e-12);
  std::map<std::size_t, double> g(lg.grad_weights.begin(), lg.grad_weights.end());
  EXPECT_EQ(g.size(), 3u);
  EXPECT_NEAR(g.at(0), (p - 1) * 0.6, 1e-12);
  EXPECT_NEAR(g.at(2), (p - 1) * 0.8, 1e-12);
  EXPECT_NEAR(g.at(3), (p - 1) * 0.5, 1e-12);

  const auto reg = logistic_loss_grad(w, 0.1, x, 0, 0.5);
  EXPECT_NEAR(reg.loss, -std::log(1 - p) + 0.25 * (1.0 + 0.25 + 4.0), 1e-12);
  std::map<std::size_t, double> gr(reg.grad_weights.begin(), reg.grad_weights.end());
  EXPECT_NEAR(gr.at(2), p * 0.8 + 0.5 * -0.5, 1e-12);
}

TEST(LogisticLoss, StableForLargeMargins) {
  PairFeatures x;
  x.overlap_cosine = 1.0;
  const std::vector<double> w = {800.0};
  const auto lg = logistic_loss_grad(w, 0.0, x, 0, 0.0);
  EXPECT_NEAR(lg.loss, 800.0, 1e-9);
  EXPECT_TRUE(std::isfinite(lg.grad_bias));
  EXPECT_NEAR(logistic_loss_grad(w, 0.0, x, 1, 0.0).loss, 0.0, 1e-12);
}

TEST(LogisticLoss, MatchesFiniteDifferences) {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    worst = std::max(worst, testing::logistic_gradient_error(seed));
  }
  EXPECT_LE(worst, 1e-4);
}

// Entailment hypotheses reuse three premise words; contradictions come from
// another topic and share none.
std::vector<NLIPair> topical_pairs(std::size_t n, std::uint64_t seed, bool shuffle_labels = false) {
  std::mt19937_64 gen(seed);
  auto pick = [&](std::size_t bound) { return static_cast<std::size_t>(gen() % bound); };
  auto words = [&](std::size_t topic, int count) {
    std::vector<std::string> w;
    for (int i = 0; i < count; ++i) w.push_back(testing::topic_word(topic, pick(40)));
    return w;
  };
  auto join = [&](const std::vector<std::string>& w) {
    std::string s = testing::function_words()[pick(5)];
    for (const auto& x : w) s += " " + x;
    return s;
  };
  std::vector<NLIPair> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t t = pick(8);
    const bool entail = i % 2 == 0;
    const auto premise = words(t, 6);
    std::vector<std::string> hypothesis;
    if (entail) {
      hypothesis = words(t, 3);
      for (int k = 0; k < 3; ++k) hypothesis.push_back(premise[pick(6)]);
    } else {
      hypothesis = words((t + 1 + pick(7)) % 8, 6);
    }
    Label label = entail ? Label::kEntailment : Label::kContradiction;
    if (shuffle_labels) label = pick(2) ? Label::kEntailment : Label::kContradiction;
    const std::string id = "a" + std::to_string(i);
    out.push_back(NLIPair{join(premise), join(hypothesis), label, {id, 0, id, 1}});
  }
  return out;
}

TEST(Train, SeparableSetIsLearned) {
  const auto train = topical_pairs(2000, 1);
  const auto held_out = topical_pairs(1000, 2);
  TrainConfig cfg;
  cfg.seed = 3;
  const auto model = train_logreg(train, cfg);
  EXPECT_GE(evaluate(model, train).accuracy, 95.0);
  EXPECT_GE(evaluate(model, held_out).accuracy, 95.0);
}

TEST(Train, DeterministicUnderSeed) {
  const auto train = topical_pairs(300, 4);
  TrainConfig cfg;
  cfg.seed = 5;
  const auto a = train_logreg(train, cfg);
  const auto b = train_logreg(train, cfg);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
  cfg.seed = 6;
  EXPECT_NE(a.weights, train_logreg(train, cfg).weights);
}

TEST(Train, RejectsBadInput) {
  EXPECT_THROW(train_logreg({}, {}), DataError);
  EXPECT_THROW(train_logreg({pair("a b", "a b", Label::kEntailment),
                             pair("c d", "c e", Label::kEntailment)},
                            {}),
               DataError);
  TrainConfig cfg;
  cfg.epochs = 0;
  EXPECT_THROW(train_logreg(topical_pairs(10, 1), cfg), UsageError);
  cfg.epochs = 1;
  cfg.lr = 0;
  EXPECT_THROW(train_logreg(topical_pairs(10, 1), cfg), UsageError);
}

TEST(Train, ShuffledLabelsStayAtChance) {
  TrainConfig cfg;
  cfg.seed = 7;
  const auto model = train_logreg(topical_pairs(4000, 8, true), cfg);
  const double acc = evaluate(model, topical_pairs(2000, 9, true)).accuracy;
  EXPECT_GE(acc, 45.0);
  EXPECT_LE(acc, 55.0);
}

TEST(Evaluate, ZeroModelIsChance) {
  const auto pairs = topical_pairs(100, 10);
  LinearModel m;
  m.vocab = build_pair_vocab(pairs);
  m.weights.assign(3 * m.vocab.size() + 1, 0.0);
  const auto e = evaluate(m, pairs);
  EXPECT_DOUBLE_EQ(e.accuracy, 50.0);
  EXPECT_NEAR(e.mean_log_loss, std::log(2.0), 1e-12);
}

LinearModel cosine_only_model(const std::vector<NLIPair>& pairs, double w, double bias) {
  LinearModel m;
  m.vocab = build_pair_vocab(pairs);
  m.weights.assign(3 * m.vocab.size() + 1, 0.0);
  m.weights[m.cosine_index()] = w;
  m.bias = bias;
  return m;
}

TEST(Evaluate, ConfidentCorrectModel) {
  const std::vector<NLIPair> pairs = {pair("isa dalawa", "isa dalawa", Label::kEntailment),
                                      pair("tatlo apat", "lima anim", Label::kContradiction),
                                      pair("pito walo", "pito walo", Label::kEntailment),
                                      pair("siyam sampu", "labing isa", Label::kContradiction)};
  const auto e = evaluate(cosine_only_model(pairs, 100.0, -50.0), pairs);
  EXPECT_DOUBLE_EQ(e.accuracy, 100.0);
  EXPECT_LT(e.mean_log_loss, 1e-20);
}

TEST(Evaluate, HandBuiltFourPairs) {
  // Cosine 1 for same-side pairs, 0 for disjoint ones; z = 4 cos - 2.
  const std::vector<NLIPair> pairs = {pair("isa dalawa", "isa dalawa", Label::kEntailment),
                                      pair("pito walo", "pito walo", Label::kEntailment),
                                      pair("tatlo apat", "lima anim", Label::kContradiction),
                                      pair("siyam sampu", "labing isa", Label::kEntailment)};
  const auto e = evaluate(cosine_only_model(pairs, 4.0, -2.0), pairs);
  EXPECT_DOUBLE_EQ(e.accuracy, 75.0);
  const double expected =
      (3 * std::log1p(std::exp(-2.0)) + std::log1p(std::exp(2.0))) / 4.0;
  EXPECT_NEAR(e.mean_log_loss, expected, 1e-12);
  EXPECT_THROW(evaluate(cosine_only_model(pairs, 0, 0), {}), DataError);
}

pairgen::DatasetSplits topical_splits(std::size_t train, std::size_t test, std::uint64_t seed) {
  pairgen::DatasetSplits s;
  s.train = topical_pairs(train, seed);
  s.test = topical_pairs(test, seed + 100);
  s.validation = topical_pairs(10, seed + 200);
  return s;
}

TEST(Suite, SinglePercentage) {
  const auto splits = topical_splits(200, 100, 1);
  const std::array pcts{100.0};
  const auto records = run_degradation_suite(splits, pcts, 1, {});
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].model, kModelName);
  EXPECT_EQ(records[0].data_pct, 100.0);
}

TEST(Suite, FullCurveDegradesMonotonically) {
  const auto splits = topical_splits(3000, 1000, 2);
  const std::array pcts{100.0, 50.0, 30.0, 10.0, 1.0};
  TrainConfig cfg;
  cfg.seed = 3;
  const auto records = run_degradation_suite(splits, pcts, 4, cfg);
  ASSERT_EQ(records.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(records[i].data_pct, pcts[i]);
  EXPECT_GE(records[0].test_acc, records[4].test_acc - 1.0);
  const auto report = degrade::build_report(records);
  const auto& rows = report.models.at(0).rows;
  for (std::size_t i = 2; i < rows.size(); ++i) {
    EXPECT_GE(*rows[i].deg_pct, *rows[i - 1].deg_pct - 1.0) << rows[i].data_pct;
  }
  EXPECT_EQ(records, run_degradation_suite(splits, pcts, 4, cfg));
}

TEST(Suite, EmptyPercentagesIsUsageError) {
  EXPECT_THROW(run_degradation_suite(topical_splits(20, 10, 3), {}, 1, {}), UsageError);
}

}  // namespace
}  // namespace entail_forge::baseline
