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

// Microbenchmarks for the pipeline's hot paths.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "entail_forge/annindex.h"
#include "entail_forge/baseline.h"
#include "entail_forge/cluster.h"
#include "entail_forge/degrade.h"
#include "entail_forge/embed.h"
#include "entail_forge/ingest.h"
#include "entail_forge/textproc.h"

namespace ef = entail_forge;

namespace {

std::string word(std::mt19937_64& gen, std::size_t topic) {
  std::string w(1, static_cast<char>('a' + topic % 26));
  const std::size_t len = 3 + gen() % 6;
  for (std::size_t i = 0; i < len; ++i) w.push_back(static_cast<char>('a' + gen() % 26));
  return w;
}

std::string sentence(std::mt19937_64& gen, std::size_t topic, std::size_t words) {
  std::string s = "Ang";
  for (std::size_t i = 0; i < words; ++i) s += " " + word(gen, topic);
  return s + ".";
}

std::vector<ef::embed::TokenizedArticle> corpus(std::size_t articles, std::size_t paragraphs) {
  std::mt19937_64 gen(1);
  // A closed vocabulary per topic so min_count keeps most tokens.
  std::vector<std::vector<std::string>> topic_words(8);
  for (std::size_t t = 0; t < 8; ++t) {
    for (int i = 0; i < 200; ++i) topic_words[t].push_back(word(gen, t));
  }
  std::vector<ef::embed::TokenizedArticle> out;
  for (std::size_t a = 0; a < articles; ++a) {
    ef::embed::TokenizedArticle art{"a" + std::to_string(a), {}};
    const auto& pool = topic_words[a % 8];
    for (std::size_t p = 0; p < paragraphs; ++p) {
      ef::textproc::TokenList tokens;
      for (int i = 0; i < 20; ++i) tokens.push_back(pool[gen() % pool.size()]);
      art.paragraphs.push_back(std::move(tokens));
    }
    out.push_back(std::move(art));
  }
  return out;
}

ef::embed::DocVectorMap unit_vectors(std::size_t n, std::size_t dim) {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> normal;
  ef::embed::DocVectorMap m;
  for (std::size_t i = 0; i < n; ++i) {
    ef::DenseVector v(dim);
    for (auto& x : v) x = normal(gen);
    ef::normalize(v);
    const std::string id = "v" + std::to_string(i);
    m.emplace(id, ef::embed::DocVector{id, std::move(v), false});
  }
  return m;
}

void BM_CleanText(benchmark::State& state) {
  std::mt19937_64 gen(3);
  std::string raw;
  for (int p = 0; p < 10; ++p) raw += sentence(gen, p, 80) + "\r\n\r\n \t";
  for (auto _ : state) benchmark::DoNotOptimize(ef::ingest::clean_text(raw));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * raw.size()));
}
BENCHMARK(BM_CleanText);

void BM_Tokenize(benchmark::State& state) {
  std::mt19937_64 gen(4);
  const std::string text = sentence(gen, 0, 200);
  for (auto _ : state) benchmark::DoNotOptimize(ef::textproc::tokenize(text, true));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Tokenize);

void BM_TrainPvdbow(benchmark::State& state) {
  const auto docs = corpus(static_cast<std::size_t>(state.range(0)), 8);
  ef::embed::PvDbowParams p;
  p.epochs = 5;
  p.min_count = 1;
  for (auto _ : state) benchmark::DoNotOptimize(ef::embed::train_pvdbow(docs, p));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 8 * 20 *
                          static_cast<std::int64_t>(p.epochs));
}
BENCHMARK(BM_TrainPvdbow)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_ForestBuild(benchmark::State& state) {
  const auto vectors = unit_vectors(static_cast<std::size_t>(state.range(0)), 100);
  ef::annindex::ForestParams p;
  for (auto _ : state) benchmark::DoNotOptimize(ef::annindex::RpForest::build(vectors, p));
}
BENCHMARK(BM_ForestBuild)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_ForestQuery(benchmark::State& state) {
  const auto vectors = unit_vectors(10000, 100);
  const auto forest = ef::annindex::RpForest::build(vectors, {});
  const auto queries = unit_vectors(64, 100);
  const auto search_k = static_cast<std::size_t>(state.range(0));
  auto it = queries.begin();
  for (auto _ : state) {
    benchmark::DoNotOptimize(forest.query(it->second, 21, search_k));
    if (++it == queries.end()) it = queries.begin();
  }
}
BENCHMARK(BM_ForestQuery)->Arg(200)->Arg(2000)->Arg(20480);

void BM_SimilarityGraph(benchmark::State& state) {
  const auto vectors = unit_vectors(static_cast<std::size_t>(state.range(0)), 100);
  const auto forest = ef::annindex::RpForest::build(vectors, {});
  ef::cluster::GraphParams p;
  p.search_k = 2000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ef::cluster::build_similarity_graph(vectors, forest, p));
  }
}
BENCHMARK(BM_SimilarityGraph)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_DegradeReport(benchmark::State& state) {
  std::vector<ef::degrade::DegradationRecord> records;
  for (int m = 0; m < 50; ++m) {
    const std::string name = "model" + std::to_string(m);
    for (double pct : {100.0, 50.0, 30.0, 10.0, 1.0}) {
      records.push_back({name, pct, 0.3, 90.0 - (100.0 - pct) / 10.0 - m * 0.01});
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(ef::degrade::build_report(records));
}
BENCHMARK(BM_DegradeReport);

void BM_TrainLogreg(benchmark::State& state) {
  std::mt19937_64 gen(5);
  std::vector<ef::pairgen::NLIPair> pairs;
  for (int i = 0; i < state.range(0); ++i) {
    const std::size_t t = gen() % 8;
    const bool entail = i % 2 == 0;
    pairs.push_back({sentence(gen, t, 12), sentence(gen, entail ? t : (t + 1) % 8, 12),
                     entail ? ef::pairgen::Label::kEntailment
                            : ef::pairgen::Label::kContradiction,
                     {}});
  }
  ef::baseline::TrainConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(ef::baseline::train_logreg(pairs, cfg));
}
BENCHMARK(BM_TrainLogreg)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
