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

// Acceptance checks. Prints one [PASS]/[FAIL] line per criterion and exits
// non-zero when any fails. Usage: acceptance <tests/data dir> [AC1 ... AC6]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "entail_forge/annindex.h"
#include "entail_forge/baseline.h"
#include "entail_forge/cluster.h"
#include "entail_forge/config.h"
#include "entail_forge/degrade.h"
#include "entail_forge/embed.h"
#include "entail_forge/ingest.h"
#include "entail_forge/pairgen.h"
#include "entail_forge/pipeline.h"
#include "entail_forge/random.h"
#include "gradcheck.h"
#include "planted_corpus.h"

namespace {

namespace ef = entail_forge;
namespace fs = std::filesystem;
using ef::pairgen::Label;
using ef::pairgen::NLIPair;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Checker {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      if (failures_.size() < 5) failures_.push_back(what);
    }
  }
  Outcome finish(const std::string& summary) const {
    std::string d = summary;
    for (const auto& f : failures_) d += "; " + f;
    return {pass_, d};
  }

 private:
  bool pass_ = true;
  std::vector<std::string> failures_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

// Independent cosine over the raw components.
double brute_cosine(const ef::AnyVector& a, const ef::AnyVector& b) {
  const auto* da = std::get_if<ef::DenseVector>(&a);
  const auto* db = std::get_if<ef::DenseVector>(&b);
  if (da != nullptr && db != nullptr) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < da->size(); ++i) {
      dot += (*da)[i] * (*db)[i];
      na += (*da)[i] * (*da)[i];
      nb += (*db)[i] * (*db)[i];
    }
    return dot / std::sqrt(na * nb);
  }
  auto to_map = [](const ef::AnyVector& v) {
    std::map<std::size_t, double> m;
    if (const auto* d = std::get_if<ef::DenseVector>(&v)) {
      for (std::size_t i = 0; i < d->size(); ++i) m[i] = (*d)[i];
    } else {
      for (const auto& [i, x] : std::get<ef::SparseVector>(v).entries) m[i] = x;
    }
    return m;
  };
  const auto ma = to_map(a), mb = to_map(b);
  double dot = 0, na = 0, nb = 0;
  for (const auto& [i, x] : ma) {
    na += x * x;
    auto it = mb.find(i);
    if (it != mb.end()) dot += x * it->second;
  }
  for (const auto& [i, x] : mb) nb += x * x;
  return dot / std::sqrt(na * nb);
}

// --- AC1 -------------------------------------------------------------------

Outcome ac1_reference_metrics(const fs::path& data_dir) {
  struct Expected {
    std::string model;
    std::vector<double> dps;  // 50, 30, 10, 1
    double speed;
  };
  const std::vector<Expected> printed = {
      {"ELECTRA Tagalog Base Cased", {1.31, 3.17, 6.03, 13.06}, 4.47},
      {"ELECTRA Tagalog Base Uncased", {0.88, 2.67, 4.87, 13.34}, 4.77},
      {"ELECTRA Tagalog Small Cased", {0.77, 2.32, 5.00, 15.37}, 5.69},
      {"ELECTRA Tagalog Small Uncased", {1.11, 2.30, 4.55, 18.38}, 6.92},
      {"BERT Tagalog Base Cased", {2.42, 3.36, 5.71, 8.87}, 2.49},
      {"BERT Tagalog Base Uncased", {2.14, 3.39, 6.07, 8.81}, 2.57},
      {"ULMFiT Tagalog", {2.85, 5.57, 11.53, 24.47}, 8.33},
  };
  Checker c;
  std::ostringstream table;
  const auto report = ef::pipeline::run_degrade_report(
      data_dir / "reference_records.csv", ef::degrade::TableStyle::kPaper, {}, &table);
  const std::string rendered = table.str();
  c.require(report.models.size() == printed.size(), "expected 7 models");
  std::size_t dp_ok = 0, speed_ok = 0;
  double worst = 0.0;
  for (const auto& e : printed) {
    auto it = std::find_if(report.models.begin(), report.models.end(),
                           [&](const auto& m) { return m.model == e.model; });
    if (it == report.models.end()) {
      c.require(false, "missing model " + e.model);
      continue;
    }
    std::vector<double> dps;
    for (const auto& row : it->rows) {
      if (row.deg_pct) dps.push_back(*row.deg_pct);
    }
    c.require(dps.size() == 4, e.model + ": expected 4 DP rows");
    for (std::size_t i = 0; i < std::min<std::size_t>(4, dps.size()); ++i) {
      const double err = std::abs(dps[i] - e.dps[i]);
      worst = std::max(worst, err);
      const bool ok = err <= 0.005 &&
                      ef::degrade::format_fixed2(dps[i]) == fmt("%.2f", e.dps[i]) &&
                      rendered.find(fmt("%.2f%%", e.dps[i])) != std::string::npos;
      dp_ok += ok ? 1 : 0;
      c.require(ok, e.model + " DP " + fmt("%.4f", dps[i]) + " vs " + fmt("%.2f", e.dps[i]));
    }
    const double err = std::abs(it->degradation_speed.value_or(-1.0) - e.speed);
    worst = std::max(worst, err);
    const bool ok = err <= 0.005 &&
                    ef::degrade::format_fixed2(it->degradation_speed.value_or(-1.0)) == fmt("%.2f", e.speed);
    speed_ok += ok ? 1 : 0;
    c.require(ok, e.model + " speed " + fmt("%.4f", it->degradation_speed.value_or(-1.0)));
  }
  return c.finish(std::to_string(dp_ok) + "/28 DP and " + std::to_string(speed_ok) +
                  "/7 speeds match; max |err| " + fmt("%.4f", worst));
}

// --- AC2 -------------------------------------------------------------------

// The default learning rate under-trains corpora this small (every article
// vector lands near one common direction), so planted runs start higher.
constexpr double kPlantedLrStart = 0.1;

Outcome ac2_planted_generate() {
  Checker c;
  ef::testing::TempDir tmp("ac2");
  const auto corpus = ef::testing::make_planted_corpus({200, 8, 4, 60, 5, 11});
  corpus.write(tmp / "corpus.jsonl");

  ef::PipelineConfig cfg;
  cfg.input_path = tmp / "corpus.jsonl";
  cfg.output_dir = tmp / "run1";
  cfg.per_class = 500;
  cfg.threshold = 0.65;
  cfg.lr_start = kPlantedLrStart;
  cfg.seed = 42;
  const auto s1 = ef::pipeline::run_generate(cfg);
  cfg.output_dir = tmp / "run2";
  const auto s2 = ef::pipeline::run_generate(cfg);

  const fs::path out = tmp / "run1";
  const auto manifest = ef::pipeline::Manifest::read(out / "manifest.txt");
  c.require(manifest.at("count.pairs") == "1000", "manifest count.pairs");
  c.require(manifest.at("count.pairs.entailment") == "500", "manifest entailment count");
  c.require(manifest.at("count.pairs.contradiction") == "500", "manifest contradiction count");

  const auto splits = ef::pairgen::read_splits(out);
  std::vector<NLIPair> all = splits.train;
  all.insert(all.end(), splits.validation.begin(), splits.validation.end());
  all.insert(all.end(), splits.test.begin(), splits.test.end());

  std::map<std::string, ef::ingest::Article> articles;
  for (auto& a : ef::ingest::read_articles(out / "articles.jsonl")) articles[a.id] = a;
  const auto vectors = ef::embed::load_doc_vectors(out / "vectors.bin");
  const auto assign = ef::cluster::assignment(ef::cluster::read_clusters(out / "clusters.tsv"));

  std::size_t ent = 0, con = 0, ent_ok = 0, con_ok = 0;
  double max_con_cos = -1.0;
  for (const auto& p : all) {
    const auto& pv = p.provenance;
    if (p.label == Label::kEntailment) {
      ++ent;
      const auto& a = articles.at(pv.premise_article_id);
      const bool ok = pv.premise_article_id == pv.hypothesis_article_id &&
                      pv.hypothesis_para_idx == pv.premise_para_idx + 1 &&
                      pv.hypothesis_para_idx < a.paragraphs.size() &&
                      a.paragraphs[pv.premise_para_idx] == p.premise &&
                      a.paragraphs[pv.hypothesis_para_idx] == p.hypothesis;
      ent_ok += ok ? 1 : 0;
    } else {
      ++con;
      const double cos = brute_cosine(vectors.at(pv.premise_article_id).components,
                                      vectors.at(pv.hypothesis_article_id).components);
      max_con_cos = std::max(max_con_cos, cos);
      const bool ok = assign.at(pv.premise_article_id) != assign.at(pv.hypothesis_article_id) &&
                      cos < 0.65 &&
                      articles.at(pv.premise_article_id).paragraphs.at(pv.premise_para_idx) ==
                          p.premise &&
                      articles.at(pv.hypothesis_article_id).paragraphs.at(
                          pv.hypothesis_para_idx) == p.hypothesis;
      con_ok += ok ? 1 : 0;
    }
  }
  c.require(all.size() == 1000, "1000 pairs expected, got " + std::to_string(all.size()));
  c.require(ent == 500 && con == 500, "labels not balanced");
  c.require(ent_ok == ent, "entailment provenance violations");
  c.require(con_ok == con, "contradiction provenance violations");

  bool identical = s1.content_hash == s2.content_hash;
  for (const auto& entry : fs::directory_iterator(out)) {
    const auto name = entry.path().filename().string();
    if (name == "manifest.txt") continue;
    identical = identical && ef::testing::read_file(entry.path()) ==
                                 ef::testing::read_file(tmp / "run2" / name);
  }
  c.require(identical, "re-run output differs");
  return c.finish("pairs " + std::to_string(all.size()) + " (" + std::to_string(ent) + "/" +
                  std::to_string(con) + "), entailment ok " + std::to_string(ent_ok) +
                  ", contradiction ok " + std::to_string(con_ok) + ", clusters " +
                  std::to_string(s1.clusters) + ", max contradiction cosine " +
                  fmt("%.3f", max_con_cos) + ", rerun identical " +
                  (identical ? "yes" : "no"));
}

// --- AC3 -------------------------------------------------------------------

Outcome ac3_ann_recall() {
  Checker c;
  const std::size_t n = 1000, dim = 64, k = 10;
  const auto vectors = ef::testing::random_unit_vectors(n, dim, 2024);
  ef::annindex::ForestParams params;
  params.n_trees = 32;
  params.seed = 5;
  const auto forest = ef::annindex::RpForest::build(vectors, params);

  std::vector<const ef::embed::DocVector*> items;
  for (const auto& [id, v] : vectors) items.push_back(&v);

  double recall_sum = 0.0;
  std::size_t exact_mismatch = 0;
  for (const auto* q : items) {
    std::vector<std::pair<double, std::string>> all;
    for (const auto* o : items) all.emplace_back(brute_cosine(q->components, o->components), o->article_id);
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::set<std::string> truth;
    for (std::size_t i = 0; i < k; ++i) truth.insert(all[i].second);

    const auto approx = forest.query(*q, k);
    std::size_t hit = 0;
    for (const auto& nb : approx) hit += truth.count(nb.id);
    recall_sum += static_cast<double>(hit) / k;

    const auto exhaustive = forest.query(*q, k, n);
    bool same = exhaustive.size() == k;
    for (std::size_t i = 0; same && i < k; ++i) {
      same = exhaustive[i].id == all[i].second &&
             std::abs(exhaustive[i].cosine - all[i].first) < 1e-12;
    }
    exact_mismatch += same ? 0 : 1;
  }
  const double recall = recall_sum / n;
  c.require(recall >= 0.90, "mean recall below 0.90");
  c.require(exact_mismatch == 0, std::to_string(exact_mismatch) + " exhaustive queries differ");

  // Informative: recall with a deliberately small candidate budget.
  double small = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    const auto* q = items[i * 10];
    std::vector<std::pair<double, std::string>> all;
    for (const auto* o : items) all.emplace_back(brute_cosine(q->components, o->components), o->article_id);
    std::partial_sort(all.begin(), all.begin() + k, all.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::set<std::string> truth;
    for (std::size_t j = 0; j < k; ++j) truth.insert(all[j].second);
    std::size_t hit = 0;
    for (const auto& nb : forest.query(*q, k, 200)) hit += truth.count(nb.id);
    small += static_cast<double>(hit) / k;
  }
  return c.finish("mean recall@10 " + fmt("%.4f", recall) + " (default search_k), " +
                  fmt("%.4f", small / 100) + " (search_k=200); exhaustive mismatches " +
                  std::to_string(exact_mismatch));
}

// --- AC4 -------------------------------------------------------------------

Outcome ac4_gradients() {
  Checker c;
  double worst_pv = 0.0, worst_lr = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    worst_pv = std::max(worst_pv, ef::testing::pvdbow_gradient_error(1000 + i));
    worst_lr = std::max(worst_lr, ef::testing::logistic_gradient_error(5000 + i));
  }
  c.require(worst_pv <= 1e-4, "PV-DBOW gradient mismatch");
  c.require(worst_lr <= 1e-4, "logistic gradient mismatch");
  return c.finish("max relative error PV-DBOW " + fmt("%.2e", worst_pv) + ", logistic " +
                  fmt("%.2e", worst_lr) + " over 100 instances each");
}

// --- AC5 -------------------------------------------------------------------

Outcome ac5_degradation_curve() {
  Checker c;
  ef::testing::TempDir tmp("ac5");
  const auto corpus = ef::testing::make_planted_corpus({1300, 9, 8, 60, 5, 23});
  corpus.write(tmp / "corpus.jsonl");
  ef::PipelineConfig cfg;
  cfg.input_path = tmp / "corpus.jsonl";
  cfg.output_dir = tmp / "dataset";
  cfg.per_class = 10000;
  cfg.lr_start = kPlantedLrStart;
  cfg.seed = 42;
  ef::pipeline::run_generate(cfg);
  const auto splits = ef::pairgen::read_splits(cfg.output_dir);
  const std::size_t total = splits.train.size() + splits.validation.size() + splits.test.size();
  c.require(total == 20000, "dataset size " + std::to_string(total));

  const std::vector<double> pcts = {100, 50, 30, 10, 1};
  const auto records = ef::baseline::run_degradation_suite(
      splits, pcts, cfg.subsample_seed(), cfg.baseline_config(), cfg.stratify);
  const auto report = ef::degrade::build_report(records);
  const auto& rows = report.models.at(0).rows;
  const double acc100 = rows.at(0).test_acc;
  c.require(acc100 >= 90.0, "100% accuracy " + fmt("%.2f", acc100));
  std::string curve;
  double prev_dp = 0.0;
  for (const auto& row : rows) {
    const double dp = row.deg_pct.value_or(0.0);
    c.require(dp >= prev_dp - 1.0, "DP decreased at " + fmt("%g%%", row.data_pct));
    prev_dp = std::max(prev_dp, dp);
    curve += (curve.empty() ? "" : ", ") + fmt("%g%%:", row.data_pct) +
             fmt("%.2f", row.test_acc) + "/" + fmt("%.2f", dp);
  }

  auto shuffled = splits.train;
  std::vector<Label> labels;
  for (const auto& p : shuffled) labels.push_back(p.label);
  ef::Rng rng(99);
  rng.shuffle(labels);
  for (std::size_t i = 0; i < shuffled.size(); ++i) shuffled[i].label = labels[i];
  const auto model = ef::baseline::train_logreg(shuffled, cfg.baseline_config());
  const double control = ef::baseline::evaluate(model, splits.test).accuracy;
  c.require(control >= 45.0 && control <= 55.0, "control accuracy " + fmt("%.2f", control));
  return c.finish("acc/DP by pct " + curve + "; speed " +
                  fmt("%.3f", report.models[0].degradation_speed.value_or(-1.0)) +
                  "; shuffled-label control " + fmt("%.2f", control));
}

// --- AC6 -------------------------------------------------------------------

Outcome ac6_split_arithmetic() {
  Checker c;
  std::vector<NLIPair> ent, con;
  ent.reserve(300000);
  con.reserve(300000);
  for (std::size_t i = 0; i < 300000; ++i) {
    NLIPair p;
    p.premise = "e" + std::to_string(i);
    p.hypothesis = "f" + std::to_string(i);
    p.label = Label::kEntailment;
    p.provenance = {"a" + std::to_string(i), 0, "a" + std::to_string(i), 1};
    ent.push_back(p);
    p.label = Label::kContradiction;
    p.premise[0] = 'c';
    p.provenance.hypothesis_article_id = "b" + std::to_string(i);
    con.push_back(std::move(p));
  }
  const auto dataset = ef::pairgen::assemble_dataset(ent, con, 300000, 46);
  ent.clear();
  ent.shrink_to_fit();
  con.clear();
  con.shrink_to_fit();
  c.require(dataset.size() == 600000, "dataset size");

  ef::PipelineConfig cfg;
  cfg.seed = 42;
  const auto splits = ef::pairgen::split_dataset(dataset, cfg.split_options());
  c.require(splits.train.size() == 420000, "train " + std::to_string(splits.train.size()));
  c.require(splits.validation.size() == 90000, "validation size");
  c.require(splits.test.size() == 90000, "test size");
  auto balanced = [](const std::vector<NLIPair>& s) {
    const auto e = ef::pairgen::count_label(s, Label::kEntailment);
    const auto k = ef::pairgen::count_label(s, Label::kContradiction);
    return (e > k ? e - k : k - e) <= 1;
  };
  c.require(balanced(splits.train) && balanced(splits.validation) && balanced(splits.test),
            "split not balanced within 1");
  const auto one = ef::degrade::subsample_train(splits.train, 1.0, cfg.subsample_seed());
  const auto ten = ef::degrade::subsample_train(splits.train, 10.0, cfg.subsample_seed());
  c.require(one.size() == 4200, "1% subsample " + std::to_string(one.size()));
  c.require(ten.size() == 42000, "10% subsample " + std::to_string(ten.size()));
  return c.finish("splits " + std::to_string(splits.train.size()) + "/" +
                  std::to_string(splits.validation.size()) + "/" +
                  std::to_string(splits.test.size()) + ", 1% = " + std::to_string(one.size()) +
                  ", 10% = " + std::to_string(ten.size()));
}

struct Criterion {
  std::string id;
  std::string title;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <tests/data dir> [AC1 ... AC6]\n";
    return 2;
  }
  const fs::path data_dir = argv[1];
  std::set<std::string> only(argv + 2, argv + argc);

  const std::vector<Criterion> criteria = {
      {"AC1", "reference degradation metrics", 1.0, [&] { return ac1_reference_metrics(data_dir); }},
      {"AC2", "planted-corpus end-to-end generation", 60.0, ac2_planted_generate},
      {"AC3", "ANN recall", 30.0, ac3_ann_recall},
      {"AC4", "gradient checks", 60.0, ac4_gradients},
      {"AC5", "degradation-curve behaviour", 300.0, ac5_degradation_curve},
      {"AC6", "600k-pair split arithmetic", 60.0, ac6_split_arithmetic},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && only.count(c.id) == 0) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_seconds) {
      o.pass = false;
      o.detail += "; exceeded " + fmt("%.0f s", c.limit_seconds);
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.title << " ("
              << fmt("%.2f s", secs) << "): " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
