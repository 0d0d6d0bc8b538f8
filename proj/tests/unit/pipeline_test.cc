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

#include "entail_forge/pipeline.h"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "entail_forge/error.h"
#include "planted_corpus.h"

namespace entail_forge::pipeline {
namespace {

namespace fs = std::filesystem;

// The planted corpus is too small for the news-scale default learning rate.
constexpr double kPlantedLrStart = 0.1;

PipelineConfig planted_config(const testing::TempDir& dir) {
  const auto corpus = dir / "corpus.jsonl";
  if (!fs::exists(corpus)) testing::make_planted_corpus({}).write(corpus);
  PipelineConfig c;
  c.input_path = corpus;
  c.output_dir = dir / "out";
  c.per_class = 500;
  c.lr_start = kPlantedLrStart;
  return c;
}

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  testing::TempDir dir("sha");
  {
    std::ofstream(dir / "f") << "abc";
  }
  EXPECT_EQ(sha256_file(dir / "f"), sha256_hex("abc"));
  EXPECT_THROW(sha256_file(dir / "missing"), Error);
}

TEST(ManifestTest, LayoutAndContentHash) {
  testing::TempDir dir("manifest");
  {
    std::ofstream(dir / "a.txt") << "alpha";
    std::ofstream(dir / "b.txt") << "beta";
  }
  Manifest m("demo");
  m.set("z.key", "last");
  m.set_count("items", 3);
  m.add_output("b.txt", dir / "b.txt");
  m.add_output("a.txt", dir / "a.txt");
  const std::string expected_hash =
      sha256_hex("a.txt=" + sha256_hex("alpha") + "\nb.txt=" + sha256_hex("beta") + "\n");
  EXPECT_EQ(m.content_hash(), expected_hash);
  EXPECT_EQ(m.str(), "# entail-forge manifest\nformat=1\ncommand=demo\ncount.items=3\n"
                     "z.key=last\noutput.a.txt.sha256=" + sha256_hex("alpha") +
                         "\noutput.b.txt.sha256=" + sha256_hex("beta") +
                         "\ncontent_hash=" + expected_hash + "\n");
  // Inputs and config do not affect the content hash.
  Manifest other("other");
  other.set_config(PipelineConfig{});
  other.add_input("src", dir / "a.txt");
  other.add_output("a.txt", dir / "a.txt");
  other.add_output("b.txt", dir / "b.txt");
  EXPECT_EQ(other.content_hash(), expected_hash);

  m.write(dir / "m.txt");
  const auto back = Manifest::read(dir / "m.txt");
  EXPECT_EQ(back.at("command"), "demo");
  EXPECT_EQ(back.at("count.items"), "3");
  EXPECT_EQ(back.at("content_hash"), expected_hash);
  EXPECT_FALSE(fs::exists(dir / "m.txt.partial"));
  EXPECT_THROW(m.set("bad=key", "v"), InvariantError);
  EXPECT_THROW(m.set("k", "two\nlines"), InvariantError);
}

TEST(StagedDirTest, UncommittedStageLeavesNothing) {
  testing::TempDir dir("staged");
  {
    StagedDir stage(dir / "out");
    std::ofstream(stage.file("x.txt")) << "x";
    EXPECT_TRUE(fs::exists(dir / "out.partial" / "x.txt"));
  }
  EXPECT_FALSE(fs::exists(dir / "out"));
  EXPECT_FALSE(fs::exists(dir / "out.partial"));
}

TEST(StagedDirTest, CommitMovesFilesAndReplacesOldOnes) {
  testing::TempDir dir("staged");
  fs::create_directories(dir / "out");
  std::ofstream(dir / "out" / "x.txt") << "old";
  std::ofstream(dir / "out" / "keep.txt") << "keep";
  {
    StagedDir stage(dir / "out/");
    std::ofstream(stage.file("x.txt")) << "new";
    stage.commit();
  }
  EXPECT_EQ(testing::read_file(dir / "out" / "x.txt"), "new");
  EXPECT_EQ(testing::read_file(dir / "out" / "keep.txt"), "keep");
  EXPECT_FALSE(fs::exists(dir / "out.partial"));
}

TEST(RunStage, PrefixesAndKeepsKind) {
  EXPECT_EQ(run_stage("s", [] { return 5; }), 5);
  try {
    run_stage("embed", []() -> int { throw DataError("boom"); });
    FAIL();
  } catch (const DataError& e) {
    EXPECT_STREQ(e.what(), "embed: boom");
  }
  EXPECT_THROW(run_stage("x", [] { throw UsageError("u"); }), UsageError);
  EXPECT_THROW(run_stage("x", [] { throw InvariantError("i"); }), InvariantError);
}

TEST(RequireInput, NamesWhatIsMissing) {
  try {
    require_input("/nonexistent/corpus.jsonl", "input corpus");
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_STREQ(e.what(), "input corpus not found: /nonexistent/corpus.jsonl");
  }
}

TEST(Generate, WritesDatasetAndManifest) {
  testing::TempDir dir("generate");
  const auto cfg = planted_config(dir);
  const auto s = run_generate(cfg);
  EXPECT_EQ(s.articles, 200u);
  EXPECT_EQ(s.clusters, 4u);
  EXPECT_EQ(s.pairs, 1000u);
  EXPECT_EQ(s.entailment, 500u);
  EXPECT_EQ(s.contradiction, 500u);
  for (auto f : {"articles.jsonl", "vectors.bin", "model.bin", "clusters.tsv", "train.jsonl",
                 "validation.jsonl", "test.jsonl", "manifest.txt"}) {
    EXPECT_TRUE(fs::exists(cfg.output_dir / f)) << f;
  }
  EXPECT_FALSE(fs::exists(cfg.output_dir / "train.tsv"));
  EXPECT_FALSE(fs::exists(dir / "out.partial"));

  const auto m = Manifest::read(cfg.output_dir / "manifest.txt");
  EXPECT_EQ(m.at("command"), "generate");
  EXPECT_EQ(m.at("count.articles"), "200");
  EXPECT_EQ(m.at("count.paragraphs"), "1600");
  EXPECT_EQ(m.at("count.clusters"), "4");
  EXPECT_EQ(m.at("count.train"), "700");
  EXPECT_EQ(m.at("count.train.entailment"), "350");
  EXPECT_EQ(m.at("count.validation"), "150");
  EXPECT_EQ(m.at("count.test.contradiction"), "75");
  EXPECT_EQ(m.at("seed.embed"), "43");
  EXPECT_EQ(m.at("config.lr_start"), "0.1");
  EXPECT_EQ(m.at("input.corpus.sha256"), sha256_file(cfg.input_path));
  EXPECT_EQ(m.at("output.train.jsonl.sha256"), sha256_file(cfg.output_dir / "train.jsonl"));
  EXPECT_EQ(m.at("content_hash"), s.content_hash);

  const auto splits = pairgen::read_splits(cfg.output_dir);
  EXPECT_EQ(splits.train.size(), 700u);
  const auto clusters = cluster::read_clusters(cfg.output_dir / "clusters.tsv");
  const auto asg = cluster::assignment(clusters);
  for (const auto& p : splits.train) {
    if (p.label == pairgen::Label::kContradiction) {
      EXPECT_NE(asg.at(p.provenance.premise_article_id),
                asg.at(p.provenance.hypothesis_article_id));
    } else {
      EXPECT_EQ(p.provenance.premise_article_id, p.provenance.hypothesis_article_id);
      EXPECT_EQ(p.provenance.premise_para_idx + 1, p.provenance.hypothesis_para_idx);
    }
  }
}

TEST(Generate, ReproducibleAcrossOutputDirectories) {
  testing::TempDir dir("generate");
  auto cfg = planted_config(dir);
  cfg.output_dir = dir / "one";
  const auto a = run_generate(cfg);
  cfg.output_dir = dir / "two";
  const auto b = run_generate(cfg);
  EXPECT_EQ(a.content_hash, b.content_hash);
  EXPECT_EQ(testing::read_file(dir / "one" / "train.jsonl"),
            testing::read_file(dir / "two" / "train.jsonl"));
  cfg.seed = 43;
  cfg.output_dir = dir / "three";
  EXPECT_NE(run_generate(cfg).content_hash, a.content_hash);
}

TEST(Generate, IndependentOfThreadCount) {
  testing::TempDir dir("generate");
  auto cfg = planted_config(dir);
  cfg.threads = 1;
  cfg.output_dir = dir / "t1";
  const auto a = run_generate(cfg);
  cfg.threads = 4;
  cfg.output_dir = dir / "t4";
  EXPECT_EQ(run_generate(cfg).content_hash, a.content_hash);
}

TEST(Generate, TsvAndTfidfOptions) {
  testing::TempDir dir("generate");
  auto cfg = planted_config(dir);
  cfg.write_tsv = true;
  cfg.embedder = EmbedderKind::kTfidf;
  const auto s = run_generate(cfg);
  EXPECT_EQ(s.pairs, 1000u);
  EXPECT_GE(s.clusters, 2u);
  EXPECT_TRUE(fs::exists(cfg.output_dir / "train.tsv"));
  EXPECT_FALSE(fs::exists(cfg.output_dir / "model.bin"));
}

TEST(Generate, MissingInputIsUsageErrorWithoutOutput) {
  testing::TempDir dir("generate");
  PipelineConfig cfg;
  cfg.input_path = dir / "nope.jsonl";
  cfg.output_dir = dir / "out";
  EXPECT_THROW(run_generate(cfg), UsageError);
  EXPECT_FALSE(fs::exists(dir / "out"));
  EXPECT_FALSE(fs::exists(dir / "out.partial"));
}

TEST(Generate, FailureLeavesNoPartialOutput) {
  testing::TempDir dir("generate");
  auto cfg = planted_config(dir);
  cfg.per_class = 5000;  // more than the 1,400 entailment pairs available
  try {
    run_generate(cfg);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("pairgen: ", 0), 0u) << e.what();
  }
  EXPECT_FALSE(fs::exists(cfg.output_dir));
  EXPECT_FALSE(fs::exists(dir / "out.partial"));
}

TEST(Generate, MalformedCorpusNamesTheLine) {
  testing::TempDir dir("generate");
  {
    std::ofstream(dir / "bad.jsonl") << "{\"id\":\"a\",\"body\":\"x\"}\n{not json\n";
  }
  PipelineConfig cfg;
  cfg.input_path = dir / "bad.jsonl";
  cfg.output_dir = dir / "out";
  try {
    run_generate(cfg);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.jsonl:2"), std::string::npos) << e.what();
  }
}

TEST(Stages, ReproduceGenerate) {
  testing::TempDir dir("stages");
  const auto cfg = planted_config(dir);
  run_generate(cfg);

  run_ingest(cfg, cfg.input_path, dir / "articles.jsonl");
  EXPECT_TRUE(fs::exists(dir / "articles.jsonl.manifest"));
  EXPECT_EQ(testing::read_file(dir / "articles.jsonl"),
            testing::read_file(cfg.output_dir / "articles.jsonl"));

  run_embed(cfg, dir / "articles.jsonl", dir / "emb");
  EXPECT_EQ(testing::read_file(dir / "emb" / "vectors.bin"),
            testing::read_file(cfg.output_dir / "vectors.bin"));
  EXPECT_TRUE(fs::exists(dir / "emb" / "index.bin"));
  EXPECT_TRUE(fs::exists(dir / "emb" / "manifest.txt"));

  run_cluster(cfg, dir / "articles.jsonl", dir / "emb" / "vectors.bin", dir / "clu");
  EXPECT_EQ(testing::read_file(dir / "clu" / "clusters.tsv"),
            testing::read_file(cfg.output_dir / "clusters.tsv"));

  run_pairs(cfg, dir / "articles.jsonl", dir / "emb" / "vectors.bin",
            dir / "clu" / "clusters.tsv", dir / "pairs.jsonl");
  EXPECT_EQ(Manifest::read(dir / "pairs.jsonl.manifest").at("count.pairs"), "1000");

  run_split(cfg, dir / "pairs.jsonl", dir / "ds");
  for (auto name : pairgen::kSplitNames) {
    const std::string f = std::string(name) + ".jsonl";
    EXPECT_EQ(testing::read_file(dir / "ds" / f), testing::read_file(cfg.output_dir / f)) << f;
  }
}

TEST(Stages, ClusterComputesVectorsWhenNotGiven) {
  testing::TempDir dir("stages");
  const auto cfg = planted_config(dir);
  run_ingest(cfg, cfg.input_path, dir / "articles.jsonl");
  run_cluster(cfg, dir / "articles.jsonl", {}, dir / "clu");
  EXPECT_TRUE(fs::exists(dir / "clu" / "vectors.bin"));
  EXPECT_EQ(cluster::read_clusters(dir / "clu" / "clusters.tsv").size(), 4u);
}

TEST(Stages, MissingInputsAreUsageErrors) {
  testing::TempDir dir("stages");
  const PipelineConfig cfg;
  EXPECT_THROW(run_ingest(cfg, dir / "none.jsonl", dir / "a.jsonl"), UsageError);
  EXPECT_THROW(run_embed(cfg, dir / "none.jsonl", dir / "e"), UsageError);
  EXPECT_THROW(run_split(cfg, dir / "none.jsonl", dir / "s"), UsageError);
  EXPECT_THROW(run_degrade_plan(cfg, dir / "none", dir / "p"), UsageError);
  EXPECT_THROW(run_baseline(cfg, dir / "none", dir / "r.csv"), UsageError);
  EXPECT_FALSE(fs::exists(dir / "a.jsonl"));
}

TEST(DegradePlan, WritesOneSubsetPerPercentage) {
  testing::TempDir dir("plan");
  const auto cfg = planted_config(dir);
  run_generate(cfg);
  run_degrade_plan(cfg, cfg.output_dir, dir / "plan");
  const std::vector<std::pair<std::string, std::size_t>> expected = {
      {"100", 700}, {"50", 350}, {"30", 210}, {"10", 70}, {"1", 7}};
  const auto m = Manifest::read(dir / "plan" / "manifest.txt");
  for (const auto& [pct, n] : expected) {
    const auto subset = pairgen::read_pairs(dir / "plan" / ("train_" + pct + ".jsonl"));
    EXPECT_EQ(subset.size(), n) << pct;
    EXPECT_EQ(m.at("count.train_" + pct), std::to_string(n));
  }
  const auto ten = pairgen::read_pairs(dir / "plan" / "train_10.jsonl");
  EXPECT_EQ(pairgen::count_label(ten, pairgen::Label::kEntailment), 35u);
}

TEST(Baseline, RecordsAndReports) {
  testing::TempDir dir("baseline");
  const auto cfg = planted_config(dir);
  run_generate(cfg);
  const auto records = run_baseline(cfg, cfg.output_dir, dir / "res" / "results.csv");
  ASSERT_EQ(records.size(), 5u);
  const auto back = degrade::read_records_csv(dir / "res" / "results.csv");
  EXPECT_EQ(back.size(), 5u);
  const auto report_csv = testing::read_file(dir / "res" / "results.report.csv");
  std::istringstream lines(report_csv);
  std::string line;
  std::size_t rows = 0;
  std::size_t dp_rows = 0;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    ++rows;
    // model,data_pct,test_loss,test_acc,acc_deg,deg_pct,deg_speed
    const auto last = line.rfind(',');
    const auto prev = line.rfind(',', last - 1);
    if (last - prev > 1) ++dp_rows;
    EXPECT_GT(line.size(), last + 1) << "speed on every row";
  }
  EXPECT_EQ(rows, 5u);
  EXPECT_EQ(dp_rows, 4u);
  EXPECT_NE(testing::read_file(dir / "res" / "results.md").find("| baseline-logreg | 100% |"),
            std::string::npos);
  const auto m = Manifest::read(dir / "res" / "results.csv.manifest");
  EXPECT_EQ(m.at("count.train"), "700");
  EXPECT_TRUE(m.count("output.results.md.sha256"));
}

TEST(Baseline, FullPercentageOnlyWritesRecords) {
  testing::TempDir dir("baseline");
  auto cfg = planted_config(dir);
  run_generate(cfg);
  cfg.pcts = {100};
  const auto records = run_baseline(cfg, cfg.output_dir, dir / "r.csv");
  ASSERT_EQ(records.size(), 1u);
  EXPECT_TRUE(fs::exists(dir / "r.csv"));
  EXPECT_FALSE(fs::exists(dir / "r.report.csv"));
  EXPECT_FALSE(fs::exists(dir / "r.md"));
}

TEST(DegradeReport, RendersReferenceRecords) {
  testing::TempDir dir("report");
  std::ostringstream echo;
  const auto report = run_degrade_report(
      fs::path(ENTAIL_FORGE_TEST_DATA) / "reference_records.csv", degrade::TableStyle::kPaper,
      {dir / "report.csv", dir / "report.md"}, &echo);
  EXPECT_EQ(report.models.size(), 7u);
  EXPECT_EQ(testing::read_file(dir / "report.md"), echo.str());
  EXPECT_NE(echo.str().find("24.47%"), std::string::npos);
  const auto csv = testing::read_file(dir / "report.csv");
  EXPECT_NE(csv.find("ULMFiT Tagalog,1,"), std::string::npos);
  EXPECT_NE(csv.find(",21.87,24.47,8.33\n"), std::string::npos);
}

TEST(DegradeReport, NoOutputsRequested) {
  std::ostringstream echo;
  run_degrade_report(fs::path(ENTAIL_FORGE_TEST_DATA) / "reference_records.csv",
                     degrade::TableStyle::kPlain, {}, &echo);
  EXPECT_FALSE(echo.str().empty());
  EXPECT_THROW(run_degrade_report("/nonexistent.csv", degrade::TableStyle::kPlain, {}, nullptr),
               UsageError);
}

}  // namespace
}  // namespace entail_forge::pipeline
