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

#ifndef ENTAIL_FORGE_PIPELINE_H_
#define ENTAIL_FORGE_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "entail_forge/annindex.h"
#include "entail_forge/cluster.h"
#include "entail_forge/config.h"
#include "entail_forge/degrade.h"
#include "entail_forge/embed.h"
#include "entail_forge/ingest.h"
#include "entail_forge/pairgen.h"

namespace entail_forge::pipeline {

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

// Plain-text key=value provenance record. Output file hashes feed a final
// content_hash line, so two runs that produced the same bytes share it even
// when written to different directories.
class Manifest {
 public:
  explicit Manifest(std::string command);

  void set(const std::string& key, const std::string& value);
  void set_count(const std::string& name, std::size_t value);
  void set_config(const PipelineConfig& config);
  void add_input(const std::string& name, const std::filesystem::path& path);
  void add_output(const std::string& name, const std::filesystem::path& path);

  std::string content_hash() const;
  std::string str() const;
  void write(const std::filesystem::path& path) const;

  // Parses a written manifest back into its key/value lines.
  static std::map<std::string, std::string> read(const std::filesystem::path& path);

 private:
  std::string command_;
  std::map<std::string, std::string> entries_;
  std::map<std::string, std::string> outputs_;  // name -> sha256
};

// Output directory built under "<target>.partial" and moved into place by
// commit(). Destroying an uncommitted stage removes what was written.
class StagedDir {
 public:
  explicit StagedDir(std::filesystem::path target);
  ~StagedDir();
  StagedDir(const StagedDir&) = delete;
  StagedDir& operator=(const StagedDir&) = delete;

  const std::filesystem::path& path() const { return staging_; }
  std::filesystem::path file(std::string_view name) const { return staging_ / name; }
  void commit();

 private:
  std::filesystem::path target_;
  std::filesystem::path staging_;
  bool committed_ = false;
};

// Throws UsageError naming the path when it does not exist.
void require_input(const std::filesystem::path& path, std::string_view what);

// Runs fn, prefixing any error message with the stage name.
template <typename Fn>
auto run_stage(std::string_view stage, Fn&& fn) -> decltype(fn());

// Tokenized, function-word-filtered paragraphs for every article.
struct PreparedText {
  std::vector<embed::TokenizedArticle> tokens;
  textproc::Vocabulary vocab;  // article-level document frequencies
};
PreparedText prepare_text(const std::vector<ingest::Article>& articles,
                          const PipelineConfig& config);

struct EmbedResult {
  embed::DocVectorMap vectors;
  std::optional<embed::EmbeddingModel> model;  // pvdbow only
};
EmbedResult embed_articles(const std::vector<ingest::Article>& articles,
                           const PipelineConfig& config);

struct ClusterResult {
  std::vector<cluster::Edge> edges;
  std::vector<cluster::Cluster> clusters;
};
ClusterResult cluster_articles(const embed::DocVectorMap& vectors,
                               const annindex::RpForest& forest,
                               const PipelineConfig& config);

// Entailment pool, contradictions and the balanced dataset before splitting.
std::vector<pairgen::NLIPair> make_pairs(const std::vector<ingest::Article>& articles,
                                         const std::vector<cluster::Cluster>& clusters,
                                         const embed::DocVectorMap& vectors,
                                         const PipelineConfig& config);

struct GenerateSummary {
  std::filesystem::path output_dir;
  std::size_t articles = 0;
  std::size_t clusters = 0;
  std::size_t pairs = 0;
  std::size_t entailment = 0;
  std::size_t contradiction = 0;
  std::string content_hash;
};

// Stand-alone stages. Each writes its artifact(s) plus a manifest: for a
// single-file output "<out>.manifest", for a directory "<dir>/manifest.txt".
void run_ingest(const PipelineConfig& config, const std::filesystem::path& in,
                const std::filesystem::path& out);
void run_embed(const PipelineConfig& config, const std::filesystem::path& articles_path,
               const std::filesystem::path& out_dir);
// vectors_path may be empty, in which case vectors are computed and saved too.
void run_cluster(const PipelineConfig& config, const std::filesystem::path& articles_path,
                 const std::filesystem::path& vectors_path,
                 const std::filesystem::path& out_dir);
void run_pairs(const PipelineConfig& config, const std::filesystem::path& articles_path,
               const std::filesystem::path& vectors_path,
               const std::filesystem::path& clusters_path, const std::filesystem::path& out);
void run_split(const PipelineConfig& config, const std::filesystem::path& pairs_path,
               const std::filesystem::path& out_dir);

// End to end over config.input_path into config.output_dir.
GenerateSummary run_generate(const PipelineConfig& config);

// Writes train_<pct>.jsonl for every pct in config.pcts.
void run_degrade_plan(const PipelineConfig& config, const std::filesystem::path& dataset_dir,
                      const std::filesystem::path& out_dir);

// Baseline suite on a dataset directory; writes the records CSV to out_csv
// and, next to it, "<stem>.report.csv" and "<stem>.md" (skipped when every pct
// is 100).
std::vector<degrade::DegradationRecord> run_baseline(
    const PipelineConfig& config, const std::filesystem::path& dataset_dir,
    const std::filesystem::path& out_csv);

struct ReportOutputs {
  std::filesystem::path csv;  // empty: skip
  std::filesystem::path table;
};
// Renders a records CSV; the table also goes to `echo` when non-null.
degrade::DegradationReport run_degrade_report(const std::filesystem::path& records_csv,
                                              degrade::TableStyle style,
                                              const ReportOutputs& outputs,
                                              std::ostream* echo);

}  // namespace entail_forge::pipeline

#include "entail_forge/pipeline_inl.h"

#endif  // ENTAIL_FORGE_PIPELINE_H_
