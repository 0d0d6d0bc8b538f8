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

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <system_error>

#include "entail_forge/baseline.h"
#include "entail_forge/error.h"
#include "entail_forge/textproc.h"

namespace entail_forge::pipeline {
namespace fs = std::filesystem;

void rethrow_in_stage(const Error& e, std::string_view stage) {
  const std::string msg = std::string(stage) + ": " + e.what();
  switch (e.kind()) {
    case ErrorKind::kUsage:
      throw UsageError(msg);
    case ErrorKind::kData:
      throw DataError(msg);
    case ErrorKind::kInvariant:
      break;
  }
  throw InvariantError(msg);
}

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw InvariantError("sha256 initialisation failed");
    }
  }
  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_.get(), data, n) != 1) {
      throw InvariantError("sha256 update failed");
    }
  }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), md.data(), &len) != 1) {
      throw InvariantError("sha256 finalisation failed");
    }
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
      out += kDigits[md[i] >> 4];
      out += kDigits[md[i] & 0xf];
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

// Writes through "<path>.partial" and renames on success.
void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  fs::path tmp = path;
  tmp += ".partial";
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw DataError("cannot write " + path.string());
      body(out);
      out.flush();
      if (!out) throw DataError("write failed: " + path.string());
    }
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

fs::path manifest_path_for(const fs::path& file) {
  fs::path m = file;
  m += ".manifest";
  return m;
}

std::string pct_label(double pct) { return format_number(pct); }

textproc::StopwordSet load_stopword_set(const PipelineConfig& config) {
  if (config.stopwords_path.empty()) return {};
  require_input(config.stopwords_path, "stopwords file");
  textproc::StopwordSet raw = textproc::load_stopwords(config.stopwords_path);
  if (!config.lowercase) return raw;
  textproc::StopwordSet lowered;
  for (const auto& w : raw) lowered.insert(textproc::to_lower(w));
  return lowered;
}

std::size_t paragraph_count(const std::vector<ingest::Article>& articles) {
  std::size_t n = 0;
  for (const auto& a : articles) n += a.paragraphs.size();
  return n;
}

std::size_t degenerate_count(const embed::DocVectorMap& vectors) {
  std::size_t n = 0;
  for (const auto& [id, v] : vectors) n += v.is_degenerate ? 1 : 0;
  return n;
}

void set_split_counts(Manifest& m, const pairgen::DatasetSplits& s) {
  using pairgen::Label;
  const std::array<const std::vector<pairgen::NLIPair>*, 3> parts = {&s.train, &s.validation,
                                                                     &s.test};
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string name(pairgen::kSplitNames[i]);
    m.set_count(name, parts[i]->size());
    m.set_count(name + ".entailment", pairgen::count_label(*parts[i], Label::kEntailment));
    m.set_count(name + ".contradiction",
                pairgen::count_label(*parts[i], Label::kContradiction));
  }
}

void add_split_outputs(Manifest& m, const fs::path& dir, bool tsv) {
  for (auto name : pairgen::kSplitNames) {
    const std::string base(name);
    m.add_output(base + ".jsonl", dir / (base + ".jsonl"));
    if (tsv) m.add_output(base + ".tsv", dir / (base + ".tsv"));
  }
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  Sha256 h;
  h.update(bytes.data(), bytes.size());
  return h.hex();
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  Sha256 h;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  if (in.bad()) throw DataError("read failed: " + path.string());
  return h.hex();
}

Manifest::Manifest(std::string command) : command_(std::move(command)) {}

void Manifest::set(const std::string& key, const std::string& value) {
  if (key.find_first_of("=\n") != std::string::npos ||
      value.find('\n') != std::string::npos) {
    throw InvariantError("manifest entries must be single-line key=value: " + key);
  }
  entries_[key] = value;
}

void Manifest::set_count(const std::string& name, std::size_t value) {
  set("count." + name, std::to_string(value));
}

void Manifest::set_config(const PipelineConfig& config) {
  for (const auto& [key, value] : config.effective()) set("config." + key, value);
  set("seed", std::to_string(config.seed));
  set("seed.embed", std::to_string(config.embed_seed()));
  set("seed.forest", std::to_string(config.forest_seed()));
  set("seed.contradictions", std::to_string(config.contradiction_seed()));
  set("seed.shuffle", std::to_string(config.shuffle_seed()));
  set("seed.subsample", std::to_string(config.subsample_seed()));
  set("seed.baseline", std::to_string(config.baseline_seed()));
}

void Manifest::add_input(const std::string& name, const fs::path& path) {
  set("input." + name + ".path", path.string());
  set("input." + name + ".sha256", sha256_file(path));
}

void Manifest::add_output(const std::string& name, const fs::path& path) {
  outputs_[name] = sha256_file(path);
}

std::string Manifest::content_hash() const {
  std::string joined;
  for (const auto& [name, hash] : outputs_) joined += name + "=" + hash + "\n";
  return sha256_hex(joined);
}

std::string Manifest::str() const {
  std::ostringstream out;
  out << "# entail-forge manifest\n";
  out << "format=1\n";
  out << "command=" << command_ << "\n";
  for (const auto& [key, value] : entries_) out << key << "=" << value << "\n";
  for (const auto& [name, hash] : outputs_) out << "output." << name << ".sha256=" << hash << "\n";
  out << "content_hash=" << content_hash() << "\n";
  return out.str();
}

void Manifest::write(const fs::path& path) const {
  const std::string text = str();
  write_file(path, [&](std::ostream& out) { out << text; });
}

std::map<std::string, std::string> Manifest::read(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read manifest " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DataError("malformed manifest line: " + line);
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

StagedDir::StagedDir(fs::path target) {
  target = target.lexically_normal();
  if (!target.has_filename()) target = target.parent_path();
  if (target.empty()) throw UsageError("output directory must not be empty");
  target_ = target;
  staging_ = target;
  staging_ += ".partial";
  std::error_code ec;
  fs::remove_all(staging_, ec);
  fs::create_directories(staging_);
}

StagedDir::~StagedDir() {
  if (!committed_) {
    std::error_code ec;
    fs::remove_all(staging_, ec);
  }
}

void StagedDir::commit() {
  fs::create_directories(target_);
  for (const auto& entry : fs::directory_iterator(staging_)) {
    const fs::path dest = target_ / entry.path().filename();
    if (fs::is_directory(dest) && !entry.is_directory()) {
      throw DataError("cannot replace directory " + dest.string());
    }
    std::error_code ec;
    if (entry.is_directory()) fs::remove_all(dest, ec);
    fs::rename(entry.path(), dest);
  }
  fs::remove_all(staging_);
  committed_ = true;
}

void require_input(const fs::path& path, std::string_view what) {
  if (path.empty()) throw UsageError(std::string(what) + " path is required");
  if (!fs::exists(path)) {
    throw UsageError(std::string(what) + " not found: " + path.string());
  }
}

PreparedText prepare_text(const std::vector<ingest::Article>& articles,
                          const PipelineConfig& config) {
  PreparedText out;
  std::vector<textproc::TokenList> docs;
  std::vector<std::vector<textproc::TokenList>> raw(articles.size());
  docs.reserve(articles.size());
  for (std::size_t i = 0; i < articles.size(); ++i) {
    textproc::TokenList doc;
    for (const auto& para : articles[i].paragraphs) {
      raw[i].push_back(textproc::tokenize(para, config.lowercase));
      doc.insert(doc.end(), raw[i].back().begin(), raw[i].back().end());
    }
    docs.push_back(std::move(doc));
  }
  out.vocab = textproc::Vocabulary::build(docs, config.tfidf_min_count);
  const textproc::StopwordSet stopwords = load_stopword_set(config);
  out.tokens.reserve(articles.size());
  for (std::size_t i = 0; i < articles.size(); ++i) {
    embed::TokenizedArticle t;
    t.id = articles[i].id;
    for (const auto& para : raw[i]) {
      t.paragraphs.push_back(
          textproc::filter_function_words(para, out.vocab, stopwords, config.idf_min));
    }
    out.tokens.push_back(std::move(t));
  }
  return out;
}

EmbedResult embed_articles(const std::vector<ingest::Article>& articles,
                           const PipelineConfig& config) {
  PreparedText text = run_stage("textproc", [&] { return prepare_text(articles, config); });
  return run_stage("embed", [&] {
    EmbedResult r;
    if (config.embedder == EmbedderKind::kPvDbow) {
      r.model = embed::train_pvdbow(text.tokens, config.pvdbow_params());
      r.vectors = embed::embed_corpus_pvdbow(*r.model);
    } else {
      r.vectors = embed::embed_corpus_tfidf(text.tokens, text.vocab);
    }
    return r;
  });
}

ClusterResult cluster_articles(const embed::DocVectorMap& vectors,
                               const annindex::RpForest& forest,
                               const PipelineConfig& config) {
  return run_stage("cluster", [&] {
    ClusterResult r;
    r.edges = cluster::build_similarity_graph(vectors, forest, config.graph_params());
    r.clusters = cluster::connected_components(cluster::clusterable_ids(vectors), r.edges);
    return r;
  });
}

std::vector<pairgen::NLIPair> make_pairs(const std::vector<ingest::Article>& articles,
                                         const std::vector<cluster::Cluster>& clusters,
                                         const embed::DocVectorMap& vectors,
                                         const PipelineConfig& config) {
  return run_stage("pairgen", [&] {
    const auto entailments = pairgen::gen_entailment_pool(articles);
    pairgen::ContradictionParams cp;
    cp.count = config.contradiction_pool == 0 ? config.per_class : config.contradiction_pool;
    cp.threshold = config.threshold;
    cp.seed = config.contradiction_seed();
    cp.max_retries_per_pair = config.max_retries;
    const auto contradictions = pairgen::gen_contradictions(articles, clusters, vectors, cp);
    return pairgen::assemble_dataset(entailments, contradictions, config.per_class,
                                     config.shuffle_seed());
  });
}

namespace {

annindex::RpForest build_forest(const embed::DocVectorMap& vectors,
                                const PipelineConfig& config) {
  return run_stage("annindex",
                   [&] { return annindex::RpForest::build(vectors, config.forest_params()); });
}

std::vector<ingest::Article> load_ingested(const fs::path& path) {
  require_input(path, "articles file");
  return run_stage("ingest", [&] { return ingest::read_articles(path); });
}

}  // namespace

void run_ingest(const PipelineConfig& config, const fs::path& in, const fs::path& out) {
  config.validate();
  require_input(in, "input corpus");
  const auto articles = run_stage("ingest", [&] {
    return ingest::ingest_articles(ingest::load_articles(in), config.ingest_options());
  });
  write_file(out, [&](std::ostream& os) { ingest::write_articles(os, articles); });
  Manifest m("ingest");
  m.set_config(config);
  m.add_input("corpus", in);
  m.set_count("articles", articles.size());
  m.set_count("paragraphs", paragraph_count(articles));
  m.add_output(out.filename().string(), out);
  m.write(manifest_path_for(out));
}

void run_embed(const PipelineConfig& config, const fs::path& articles_path,
               const fs::path& out_dir) {
  config.validate();
  const auto articles = load_ingested(articles_path);
  const EmbedResult emb = embed_articles(articles, config);
  const annindex::RpForest forest = build_forest(emb.vectors, config);

  StagedDir stage(out_dir);
  Manifest m("embed");
  m.set_config(config);
  m.add_input("articles", articles_path);
  embed::save_doc_vectors(stage.file("vectors.bin"), emb.vectors);
  m.add_output("vectors.bin", stage.file("vectors.bin"));
  if (emb.model) {
    write_file(stage.file("model.bin"), [&](std::ostream& os) { emb.model->save(os); });
    m.add_output("model.bin", stage.file("model.bin"));
  }
  forest.save(stage.file("index.bin"));
  m.add_output("index.bin", stage.file("index.bin"));
  m.set_count("articles", emb.vectors.size());
  m.set_count("degenerate", degenerate_count(emb.vectors));
  m.write(stage.file("manifest.txt"));
  stage.commit();
}

void run_cluster(const PipelineConfig& config, const fs::path& articles_path,
                 const fs::path& vectors_path, const fs::path& out_dir) {
  config.validate();
  embed::DocVectorMap vectors;
  if (vectors_path.empty()) {
    vectors = embed_articles(load_ingested(articles_path), config).vectors;
  } else {
    require_input(vectors_path, "vectors file");
    vectors = run_stage("embed", [&] { return embed::load_doc_vectors(vectors_path); });
  }
  const annindex::RpForest forest = build_forest(vectors, config);
  const ClusterResult cr = cluster_articles(vectors, forest, config);

  StagedDir stage(out_dir);
  Manifest m("cluster");
  m.set_config(config);
  if (vectors_path.empty()) {
    m.add_input("articles", articles_path);
    embed::save_doc_vectors(stage.file("vectors.bin"), vectors);
    m.add_output("vectors.bin", stage.file("vectors.bin"));
  } else {
    m.add_input("vectors", vectors_path);
  }
  write_file(stage.file("clusters.tsv"),
             [&](std::ostream& os) { cluster::write_clusters(os, cr.clusters); });
  m.add_output("clusters.tsv", stage.file("clusters.tsv"));
  m.set_count("edges", cr.edges.size());
  m.set_count("clusters", cr.clusters.size());
  m.set_count("clustered_articles", forest.n_items());
  m.set_count("degenerate", degenerate_count(vectors));
  m.write(stage.file("manifest.txt"));
  stage.commit();
}

void run_pairs(const PipelineConfig& config, const fs::path& articles_path,
               const fs::path& vectors_path, const fs::path& clusters_path,
               const fs::path& out) {
  config.validate();
  const auto articles = load_ingested(articles_path);
  require_input(vectors_path, "vectors file");
  require_input(clusters_path, "clusters file");
  const auto vectors = run_stage("embed", [&] { return embed::load_doc_vectors(vectors_path); });
  const auto clusters =
      run_stage("cluster", [&] { return cluster::read_clusters(clusters_path); });
  const auto pairs = make_pairs(articles, clusters, vectors, config);
  write_file(out, [&](std::ostream& os) { pairgen::write_pairs(os, pairs); });
  Manifest m("pairs");
  m.set_config(config);
  m.add_input("articles", articles_path);
  m.add_input("vectors", vectors_path);
  m.add_input("clusters", clusters_path);
  m.set_count("pairs", pairs.size());
  m.set_count("pairs.entailment", pairgen::count_label(pairs, pairgen::Label::kEntailment));
  m.set_count("pairs.contradiction",
              pairgen::count_label(pairs, pairgen::Label::kContradiction));
  m.add_output(out.filename().string(), out);
  m.write(manifest_path_for(out));
}

void run_split(const PipelineConfig& config, const fs::path& pairs_path,
               const fs::path& out_dir) {
  config.validate();
  require_input(pairs_path, "pairs file");
  const auto pairs = run_stage("split", [&] { return pairgen::read_pairs(pairs_path); });
  const auto splits =
      run_stage("split", [&] { return pairgen::split_dataset(pairs, config.split_options()); });
  StagedDir stage(out_dir);
  pairgen::write_splits(stage.path(), splits, config.write_tsv);
  Manifest m("split");
  m.set_config(config);
  m.add_input("pairs", pairs_path);
  set_split_counts(m, splits);
  add_split_outputs(m, stage.path(), config.write_tsv);
  m.write(stage.file("manifest.txt"));
  stage.commit();
}

GenerateSummary run_generate(const PipelineConfig& config) {
  config.validate();
  require_input(config.input_path, "input corpus");
  if (config.output_dir.empty()) throw UsageError("output_dir is required");

  const auto articles = run_stage("ingest", [&] {
    return ingest::ingest_articles(ingest::load_articles(config.input_path),
                                   config.ingest_options());
  });
  const EmbedResult emb = embed_articles(articles, config);
  const annindex::RpForest forest = build_forest(emb.vectors, config);
  const ClusterResult cr = cluster_articles(emb.vectors, forest, config);
  const auto pairs = make_pairs(articles, cr.clusters, emb.vectors, config);
  const auto splits =
      run_stage("split", [&] { return pairgen::split_dataset(pairs, config.split_options()); });

  StagedDir stage(config.output_dir);
  Manifest m("generate");
  m.set_config(config);
  m.add_input("corpus", config.input_path);

  write_file(stage.file("articles.jsonl"),
             [&](std::ostream& os) { ingest::write_articles(os, articles); });
  m.add_output("articles.jsonl", stage.file("articles.jsonl"));
  embed::save_doc_vectors(stage.file("vectors.bin"), emb.vectors);
  m.add_output("vectors.bin", stage.file("vectors.bin"));
  if (emb.model) {
    write_file(stage.file("model.bin"), [&](std::ostream& os) { emb.model->save(os); });
    m.add_output("model.bin", stage.file("model.bin"));
  }
  write_file(stage.file("clusters.tsv"),
             [&](std::ostream& os) { cluster::write_clusters(os, cr.clusters); });
  m.add_output("clusters.tsv", stage.file("clusters.tsv"));
  pairgen::write_splits(stage.path(), splits, config.write_tsv);
  add_split_outputs(m, stage.path(), config.write_tsv);

  GenerateSummary s;
  s.output_dir = config.output_dir;
  s.articles = articles.size();
  s.clusters = cr.clusters.size();
  s.pairs = pairs.size();
  s.entailment = pairgen::count_label(pairs, pairgen::Label::kEntailment);
  s.contradiction = pairgen::count_label(pairs, pairgen::Label::kContradiction);

  m.set_count("articles", s.articles);
  m.set_count("paragraphs", paragraph_count(articles));
  m.set_count("degenerate", degenerate_count(emb.vectors));
  m.set_count("edges", cr.edges.size());
  m.set_count("clusters", s.clusters);
  m.set_count("pairs", s.pairs);
  m.set_count("pairs.entailment", s.entailment);
  m.set_count("pairs.contradiction", s.contradiction);
  set_split_counts(m, splits);
  s.content_hash = m.content_hash();
  m.write(stage.file("manifest.txt"));
  stage.commit();
  return s;
}

void run_degrade_plan(const PipelineConfig& config, const fs::path& dataset_dir,
                      const fs::path& out_dir) {
  config.validate();
  require_input(dataset_dir, "dataset directory");
  const auto splits = run_stage("degrade", [&] { return pairgen::read_splits(dataset_dir); });
  StagedDir stage(out_dir);
  Manifest m("degrade-plan");
  m.set_config(config);
  for (auto name : pairgen::kSplitNames) {
    const std::string file = std::string(name) + ".jsonl";
    m.add_input(std::string(name), dataset_dir / file);
  }
  for (double pct : config.pcts) {
    const auto subset = run_stage("degrade", [&] {
      return degrade::subsample_train(splits.train, pct, config.subsample_seed(),
                                      config.stratify);
    });
    const std::string file = "train_" + pct_label(pct) + ".jsonl";
    write_file(stage.file(file), [&](std::ostream& os) { pairgen::write_pairs(os, subset); });
    m.add_output(file, stage.file(file));
    m.set_count("train_" + pct_label(pct), subset.size());
  }
  m.write(stage.file("manifest.txt"));
  stage.commit();
}

std::vector<degrade::DegradationRecord> run_baseline(const PipelineConfig& config,
                                                     const fs::path& dataset_dir,
                                                     const fs::path& out_csv) {
  config.validate();
  require_input(dataset_dir, "dataset directory");
  if (out_csv.empty()) throw UsageError("output CSV path is required");
  const auto splits = run_stage("baseline", [&] { return pairgen::read_splits(dataset_dir); });
  const auto records = run_stage("baseline", [&] {
    return baseline::run_degradation_suite(splits, config.pcts, config.subsample_seed(),
                                           config.baseline_config(), config.stratify);
  });
  // A 100%-only run has nothing to compare against; only the records are written.
  const bool reduced = std::any_of(records.begin(), records.end(),
                                   [](const auto& r) { return r.data_pct != 100.0; });
  write_file(out_csv, [&](std::ostream& os) { degrade::write_records_csv(os, records); });
  fs::path report_csv = out_csv;
  report_csv.replace_extension(".report.csv");
  fs::path table = out_csv;
  table.replace_extension(".md");
  if (reduced) {
    const auto report = run_stage("degrade", [&] { return degrade::build_report(records); });
    write_file(report_csv, [&](std::ostream& os) { degrade::write_report_csv(os, report); });
    write_file(table, [&](std::ostream& os) {
      os << degrade::render_table(report, degrade::TableStyle::kPlain);
    });
  }

  Manifest m("baseline");
  m.set_config(config);
  for (auto name : pairgen::kSplitNames) {
    const std::string file = std::string(name) + ".jsonl";
    m.add_input(std::string(name), dataset_dir / file);
  }
  m.set_count("train", splits.train.size());
  m.set_count("test", splits.test.size());
  m.add_output(out_csv.filename().string(), out_csv);
  if (reduced) {
    m.add_output(report_csv.filename().string(), report_csv);
    m.add_output(table.filename().string(), table);
  }
  m.write(manifest_path_for(out_csv));
  return records;
}

degrade::DegradationReport run_degrade_report(const fs::path& records_csv,
                                              degrade::TableStyle style,
                                              const ReportOutputs& outputs,
                                              std::ostream* echo) {
  require_input(records_csv, "records CSV");
  const auto report = run_stage("degrade", [&] {
    return degrade::build_report(degrade::read_records_csv(records_csv));
  });
  const std::string table = degrade::render_table(report, style);
  if (!outputs.csv.empty()) {
    write_file(outputs.csv, [&](std::ostream& os) { degrade::write_report_csv(os, report); });
  }
  if (!outputs.table.empty()) {
    write_file(outputs.table, [&](std::ostream& os) { os << table; });
  }
  if (!outputs.csv.empty() || !outputs.table.empty()) {
    Manifest m("degrade-report");
    m.set("table_style", style == degrade::TableStyle::kPaper ? "paper" : "plain");
    m.add_input("records", records_csv);
    if (!outputs.csv.empty()) m.add_output(outputs.csv.filename().string(), outputs.csv);
    if (!outputs.table.empty()) m.add_output(outputs.table.filename().string(), outputs.table);
    m.write(manifest_path_for(outputs.csv.empty() ? outputs.table : outputs.csv));
  }
  if (echo != nullptr) *echo << table;
  return report;
}

}  // namespace entail_forge::pipeline
