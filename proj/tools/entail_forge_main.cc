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

#include <CLI11.hpp>

#include <deque>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "entail_forge/config.h"
#include "entail_forge/error.h"
#include "entail_forge/pipeline.h"

namespace {

namespace ef = entail_forge;
namespace fs = std::filesystem;

// Command-line options that map onto PipelineConfig keys. They are applied
// after the config file, so flags win.
class ConfigFlags {
 public:
  void value(CLI::App* app, const std::string& flags, const std::string& key,
             const std::string& help) {
    Entry& e = entries_.emplace_back();
    e.key = key;
    e.option = app->add_option(flags, e.value, help);
  }

  void fixed(CLI::App* app, const std::string& flags, const std::string& key,
             const std::string& value, const std::string& help) {
    Entry& e = entries_.emplace_back();
    e.key = key;
    e.value = value;
    e.option = app->add_flag(flags, help);
  }

  void apply(ef::PipelineConfig& config) const {
    for (const Entry& e : entries_) {
      if (e.option->count() > 0) config.set(e.key, e.value);
    }
  }

 private:
  struct Entry {
    CLI::Option* option = nullptr;
    std::string key;
    std::string value;
  };
  std::deque<Entry> entries_;  // stable addresses for CLI11 bindings
};

void text_options(CLI::App* app, ConfigFlags& f) {
  f.value(app, "--stopwords", "stopwords_path", "Stopword list, one token per line");
  f.value(app, "--idf-min", "idf_min", "Drop tokens with idf below this");
  f.value(app, "--tfidf-min-count", "tfidf_min_count", "Minimum corpus count for TF-IDF terms");
  f.fixed(app, "--no-lowercase", "lowercase", "false", "Keep token case");
}

void embed_options(CLI::App* app, ConfigFlags& f) {
  text_options(app, f);
  f.value(app, "--embedder", "embedder", "pvdbow or tfidf");
  f.value(app, "--dim", "dim", "Paragraph vector dimension");
  f.value(app, "--negatives", "negatives", "Noise words per observed word");
  f.value(app, "--epochs", "epochs", "Training epochs");
  f.value(app, "--lr-start", "lr_start", "Initial learning rate");
  f.value(app, "--lr-end", "lr_end", "Final learning rate");
  f.value(app, "--min-count", "min_count", "Minimum word count for PV-DBOW");
  f.value(app, "--noise-exponent", "noise_exponent", "Unigram noise exponent");
}

void index_options(CLI::App* app, ConfigFlags& f) {
  f.value(app, "--n-trees", "n_trees", "Trees in the projection forest");
  f.value(app, "--leaf-size", "leaf_size", "Maximum items per leaf");
  f.value(app, "--search-k", "search_k", "Candidates gathered per query, or 'auto'");
}

void cluster_options(CLI::App* app, ConfigFlags& f) {
  f.value(app, "--threshold", "threshold", "Cosine similarity threshold");
  f.value(app, "--k-neighbors", "k_neighbors", "Neighbours queried per article");
}

void pair_options(CLI::App* app, ConfigFlags& f) {
  f.value(app, "--per-class", "per_class", "Pairs drawn per label");
  f.value(app, "--contradiction-pool", "contradiction_pool",
          "Contradictions generated before sampling (0: per-class)");
  f.value(app, "--max-retries", "max_retries", "Retry budget per contradiction");
}

void split_options(CLI::App* app, ConfigFlags& f) {
  f.value(app, "--train", "split_train", "Train ratio or count");
  f.value(app, "--val", "split_val", "Validation ratio or count");
  f.value(app, "--test", "split_test", "Test ratio or count");
  f.fixed(app, "--stratify", "stratify", "true", "Balance labels within each split");
  f.fixed(app, "--no-stratify", "stratify", "false", "Split without label balancing");
  f.fixed(app, "--article-disjoint", "article_disjoint", "true",
          "Keep each premise article within one split");
  f.fixed(app, "--tsv", "write_tsv", "true", "Also write TSV files");
}

void ingest_options(CLI::App* app, ConfigFlags& f) {
  f.value(app, "--min-tokens", "min_tokens", "Drop paragraphs with fewer tokens");
  f.fixed(app, "--drop-empty", "drop_empty", "true", "Drop articles without paragraphs");
}

void baseline_options(CLI::App* app, ConfigFlags& f) {
  f.value(app, "--pcts", "pcts", "Comma-separated data percentages");
  f.fixed(app, "--no-stratify", "stratify", "false", "Subsample without label balancing");
  f.value(app, "--baseline-epochs", "baseline_epochs", "SGD epochs");
  f.value(app, "--baseline-lr", "baseline_lr", "SGD learning rate");
  f.value(app, "--baseline-l2", "baseline_l2", "L2 penalty");
}

int run(int argc, char** argv) {
  CLI::App app{"Builds two-label NLI datasets from news articles and measures "
               "accuracy degradation under reduced training data."};
  app.set_version_flag("--version", "entail-forge 0.1.0");
  app.require_subcommand(1);
  app.fallthrough();

  ConfigFlags flags;
  std::string config_path;
  bool print_config = false;
  app.add_option("--config", config_path, "Flat key = value config file");
  flags.value(&app, "--seed", "seed", "Master seed");
  flags.value(&app, "--threads", "threads", "Worker threads");
  flags.fixed(&app, "--deterministic", "deterministic", "true",
              "Bit-reproducible training (default)");
  flags.fixed(&app, "--no-deterministic", "deterministic", "false",
              "Allow lock-free parallel training");
  app.add_flag("--print-config", print_config, "Print the effective config to stdout");

  std::string in, out, articles, vectors, clusters, dataset, out_csv, out_md;
  std::string table_style = "paper";

  auto* ingest = app.add_subcommand("ingest", "Clean and segment raw articles");
  ingest->add_option("--in", in, "Raw JSONL corpus")->required();
  ingest->add_option("--out", out, "Articles JSONL")->required();
  ingest_options(ingest, flags);

  auto* embed = app.add_subcommand("embed", "Train article vectors and the ANN index");
  embed->add_option("--articles", articles, "Ingested articles JSONL")->required();
  embed->add_option("--out", out, "Output directory")->required();
  embed_options(embed, flags);
  index_options(embed, flags);

  auto* cluster = app.add_subcommand("cluster", "Group articles into topic clusters");
  cluster->add_option("--articles", articles, "Ingested articles (when --vectors is absent)");
  cluster->add_option("--vectors", vectors, "Saved article vectors");
  cluster->add_option("--out", out, "Output directory")->required();
  embed_options(cluster, flags);
  index_options(cluster, flags);
  cluster_options(cluster, flags);

  auto* pairs = app.add_subcommand("pairs", "Generate a balanced pair set");
  pairs->add_option("--articles", articles, "Ingested articles JSONL")->required();
  pairs->add_option("--vectors", vectors, "Saved article vectors")->required();
  pairs->add_option("--clusters", clusters, "Cluster TSV")->required();
  pairs->add_option("--out", out, "Pairs JSONL")->required();
  pair_options(pairs, flags);
  flags.value(pairs, "--threshold", "threshold", "Cosine threshold for contradictions");

  auto* split = app.add_subcommand("split", "Split pairs into train/validation/test");
  split->add_option("--in", in, "Pairs JSONL")->required();
  split->add_option("--out", out, "Output directory")->required();
  split_options(split, flags);

  auto* generate = app.add_subcommand("generate", "Run the full pipeline end to end");
  flags.value(generate, "--in", "input_path", "Raw JSONL corpus");
  flags.value(generate, "--out", "output_dir", "Dataset directory");
  ingest_options(generate, flags);
  embed_options(generate, flags);
  index_options(generate, flags);
  cluster_options(generate, flags);
  pair_options(generate, flags);
  split_options(generate, flags);

  auto* degrade = app.add_subcommand("degrade", "Degradation planning and reporting");
  degrade->require_subcommand(1);
  auto* plan = degrade->add_subcommand("plan", "Write subsampled training sets");
  plan->add_option("--dataset", dataset, "Dataset directory")->required();
  plan->add_option("--out", out, "Output directory (default <dataset>/degrade_plan)");
  flags.value(plan, "--pcts", "pcts", "Comma-separated data percentages");
  flags.fixed(plan, "--no-stratify", "stratify", "false", "Subsample without label balancing");
  auto* report = degrade->add_subcommand("report", "Compute metrics from a records CSV");
  report->add_option("--in", in, "Records CSV (model,data_pct,test_loss,test_acc)")
      ->required();
  report->add_option("--table-style", table_style, "paper or plain")
      ->check(CLI::IsMember({"paper", "plain"}));
  report->add_option("--out-csv", out_csv, "Report CSV");
  report->add_option("--out-md", out_md, "Rendered markdown table");

  auto* base = app.add_subcommand("baseline", "Run the lexical baseline degradation suite");
  base->add_option("--dataset", dataset, "Dataset directory")->required();
  base->add_option("--out", out, "Records CSV")->required();
  baseline_options(base, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ef::ErrorKind::kUsage);
  }

  ef::PipelineConfig config;
  if (!config_path.empty()) config.load_file(config_path);
  flags.apply(config);
  config.validate();
  if (print_config) {
    for (const auto& [key, value] : config.effective()) std::cout << key << "=" << value << "\n";
  }

  namespace pl = ef::pipeline;
  if (*ingest) {
    pl::run_ingest(config, in, out);
  } else if (*embed) {
    pl::run_embed(config, articles, out);
  } else if (*cluster) {
    if (vectors.empty() && articles.empty()) {
      throw ef::UsageError("cluster needs --vectors or --articles");
    }
    pl::run_cluster(config, articles, vectors, out);
  } else if (*pairs) {
    pl::run_pairs(config, articles, vectors, clusters, out);
  } else if (*split) {
    pl::run_split(config, in, out);
  } else if (*generate) {
    const auto s = pl::run_generate(config);
    std::cout << "output_dir=" << s.output_dir.string() << "\n"
              << "articles=" << s.articles << "\n"
              << "clusters=" << s.clusters << "\n"
              << "pairs=" << s.pairs << "\n"
              << "entailment=" << s.entailment << "\n"
              << "contradiction=" << s.contradiction << "\n"
              << "content_hash=" << s.content_hash << "\n";
  } else if (*plan) {
    pl::run_degrade_plan(config, dataset, out.empty() ? fs::path(dataset) / "degrade_plan"
                                                      : fs::path(out));
  } else if (*report) {
    const auto style =
        table_style == "plain" ? ef::degrade::TableStyle::kPlain : ef::degrade::TableStyle::kPaper;
    pl::run_degrade_report(in, style, {out_csv, out_md}, &std::cout);
  } else if (*base) {
    pl::run_baseline(config, dataset, out);
    fs::path table = out;
    table.replace_extension(".md");
    std::cout << "records=" << out << "\n";
    if (fs::exists(table)) std::cout << "table=" << table.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ef::Error& e) {
    std::cerr << "entail-forge: error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "entail-forge: error: " << e.what() << "\n";
    return static_cast<int>(ef::ErrorKind::kData);
  } catch (const std::exception& e) {
    std::cerr << "entail-forge: internal error: " << e.what() << "\n";
    return static_cast<int>(ef::ErrorKind::kInvariant);
  }
}
