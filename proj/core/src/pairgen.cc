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

#include "entail_forge/pairgen.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <unordered_map>

#include "entail_forge/error.h"
#include "entail_forge/random.h"

namespace entail_forge::pairgen {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Articles eligible for contradiction sampling, grouped by cluster.
struct UsablePool {
  std::vector<std::vector<const ingest::Article*>> by_cluster;
};

UsablePool usable_pool(const std::vector<ingest::Article>& articles,
                       const std::vector<cluster::Cluster>& clusters,
                       const embed::DocVectorMap& vectors) {
  std::unordered_map<std::string, const ingest::Article*> by_id;
  for (const auto& a : articles) by_id.emplace(a.id, &a);
  UsablePool pool;
  for (const auto& c : clusters) {
    std::vector<const ingest::Article*> members;
    for (const auto& id : c.members) {
      auto a = by_id.find(id);
      auto v = vectors.find(id);
      if (a == by_id.end() || a->second->paragraphs.empty()) continue;
      if (v == vectors.end() || v->second.is_degenerate) continue;
      members.push_back(a->second);
    }
    if (!members.empty()) pool.by_cluster.push_back(std::move(members));
  }
  return pool;
}

std::size_t get_index(const json& meta, const char* key, const std::string& at) {
  auto it = meta.find(key);
  if (it == meta.end() || !it->is_number_unsigned()) {
    throw DataError(at + "meta." + key + " must be a non-negative integer");
  }
  return it->get<std::size_t>();
}

std::string get_string(const json& obj, const char* key, const std::string& at) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw DataError(at + "field \"" + key + "\" must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

std::string_view label_name(Label label) {
  return label == Label::kEntailment ? "entailment" : "contradiction";
}

Label parse_label(std::string_view name) {
  if (name == "entailment") return Label::kEntailment;
  if (name == "contradiction") return Label::kContradiction;
  throw DataError("unknown label \"" + std::string(name) + "\"");
}

std::vector<NLIPair> gen_entailments(const ingest::Article& article) {
  std::vector<NLIPair> pairs;
  for (std::size_t i = 0; i + 1 < article.paragraphs.size(); ++i) {
    pairs.push_back(NLIPair{article.paragraphs[i], article.paragraphs[i + 1],
                            Label::kEntailment,
                            Provenance{article.id, i, article.id, i + 1}});
  }
  return pairs;
}

std::vector<NLIPair> gen_entailment_pool(const std::vector<ingest::Article>& articles) {
  std::vector<NLIPair> pool;
  for (const auto& a : articles) {
    auto pairs = gen_entailments(a);
    std::move(pairs.begin(), pairs.end(), std::back_inserter(pool));
  }
  return pool;
}

std::vector<NLIPair> gen_contradictions(const std::vector<ingest::Article>& articles,
                                        const std::vector<cluster::Cluster>& clusters,
                                        const embed::DocVectorMap& vectors,
                                        const ContradictionParams& params) {
  const UsablePool pool = usable_pool(articles, clusters, vectors);
  const std::size_t m = pool.by_cluster.size();
  if (m < 2) {
    throw DataError("gen_contradictions: need ≥ 2 clusters, found " +
                    std::to_string(m));
  }
  if (params.max_retries_per_pair < 1) {
    throw UsageError("gen_contradictions: max_retries_per_pair must be >= 1");
  }
  Rng rng(params.seed);
  std::set<Provenance> emitted;
  std::vector<NLIPair> out;
  out.reserve(params.count);
  while (out.size() < params.count) {
    bool done = false;
    for (std::size_t attempt = 0; attempt < params.max_retries_per_pair; ++attempt) {
      const std::size_t ci = rng.uniform_index(m);
      std::size_t cj = rng.uniform_index(m - 1);
      if (cj >= ci) ++cj;
      const auto& first_members = pool.by_cluster[ci];
      const auto& second_members = pool.by_cluster[cj];
      const ingest::Article* first = first_members[rng.uniform_index(first_members.size())];
      const ingest::Article* second =
          second_members[rng.uniform_index(second_members.size())];
      if (!cluster::are_dissimilar(vectors.at(first->id), vectors.at(second->id),
                                   params.threshold)) {
        continue;
      }
      const std::size_t pi = rng.uniform_index(first->paragraphs.size());
      const std::size_t hi = rng.uniform_index(second->paragraphs.size());
      Provenance prov{first->id, pi, second->id, hi};
      if (!emitted.insert(prov).second) continue;
      out.push_back(NLIPair{first->paragraphs[pi], second->paragraphs[hi],
                            Label::kContradiction, std::move(prov)});
      done = true;
      break;
    }
    if (!done) {
      throw DataError("gen_contradictions: pair " + std::to_string(out.size() + 1) +
                      " not found after " +
                      std::to_string(params.max_retries_per_pair) + " attempts");
    }
  }
  return out;
}

std::vector<NLIPair> assemble_dataset(const std::vector<NLIPair>& entailment_pool,
                                      const std::vector<NLIPair>& contradiction_pool,
                                      std::size_t per_class, std::uint64_t seed) {
  if (entailment_pool.size() < per_class || contradiction_pool.size() < per_class) {
    throw DataError("assemble_dataset: need " + std::to_string(per_class) +
                    " pairs per class, found " +
                    std::to_string(entailment_pool.size()) + " entailment and " +
                    std::to_string(contradiction_pool.size()) + " contradiction");
  }
  Rng rng(seed);
  std::vector<NLIPair> out;
  out.reserve(2 * per_class);
  for (std::size_t i : rng.sample_without_replacement(entailment_pool.size(), per_class)) {
    out.push_back(entailment_pool[i]);
  }
  for (std::size_t i :
       rng.sample_without_replacement(contradiction_pool.size(), per_class)) {
    out.push_back(contradiction_pool[i]);
  }
  rng.shuffle(out);
  return out;
}

SplitSizes SplitSizes::from_ratios(double train, double validation, double test) {
  for (double r : {train, validation, test}) {
    if (!(r >= 0.0 && r <= 1.0)) throw UsageError("split ratios must lie in [0, 1]");
  }
  if (train + validation + test > 1.0 + 1e-9) {
    throw UsageError("split ratios sum to more than 1");
  }
  return SplitSizes{train, validation, test, true};
}

SplitSizes SplitSizes::from_counts(std::size_t train, std::size_t validation,
                                   std::size_t test) {
  return SplitSizes{static_cast<double>(train), static_cast<double>(validation),
                    static_cast<double>(test), false};
}

std::array<std::size_t, 3> SplitSizes::resolve(std::size_t n) const {
  std::array<std::size_t, 3> counts{};
  const std::array<double, 3> parts = {train, validation, test};
  if (ratios) {
    for (std::size_t i = 0; i < 3; ++i) {
      counts[i] = static_cast<std::size_t>(
          std::floor(static_cast<double>(n) * parts[i] + 1e-6));
    }
    const std::size_t sum = counts[0] + counts[1] + counts[2];
    if (std::abs(parts[0] + parts[1] + parts[2] - 1.0) < 1e-9 && sum < n) {
      counts[0] += n - sum;
    }
  } else {
    for (std::size_t i = 0; i < 3; ++i) counts[i] = static_cast<std::size_t>(parts[i]);
  }
  if (counts[0] + counts[1] + counts[2] > n) {
    throw DataError("split_dataset: sizes " + std::to_string(counts[0]) + "/" +
                    std::to_string(counts[1]) + "/" + std::to_string(counts[2]) +
                    " exceed " + std::to_string(n) + " pairs");
  }
  return counts;
}

std::size_t count_label(const std::vector<NLIPair>& pairs, Label label) {
  return static_cast<std::size_t>(std::count_if(
      pairs.begin(), pairs.end(), [label](const NLIPair& p) { return p.label == label; }));
}

DatasetSplits split_dataset(const std::vector<NLIPair>& pairs,
                            const SplitOptions& options) {
  const auto sizes = options.sizes.resolve(pairs.size());
  Rng rng(options.seed);
  DatasetSplits out;
  out.seed = options.seed;
  std::array<std::vector<NLIPair>*, 3> dest = {&out.train, &out.validation, &out.test};

  if (options.article_disjoint) {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      groups[pairs[i].provenance.premise_article_id].push_back(i);
    }
    std::vector<const std::vector<std::size_t>*> order;
    for (const auto& [id, members] : groups) order.push_back(&members);
    rng.shuffle(order);
    for (const auto* members : order) {
      for (std::size_t s = 0; s < 3; ++s) {
        if (dest[s]->size() < sizes[s]) {
          for (std::size_t i : *members) dest[s]->push_back(pairs[i]);
          break;
        }
      }
    }
    for (auto* d : dest) rng.shuffle(*d);
    return out;
  }

  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);

  if (!options.stratify) {
    std::size_t pos = 0;
    for (std::size_t s = 0; s < 3; ++s) {
      for (std::size_t i = 0; i < sizes[s]; ++i) dest[s]->push_back(pairs[order[pos++]]);
    }
    return out;
  }

  std::array<std::vector<std::size_t>, 2> by_label;
  for (std::size_t i : order) {
    by_label[pairs[i].label == Label::kEntailment ? 0 : 1].push_back(i);
  }
  std::array<std::size_t, 2> cursor = {0, 0};
  for (std::size_t s = 0; s < 3; ++s) {
    std::array<std::size_t, 2> take = {sizes[s] / 2, sizes[s] / 2};
    if (sizes[s] % 2 == 1) {
      const std::size_t left_e = by_label[0].size() - std::min(by_label[0].size(), cursor[0] + take[0]);
      const std::size_t left_c = by_label[1].size() - std::min(by_label[1].size(), cursor[1] + take[1]);
      ++take[left_e >= left_c ? 0 : 1];
    }
    for (std::size_t l = 0; l < 2; ++l) {
      if (cursor[l] + take[l] > by_label[l].size()) {
        throw DataError(std::string("split_dataset: not enough ") +
                        std::string(label_name(l == 0 ? Label::kEntailment
                                                      : Label::kContradiction)) +
                        " pairs to stratify the " + std::string(kSplitNames[s]) +
                        " split");
      }
      for (std::size_t i = 0; i < take[l]; ++i) {
        dest[s]->push_back(pairs[by_label[l][cursor[l]++]]);
      }
    }
    rng.shuffle(*dest[s]);
  }
  return out;
}

void write_pairs(std::ostream& out, const std::vector<NLIPair>& pairs) {
  for (const auto& p : pairs) {
    ordered_json record;
    record["premise"] = p.premise;
    record["hypothesis"] = p.hypothesis;
    record["label"] = label_name(p.label);
    ordered_json meta;
    meta["premise_article_id"] = p.provenance.premise_article_id;
    meta["premise_para_idx"] = p.provenance.premise_para_idx;
    meta["hypothesis_article_id"] = p.provenance.hypothesis_article_id;
    meta["hypothesis_para_idx"] = p.provenance.hypothesis_para_idx;
    record["meta"] = std::move(meta);
    out << record.dump() << '\n';
  }
}

std::vector<NLIPair> read_pairs(std::istream& in, const std::string& source_name) {
  std::vector<NLIPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string at = source_name + ":" + std::to_string(line_no) + ": ";
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(at + "malformed record: " + e.what());
    }
    if (!record.is_object()) throw DataError(at + "record is not an object");
    NLIPair p;
    p.premise = get_string(record, "premise", at);
    p.hypothesis = get_string(record, "hypothesis", at);
    p.label = parse_label(get_string(record, "label", at));
    auto meta = record.find("meta");
    if (meta == record.end() || !meta->is_object()) {
      throw DataError(at + "missing \"meta\" object");
    }
    p.provenance.premise_article_id = get_string(*meta, "premise_article_id", at);
    p.provenance.premise_para_idx = get_index(*meta, "premise_para_idx", at);
    p.provenance.hypothesis_article_id = get_string(*meta, "hypothesis_article_id", at);
    p.provenance.hypothesis_para_idx = get_index(*meta, "hypothesis_para_idx", at);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::vector<NLIPair> read_pairs(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read pairs file: " + path.string());
  return read_pairs(in, path.string());
}

std::string escape_tsv(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text) {
    switch (ch) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(ch);
    }
  }
  return out;
}

void write_pairs_tsv(std::ostream& out, const std::vector<NLIPair>& pairs) {
  for (const auto& p : pairs) {
    out << escape_tsv(p.premise) << '\t' << escape_tsv(p.hypothesis) << '\t'
        << label_name(p.label) << '\n';
  }
}

void write_splits(const std::filesystem::path& dir, const DatasetSplits& splits,
                  bool tsv) {
  std::filesystem::create_directories(dir);
  const std::array<const std::vector<NLIPair>*, 3> parts = {
      &splits.train, &splits.validation, &splits.test};
  for (std::size_t s = 0; s < 3; ++s) {
    const auto base = dir / std::string(kSplitNames[s]);
    std::ofstream out(base.string() + ".jsonl", std::ios::binary);
    if (!out) throw DataError("cannot write " + base.string() + ".jsonl");
    write_pairs(out, *parts[s]);
    if (tsv) {
      std::ofstream t(base.string() + ".tsv", std::ios::binary);
      if (!t) throw DataError("cannot write " + base.string() + ".tsv");
      write_pairs_tsv(t, *parts[s]);
    }
  }
}

DatasetSplits read_splits(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw UsageError("dataset directory not found: " + dir.string());
  }
  DatasetSplits splits;
  const std::array<std::vector<NLIPair>*, 3> parts = {
      &splits.train, &splits.validation, &splits.test};
  for (std::size_t s = 0; s < 3; ++s) {
    *parts[s] = read_pairs(dir / (std::string(kSplitNames[s]) + ".jsonl"));
  }
  return splits;
}

}  // namespace entail_forge::pairgen
