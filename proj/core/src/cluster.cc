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

#include "entail_forge/cluster.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include "entail_forge/error.h"
#include "entail_forge/parallel.h"

namespace entail_forge::cluster {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned> rank_;
};

}  // namespace

bool are_dissimilar(const embed::DocVector& a, const embed::DocVector& b,
                    double threshold) {
  if (a.is_degenerate || b.is_degenerate) {
    throw InvariantError("are_dissimilar: degenerate vector (" +
                         (a.is_degenerate ? a.article_id : b.article_id) + ")");
  }
  return annindex::cosine(a.components, b.components) < threshold;
}

std::vector<Edge> build_similarity_graph(const embed::DocVectorMap& vectors,
                                         const annindex::RpForest& forest,
                                         const GraphParams& params) {
  const auto& ids = forest.ids();
  std::vector<std::vector<Edge>> per_item(ids.size());
  parallel_for(ids.size(), params.threads, [&](std::size_t i) {
    auto it = vectors.find(ids[i]);
    if (it == vectors.end()) {
      throw InvariantError("build_similarity_graph: forest id \"" + ids[i] +
                           "\" missing from vectors");
    }
    const auto neighbors =
        forest.query(it->second, params.k_neighbors + 1, params.search_k);
    std::size_t taken = 0;
    for (const auto& n : neighbors) {
      if (n.id == ids[i]) continue;
      if (taken++ == params.k_neighbors) break;
      if (n.cosine >= params.threshold) {
        per_item[i].push_back(ids[i] < n.id ? Edge{ids[i], n.id}
                                            : Edge{n.id, ids[i]});
      }
    }
  });
  std::vector<Edge> edges;
  for (auto& e : per_item) {
    std::move(e.begin(), e.end(), std::back_inserter(edges));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

std::vector<Cluster> connected_components(
    const std::vector<std::string>& article_ids, const std::vector<Edge>& edges) {
  std::vector<std::string> ids = article_ids;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);

  DisjointSets sets(ids.size());
  for (const auto& e : edges) {
    auto ia = index.find(e.a);
    auto ib = index.find(e.b);
    if (ia == index.end() || ib == index.end()) {
      throw DataError("connected_components: edge references unknown id \"" +
                      (ia == index.end() ? e.a : e.b) + "\"");
    }
    sets.unite(ia->second, ib->second);
  }
  // ids are sorted, so the first time a root is seen is at its smallest member.
  std::unordered_map<std::size_t, std::size_t> root_to_cluster;
  std::vector<Cluster> clusters;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const std::size_t root = sets.find(i);
    auto [it, inserted] = root_to_cluster.emplace(root, clusters.size());
    if (inserted) clusters.push_back(Cluster{clusters.size(), {}});
    clusters[it->second].members.push_back(ids[i]);
  }
  return clusters;
}

std::vector<std::string> clusterable_ids(const embed::DocVectorMap& vectors) {
  std::vector<std::string> ids;
  for (const auto& [id, v] : vectors) {
    if (!v.is_degenerate) ids.push_back(id);
  }
  return ids;
}

std::map<std::string, std::size_t> assignment(const std::vector<Cluster>& clusters) {
  std::map<std::string, std::size_t> out;
  for (const auto& c : clusters) {
    for (const auto& m : c.members) out.emplace(m, c.cluster_id);
  }
  return out;
}

void write_clusters(std::ostream& out, const std::vector<Cluster>& clusters) {
  for (const auto& c : clusters) {
    for (const auto& m : c.members) out << c.cluster_id << '\t' << m << '\n';
  }
}

std::vector<Cluster> read_clusters(std::istream& in, const std::string& source_name) {
  std::map<std::size_t, std::vector<std::string>> grouped;
  std::map<std::string, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    const std::string at = source_name + ":" + std::to_string(line_no) + ": ";
    if (tab == std::string::npos) throw DataError(at + "expected cluster_id<TAB>article_id");
    std::size_t cid = 0;
    try {
      std::size_t used = 0;
      cid = std::stoull(line.substr(0, tab), &used);
      if (used != tab) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DataError(at + "bad cluster id");
    }
    std::string id = line.substr(tab + 1);
    if (!seen.emplace(id, cid).second) {
      throw DataError(at + "article \"" + id + "\" listed twice");
    }
    grouped[cid].push_back(std::move(id));
  }
  std::vector<Cluster> clusters;
  for (auto& [cid, members] : grouped) {
    if (cid != clusters.size()) {
      throw DataError(source_name + ": cluster ids are not dense from 0");
    }
    std::sort(members.begin(), members.end());
    clusters.push_back(Cluster{cid, std::move(members)});
  }
  return clusters;
}

std::vector<Cluster> read_clusters(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read clusters file: " + path.string());
  return read_clusters(in, path.string());
}

}  // namespace entail_forge::cluster
