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

#ifndef ENTAIL_FORGE_CLUSTER_H_
#define ENTAIL_FORGE_CLUSTER_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "entail_forge/annindex.h"
#include "entail_forge/embed.h"

namespace entail_forge::cluster {

inline constexpr double kDefaultThreshold = 0.65;

// True iff cosine(a, b) < threshold. Throws InvariantError on degenerate input.
bool are_dissimilar(const embed::DocVector& a, const embed::DocVector& b,
                    double threshold = kDefaultThreshold);

// Undirected edge with a < b (byte-wise id order).
struct Edge {
  std::string a;
  std::string b;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct GraphParams {
  std::size_t k_neighbors = 20;
  double threshold = kDefaultThreshold;
  std::optional<std::size_t> search_k;
  int threads = 1;
};

// For each indexed article, queries its k_neighbors nearest candidates (self
// excluded) and keeps pairs with cosine >= threshold. Deduplicated and sorted.
std::vector<Edge> build_similarity_graph(const embed::DocVectorMap& vectors,
                                         const annindex::RpForest& forest,
                                         const GraphParams& params);

struct Cluster {
  std::size_t cluster_id = 0;
  std::vector<std::string> members;  // ascending

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

// Union-find components. Isolated ids become singletons; clusters are
// numbered densely in order of their smallest member id. An edge naming an
// unknown id throws DataError.
std::vector<Cluster> connected_components(
    const std::vector<std::string>& article_ids, const std::vector<Edge>& edges);

// Non-degenerate article ids of a vector map, in id order.
std::vector<std::string> clusterable_ids(const embed::DocVectorMap& vectors);

std::map<std::string, std::size_t> assignment(const std::vector<Cluster>& clusters);

// Lines of "cluster_id<TAB>article_id", by cluster then member.
void write_clusters(std::ostream& out, const std::vector<Cluster>& clusters);
std::vector<Cluster> read_clusters(std::istream& in, const std::string& source_name);
std::vector<Cluster> read_clusters(const std::filesystem::path& path);

}  // namespace entail_forge::cluster

#endif  // ENTAIL_FORGE_CLUSTER_H_
