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

#ifndef ENTAIL_FORGE_ANNINDEX_H_
#define ENTAIL_FORGE_ANNINDEX_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "entail_forge/embed.h"
#include "entail_forge/vectors.h"

namespace entail_forge::annindex {

// u.v / (|u||v|) clamped to [-1, 1]. Throws InvariantError on a zero-norm
// input or a dimension mismatch.
double cosine(const AnyVector& u, const AnyVector& v);

struct ForestParams {
  std::size_t n_trees = 32;
  std::size_t leaf_size = 30;
  std::uint64_t seed = 1;
  int threads = 1;  // trees are built independently; output does not depend on it
};

struct Neighbor {
  std::string id;
  double cosine = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Forest of random hyperplane trees. Internal nodes split by the
// perpendicular bisector of two random member points; when that fails to
// separate the points a random-direction hyperplane through the median
// projection is tried up to three times before the node becomes an oversized
// leaf. Tree t draws from its own generator seeded with seed + t.
class RpForest {
 public:
  // Degenerate vectors are skipped (see skipped_degenerate()). Throws
  // DataError when nothing indexable remains.
  static RpForest build(const embed::DocVectorMap& vectors,
                        const ForestParams& params);

  // Exact-cosine top-k over the candidates met by a best-first walk of all
  // trees, stopping once min(search_k, n_items) distinct items are gathered.
  // search_k defaults to n_trees * k * 32. Sorted by descending cosine, ties
  // by ascending id.
  std::vector<Neighbor> query(const AnyVector& q, std::size_t k,
                              std::optional<std::size_t> search_k = {}) const;
  std::vector<Neighbor> query(const embed::DocVector& q, std::size_t k,
                              std::optional<std::size_t> search_k = {}) const;

  std::size_t n_items() const { return ids_.size(); }
  std::size_t n_trees() const { return trees_.size(); }
  const ForestParams& params() const { return params_; }
  std::size_t skipped_degenerate() const { return skipped_degenerate_; }
  const std::vector<std::string>& ids() const { return ids_; }
  const AnyVector& item_vector(std::size_t index) const { return items_.at(index); }

  // Item indices (into ids()) held by each leaf of one tree.
  std::vector<std::vector<std::uint32_t>> leaves(std::size_t tree) const;

  void save(std::ostream& out) const;
  static RpForest load(std::istream& in, const std::string& source_name);
  void save(const std::filesystem::path& path) const;
  static RpForest load(const std::filesystem::path& path);

  friend bool operator==(const RpForest&, const RpForest&);

 private:
  struct Node {
    bool is_leaf = true;
    std::int32_t left = -1;
    std::int32_t right = -1;
    AnyVector normal;
    double offset = 0.0;
    std::vector<std::uint32_t> items;

    friend bool operator==(const Node&, const Node&) = default;
  };
  using Tree = std::vector<Node>;  // nodes[0] is the root

  Tree build_tree(std::uint64_t tree_seed) const;

  ForestParams params_;
  std::vector<std::string> ids_;
  std::vector<AnyVector> items_;
  std::vector<Tree> trees_;
  std::size_t skipped_degenerate_ = 0;
};

}  // namespace entail_forge::annindex

#endif  // ENTAIL_FORGE_ANNINDEX_H_
