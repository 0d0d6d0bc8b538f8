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

#include "entail_forge/annindex.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <tuple>

#include "entail_forge/binary_io.h"
#include "entail_forge/error.h"
#include "entail_forge/parallel.h"
#include "entail_forge/random.h"

namespace entail_forge::annindex {
namespace {

constexpr std::string_view kMagic = "EFRPFRST";
constexpr std::uint32_t kFormatVersion = 1;
constexpr int kRandomDirectionAttempts = 3;

struct Split {
  AnyVector normal;
  double offset = 0.0;
  std::vector<std::uint32_t> left;
  std::vector<std::uint32_t> right;
};

double margin(const AnyVector& normal, double offset, const AnyVector& x) {
  return dot(normal, x) - offset;
}

bool partition(const std::vector<AnyVector>& items,
               const std::vector<std::uint32_t>& members, Split& split) {
  split.left.clear();
  split.right.clear();
  for (std::uint32_t m : members) {
    if (margin(split.normal, split.offset, items[m]) > 0) {
      split.right.push_back(m);
    } else {
      split.left.push_back(m);
    }
  }
  return !split.left.empty() && !split.right.empty();
}

AnyVector random_direction(const std::vector<AnyVector>& items,
                           const std::vector<std::uint32_t>& members, Rng& rng) {
  const AnyVector& first = items[members.front()];
  if (const auto* dense = std::get_if<DenseVector>(&first)) {
    DenseVector d(dense->size());
    for (double& x : d) x = rng.normal();
    return d;
  }
  std::set<std::uint32_t> support;
  for (std::uint32_t m : members) {
    for (const auto& e : std::get<SparseVector>(items[m]).entries) {
      support.insert(e.first);
    }
  }
  SparseVector s;
  for (std::uint32_t id : support) s.entries.emplace_back(id, rng.normal());
  s.is_zero = s.entries.empty();
  return s;
}

}  // namespace

double cosine(const AnyVector& u, const AnyVector& v) {
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu == 0.0 || nv == 0.0) throw InvariantError("cosine: zero-norm vector");
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

RpForest RpForest::build(const embed::DocVectorMap& vectors,
                         const ForestParams& params) {
  if (params.n_trees < 1) throw UsageError("annindex: n_trees must be >= 1");
  if (params.leaf_size < 1) throw UsageError("annindex: leaf_size must be >= 1");
  RpForest f;
  f.params_ = params;
  for (const auto& [id, v] : vectors) {
    if (v.is_degenerate) {
      ++f.skipped_degenerate_;
      continue;
    }
    f.ids_.push_back(id);
    f.items_.push_back(v.components);
  }
  if (f.items_.empty()) throw DataError("annindex: no indexable vectors");
  for (std::size_t i = 1; i < f.items_.size(); ++i) {
    if (f.items_[i].index() != f.items_[0].index()) {
      throw InvariantError("annindex: mixed dense and sparse vectors");
    }
  }
  f.trees_.resize(params.n_trees);
  parallel_for(params.n_trees, params.threads, [&f](std::size_t t) {
    f.trees_[t] = f.build_tree(f.params_.seed + t);
  });
  return f;
}

RpForest::Tree RpForest::build_tree(std::uint64_t tree_seed) const {
  Rng rng(tree_seed);
  Tree tree;
  std::vector<std::uint32_t> all(items_.size());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  tree.push_back(Node{});
  // (node index, members) work list; depth-first keeps node numbering stable.
  std::vector<std::pair<std::size_t, std::vector<std::uint32_t>>> work;
  work.emplace_back(0, std::move(all));
  while (!work.empty()) {
    auto [node_index, members] = std::move(work.back());
    work.pop_back();
    if (members.size() <= params_.leaf_size) {
      tree[node_index].items = std::move(members);
      continue;
    }
    Split split;
    bool ok = false;
    {
      const std::size_t a = rng.uniform_index(members.size());
      std::size_t b = rng.uniform_index(members.size() - 1);
      if (b >= a) ++b;
      const AnyVector& pa = items_[members[a]];
      const AnyVector& pb = items_[members[b]];
      split.normal = difference(pa, pb);
      split.offset = 0.5 * (dot(pa, pa) - dot(pb, pb));
      ok = norm(split.normal) > 0.0 && partition(items_, members, split);
    }
    for (int attempt = 0; !ok && attempt < kRandomDirectionAttempts; ++attempt) {
      split.normal = random_direction(items_, members, rng);
      std::vector<double> proj;
      proj.reserve(members.size());
      for (std::uint32_t m : members) proj.push_back(dot(split.normal, items_[m]));
      std::sort(proj.begin(), proj.end());
      const std::size_t mid = proj.size() / 2;
      split.offset = 0.5 * (proj[mid - 1] + proj[mid]);
      ok = partition(items_, members, split);
    }
    if (!ok) {
      tree[node_index].items = std::move(members);
      continue;
    }
    const auto left = static_cast<std::int32_t>(tree.size());
    tree.push_back(Node{});
    const auto right = static_cast<std::int32_t>(tree.size());
    tree.push_back(Node{});
    Node& node = tree[node_index];
    node.is_leaf = false;
    node.left = left;
    node.right = right;
    node.normal = std::move(split.normal);
    node.offset = split.offset;
    work.emplace_back(static_cast<std::size_t>(right), std::move(split.right));
    work.emplace_back(static_cast<std::size_t>(left), std::move(split.left));
  }
  return tree;
}

std::vector<Neighbor> RpForest::query(const AnyVector& q, std::size_t k,
                                      std::optional<std::size_t> search_k) const {
  if (items_.empty()) throw DataError("annindex: query on an empty forest");
  if (k == 0) return {};
  if (norm(q) == 0.0) throw InvariantError("annindex: zero-norm query");
  const std::size_t budget = search_k.value_or(trees_.size() * k * 32);
  const std::size_t want = std::min(budget, items_.size());

  using Entry = std::tuple<double, std::int64_t, std::int64_t>;  // (priority, -tree, -node)
  std::priority_queue<Entry> frontier;
  for (std::size_t t = 0; t < trees_.size(); ++t) {
    frontier.emplace(std::numeric_limits<double>::infinity(),
                     -static_cast<std::int64_t>(t), 0);
  }
  std::vector<char> seen(items_.size(), 0);
  std::vector<std::uint32_t> candidates;
  while (candidates.size() < want && !frontier.empty()) {
    auto [priority, neg_tree, neg_node] = frontier.top();
    frontier.pop();
    const Node& node =
        trees_[static_cast<std::size_t>(-neg_tree)][static_cast<std::size_t>(-neg_node)];
    if (node.is_leaf) {
      for (std::uint32_t item : node.items) {
        if (!seen[item]) {
          seen[item] = 1;
          candidates.push_back(item);
        }
      }
      continue;
    }
    const double m = margin(node.normal, node.offset, q);
    frontier.emplace(std::min(priority, m), neg_tree, -std::int64_t{node.right});
    frontier.emplace(std::min(priority, -m), neg_tree, -std::int64_t{node.left});
  }

  std::vector<std::pair<double, std::uint32_t>> scored;
  scored.reserve(candidates.size());
  for (std::uint32_t c : candidates) scored.emplace_back(cosine(q, items_[c]), c);
  // Item indices follow ascending id order, so index order breaks ties by id.
  auto better = [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  };
  const std::size_t keep = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                    scored.end(), better);
  std::vector<Neighbor> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    out.push_back({ids_[scored[i].second], scored[i].first});
  }
  return out;
}

std::vector<Neighbor> RpForest::query(const embed::DocVector& q, std::size_t k,
                                      std::optional<std::size_t> search_k) const {
  if (q.is_degenerate) throw InvariantError("annindex: degenerate query vector");
  return query(q.components, k, search_k);
}

std::vector<std::vector<std::uint32_t>> RpForest::leaves(std::size_t tree) const {
  std::vector<std::vector<std::uint32_t>> out;
  for (const Node& n : trees_.at(tree)) {
    if (n.is_leaf) out.push_back(n.items);
  }
  return out;
}

bool operator==(const RpForest& a, const RpForest& b) {
  return a.params_.n_trees == b.params_.n_trees &&
         a.params_.leaf_size == b.params_.leaf_size &&
         a.params_.seed == b.params_.seed && a.ids_ == b.ids_ &&
         a.items_ == b.items_ && a.trees_ == b.trees_ &&
         a.skipped_degenerate_ == b.skipped_degenerate_;
}

void RpForest::save(std::ostream& out) const {
  BinaryWriter w(out);
  w.magic(kMagic);
  w.u32(kFormatVersion);
  w.u64(params_.n_trees);
  w.u64(params_.leaf_size);
  w.u64(params_.seed);
  w.u64(skipped_degenerate_);
  w.u64(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    w.str(ids_[i]);
    w.vec(items_[i]);
  }
  for (const Tree& tree : trees_) {
    w.u64(tree.size());
    for (const Node& n : tree) {
      w.u8(n.is_leaf ? 1 : 0);
      if (n.is_leaf) {
        w.u64(n.items.size());
        for (std::uint32_t item : n.items) w.u32(item);
      } else {
        w.i32(n.left);
        w.i32(n.right);
        w.f64(n.offset);
        w.vec(n.normal);
      }
    }
  }
  if (!out) throw DataError("failed writing forest");
}

RpForest RpForest::load(std::istream& in, const std::string& source_name) {
  BinaryReader r(in, source_name);
  r.expect_magic(kMagic);
  if (r.u32() != kFormatVersion) {
    throw DataError(source_name + ": unsupported forest version");
  }
  RpForest f;
  f.params_.n_trees = r.u64();
  f.params_.leaf_size = r.u64();
  f.params_.seed = r.u64();
  f.skipped_degenerate_ = r.u64();
  const std::uint64_t n = r.u64();
  for (std::uint64_t i = 0; i < n; ++i) {
    f.ids_.push_back(r.str());
    f.items_.push_back(r.vec());
  }
  f.trees_.resize(f.params_.n_trees);
  for (Tree& tree : f.trees_) {
    tree.resize(r.u64());
    for (Node& node : tree) {
      node.is_leaf = r.u8() != 0;
      if (node.is_leaf) {
        node.items.resize(r.u64());
        for (auto& item : node.items) {
          item = r.u32();
          if (item >= n) throw DataError(source_name + ": leaf item out of range");
        }
      } else {
        node.left = r.i32();
        node.right = r.i32();
        const auto size = static_cast<std::int32_t>(tree.size());
        if (node.left < 0 || node.left >= size || node.right < 0 ||
            node.right >= size) {
          throw DataError(source_name + ": child index out of range");
        }
        node.offset = r.f64();
        node.normal = r.vec();
      }
    }
  }
  return f;
}

void RpForest::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  save(out);
}

RpForest RpForest::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read index file: " + path.string());
  return load(in, path.string());
}

}  // namespace entail_forge::annindex
