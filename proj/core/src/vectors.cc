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

#include "entail_forge/vectors.h"

#include <cmath>
#include <string>

#include "entail_forge/error.h"

namespace entail_forge {
namespace {

double dot_mixed(const DenseVector& dense, const SparseVector& sparse) {
  double sum = 0.0;
  for (const auto& [id, w] : sparse.entries) {
    if (id >= dense.size()) {
      throw InvariantError("dot: sparse index " + std::to_string(id) +
                           " outside dense dimension " +
                           std::to_string(dense.size()));
    }
    sum += dense[id] * w;
  }
  return sum;
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvariantError("dot: dimension mismatch " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double dot(const SparseVector& a, const SparseVector& b) {
  double sum = 0.0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() && ib != b.entries.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      sum += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

double dot(const AnyVector& a, const AnyVector& b) {
  if (const auto* da = std::get_if<DenseVector>(&a)) {
    if (const auto* db = std::get_if<DenseVector>(&b)) return dot(*da, *db);
    return dot_mixed(*da, std::get<SparseVector>(b));
  }
  const auto& sa = std::get<SparseVector>(a);
  if (const auto* db = std::get_if<DenseVector>(&b)) return dot_mixed(*db, sa);
  return dot(sa, std::get<SparseVector>(b));
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double norm(const AnyVector& v) { return std::sqrt(dot(v, v)); }

bool normalize(DenseVector& v) {
  const double n = norm(v);
  if (n == 0.0 || !std::isfinite(n)) return false;
  for (double& x : v) x /= n;
  return true;
}

bool normalize(SparseVector& v) {
  double sq = 0.0;
  for (const auto& e : v.entries) sq += e.second * e.second;
  const double n = std::sqrt(sq);
  if (n == 0.0 || !std::isfinite(n)) {
    v.is_zero = true;
    return false;
  }
  for (auto& e : v.entries) e.second /= n;
  v.is_zero = false;
  return true;
}

AnyVector difference(const AnyVector& a, const AnyVector& b) {
  if (a.index() != b.index()) {
    throw InvariantError("difference: mixed dense/sparse operands");
  }
  if (const auto* da = std::get_if<DenseVector>(&a)) {
    const auto& db = std::get<DenseVector>(b);
    if (da->size() != db.size()) {
      throw InvariantError("difference: dimension mismatch");
    }
    DenseVector out(da->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*da)[i] - db[i];
    return out;
  }
  const auto& sa = std::get<SparseVector>(a);
  const auto& sb = std::get<SparseVector>(b);
  SparseVector out;
  auto ia = sa.entries.begin();
  auto ib = sb.entries.begin();
  auto push = [&out](std::uint32_t id, double w) {
    if (w != 0.0) out.entries.emplace_back(id, w);
  };
  while (ia != sa.entries.end() || ib != sb.entries.end()) {
    if (ib == sb.entries.end() ||
        (ia != sa.entries.end() && ia->first < ib->first)) {
      push(ia->first, ia->second);
      ++ia;
    } else if (ia == sa.entries.end() || ib->first < ia->first) {
      push(ib->first, -ib->second);
      ++ib;
    } else {
      push(ia->first, ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  out.is_zero = out.entries.empty();
  return out;
}

bool is_sparse(const AnyVector& v) {
  return std::holds_alternative<SparseVector>(v);
}

}  // namespace entail_forge
