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

#ifndef ENTAIL_FORGE_VECTORS_H_
#define ENTAIL_FORGE_VECTORS_H_

#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace entail_forge {

using DenseVector = std::vector<double>;

// Sorted (term_id, weight) entries. Entries hold nonzero weights only and
// term ids are strictly increasing. Unit norm unless is_zero.
struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> entries;
  bool is_zero = true;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

// Article vectors come out of either embedder: dense PV-DBOW means or sparse
// TF-IDF vectors. Everything downstream goes through dot()/norm() on this.
using AnyVector = std::variant<DenseVector, SparseVector>;

double dot(std::span<const double> a, std::span<const double> b);
double dot(const SparseVector& a, const SparseVector& b);
double dot(const AnyVector& a, const AnyVector& b);

double norm(const AnyVector& v);
double norm(std::span<const double> v);

inline double dot(const DenseVector& a, const DenseVector& b) {
  return dot(std::span<const double>(a), std::span<const double>(b));
}
inline double norm(const DenseVector& v) { return norm(std::span<const double>(v)); }

// Scales to unit L2 norm. Returns false (and leaves v untouched) when the
// norm is zero.
bool normalize(DenseVector& v);
bool normalize(SparseVector& v);

// a - b, in the representation of the inputs (both must match).
AnyVector difference(const AnyVector& a, const AnyVector& b);

bool is_sparse(const AnyVector& v);

}  // namespace entail_forge

#endif  // ENTAIL_FORGE_VECTORS_H_
