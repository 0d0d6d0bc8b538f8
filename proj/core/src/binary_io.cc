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

#include "entail_forge/binary_io.h"

#include <algorithm>
#include <bit>
#include <limits>

#include "entail_forge/error.h"

namespace entail_forge {

namespace {
constexpr std::uint8_t kDenseTag = 0;
constexpr std::uint8_t kSparseTag = 1;
// Corrupt length fields are rejected outright or, below the limit, caught
// as truncation; buffers grow at most kReserveCap elements ahead of the data.
constexpr std::uint64_t kMaxLength = std::uint64_t{1} << 34;
constexpr std::size_t kReserveCap = std::size_t{1} << 16;
}  // namespace

void BinaryWriter::magic(std::string_view tag) {
  if (tag.size() != 8) throw InvariantError("magic tags are 8 bytes");
  out_.write(tag.data(), 8);
}

void BinaryWriter::u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }

void BinaryWriter::u32(std::uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out_.write(buf, 4);
}

void BinaryWriter::u64(std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out_.write(buf, 8);
}

void BinaryWriter::f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

void BinaryWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void BinaryWriter::str(std::string_view s) {
  u32(static_cast<std::uint32_t>(s.size()));
  out_.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void BinaryWriter::vec(const AnyVector& v) {
  if (const auto* d = std::get_if<DenseVector>(&v)) {
    u8(kDenseTag);
    u64(d->size());
    for (double x : *d) f64(x);
    return;
  }
  const auto& s = std::get<SparseVector>(v);
  u8(kSparseTag);
  u8(s.is_zero ? 1 : 0);
  u64(s.entries.size());
  for (const auto& [id, w] : s.entries) {
    u32(id);
    f64(w);
  }
}

void BinaryReader::read(char* dst, std::size_t n) {
  in_.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in_.gcount()) != n) {
    throw DataError(source_ + ": truncated file");
  }
}

void BinaryReader::expect_magic(std::string_view tag) {
  char buf[8];
  read(buf, 8);
  if (std::string_view(buf, 8) != tag) {
    throw DataError(source_ + ": bad magic, expected " + std::string(tag));
  }
}

std::uint8_t BinaryReader::u8() {
  char c;
  read(&c, 1);
  return static_cast<std::uint8_t>(c);
}

std::uint32_t BinaryReader::u32() {
  unsigned char buf[4];
  read(reinterpret_cast<char*>(buf), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{buf[i]} << (8 * i);
  return v;
}

std::uint64_t BinaryReader::u64() {
  unsigned char buf[8];
  read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{buf[i]} << (8 * i);
  return v;
}

float BinaryReader::f32() { return std::bit_cast<float>(u32()); }

double BinaryReader::f64() { return std::bit_cast<double>(u64()); }

std::string BinaryReader::str() {
  const std::uint32_t n = u32();
  // Grow in chunks so a corrupt length fails as truncation, not as bad_alloc.
  std::string s;
  while (s.size() < n) {
    const std::size_t chunk = std::min<std::size_t>(n - s.size(), kReserveCap);
    const std::size_t at = s.size();
    s.resize(at + chunk);
    read(s.data() + at, chunk);
  }
  return s;
}

AnyVector BinaryReader::vec() {
  const std::uint8_t tag = u8();
  if (tag == kDenseTag) {
    const std::uint64_t n = u64();
    if (n > kMaxLength) throw DataError(source_ + ": corrupt vector length");
    DenseVector d;
    d.reserve(std::min<std::uint64_t>(n, kReserveCap));
    for (std::uint64_t i = 0; i < n; ++i) d.push_back(f64());
    return d;
  }
  if (tag != kSparseTag) throw DataError(source_ + ": unknown vector tag");
  SparseVector s;
  s.is_zero = u8() != 0;
  const std::uint64_t n = u64();
  if (n > kMaxLength) throw DataError(source_ + ": corrupt vector length");
  s.entries.reserve(std::min<std::uint64_t>(n, kReserveCap));
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint32_t id = u32();
    s.entries.emplace_back(id, f64());
  }
  return s;
}

}  // namespace entail_forge
