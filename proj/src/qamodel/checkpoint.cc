/*
 * Copyright 2026 The rcqa-rationale Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rcqa/qamodel/checkpoint.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "rcqa/errors.h"

namespace rcqa::qamodel {
namespace {

using diffcore::Shape;
using diffcore::Tensor;

constexpr char kMagic[8] = {'R', 'C', 'Q', 'A', 'C', 'K', 'P', 'T'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void U64(std::uint64_t v) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out_.write(bytes, 8);
  }
  void U32(std::uint32_t v) {
    char bytes[4];
    for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out_.write(bytes, 4);
  }
  void F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }
  void Str(const std::string& s) {
    U64(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void Array(const Tensor& t) {
    U64(t.rank());
    for (std::size_t d : t.shape()) U64(d);
    for (double v : t.data()) F64(v);
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  Reader(std::istream& in, std::string file) : in_(in), file_(std::move(file)) {}

  void Bytes(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw ParseError(file_ + ": truncated checkpoint");
    }
  }
  std::uint64_t U64() {
    unsigned char b[8];
    Bytes(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  std::uint32_t U32() {
    unsigned char b[4];
    Bytes(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  double F64() { return std::bit_cast<double>(U64()); }
  std::string Str() {
    const std::uint64_t n = Bounded(U64(), "string length");
    std::string s(n, '\0');
    Bytes(s.data(), n);
    return s;
  }
  Tensor Array() {
    const std::uint64_t rank = Bounded(U64(), "array rank");
    Shape shape(rank);
    for (auto& d : shape) d = Bounded(U64(), "array extent");
    Tensor t(shape);
    for (double& v : t.data()) v = F64();
    return t;
  }
  // Guards allocations against corrupt length fields.
  std::uint64_t Bounded(std::uint64_t v, const char* what) {
    if (v > (1ULL << 32)) {
      throw ParseError(file_ + ": implausible " + what + " " +
                       std::to_string(v));
    }
    return v;
  }
  const std::string& file() const { return file_; }

 private:
  std::istream& in_;
  std::string file_;
};

}  // namespace

void SaveCheckpoint(const std::filesystem::path& path,
                    const ModelParameters& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path.string() + ": cannot open for writing");
  Writer w(out);
  out.write(kMagic, sizeof(kMagic));
  w.U32(kCheckpointVersion);
  w.Str(ModelKindName(params.kind));
  w.U64(params.dim);
  w.U64(params.hidden);
  w.U64(params.seed);
  w.Str(params.embeddings.VocabularyHash());
  w.U64(params.embeddings.size());
  for (const std::string& word : params.embeddings.vocabulary()) w.Str(word);
  w.Array(params.embeddings.rows());
  w.U64(params.arrays.size());
  for (const auto& [name, value] : params.arrays) {
    w.Str(name);
    w.Array(value);
  }
  if (!out) throw ParseError(path.string() + ": write failed");
}

ModelParameters LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  Reader r(in, path.string());
  char magic[sizeof(kMagic)];
  r.Bytes(magic, sizeof(magic));
  if (!std::equal(magic, magic + sizeof(magic), kMagic)) {
    throw ParseError(r.file() + ": not a checkpoint (bad magic)");
  }
  const std::uint32_t version = r.U32();
  if (version != kCheckpointVersion) {
    throw ParseError(r.file() + ": unsupported checkpoint version " +
                     std::to_string(version));
  }
  ModelParameters params;
  try {
    params.kind = ParseModelKind(r.Str());
  } catch (const ConfigError& e) {
    throw ParseError(r.file() + ": " + e.what());
  }
  params.dim = r.U64();
  params.hidden = r.U64();
  params.seed = r.U64();
  const std::string vocabulary_hash = r.Str();
  std::vector<std::string> vocabulary(r.Bounded(r.U64(), "vocabulary size"));
  for (auto& word : vocabulary) word = r.Str();
  Tensor rows = r.Array();
  try {
    params.embeddings = EmbeddingTable(std::move(vocabulary), std::move(rows));
  } catch (const std::exception& e) {
    throw ParseError(r.file() + ": " + e.what());
  }
  if (params.embeddings.VocabularyHash() != vocabulary_hash) {
    throw ParseError(r.file() + ": vocabulary hash mismatch");
  }
  if (params.embeddings.dim() != params.dim) {
    throw ParseError(r.file() + ": embedding width differs from dim");
  }
  const std::uint64_t count = r.Bounded(r.U64(), "array count");
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string name = r.Str();
    params.arrays.emplace(std::move(name), r.Array());
  }
  const auto expected = ParameterShapes(params.kind, params.dim, params.hidden);
  if (expected.size() != params.arrays.size()) {
    throw ParseError(r.file() + ": wrong number of parameter arrays");
  }
  for (const auto& [name, shape] : expected) {
    const auto it = params.arrays.find(name);
    if (it == params.arrays.end() || it->second.shape() != shape) {
      throw ParseError(r.file() + ": parameter '" + name +
                       "' missing or misshapen");
    }
    if (!it->second.AllFinite()) {
      throw ParseError(r.file() + ": parameter '" + name + "' not finite");
    }
  }
  return params;
}

}  // namespace rcqa::qamodel
