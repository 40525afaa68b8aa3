// Copyright 2026 The Lexaspect Authors.
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

// Word-vector and sentence-vector tables, and the two ways of turning an
// utterance into one fixed-size vector: averaging its word vectors, or
// looking up a vector computed offline for that utterance id.
//
// Word-vector files use the usual text layout:
//
//   <count> <dim>
//   <token> <v1> ... <vdim>
//
// Sentence-vector files are:
//
//   <dim>
//   <id>\t<v1> ... <vdim>

#ifndef LEXASPECT_EMBEDDINGS_HPP_
#define LEXASPECT_EMBEDDINGS_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "lexaspect/corpus.hpp"

namespace lexaspect {

struct DenseVector {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
  bool operator==(const DenseVector&) const = default;
};

struct VectorTable {
  std::size_t dim = 0;
  std::unordered_map<std::string, DenseVector> entries;
  std::size_t declared_count = 0;
  // Tokens seen more than once; the last occurrence is kept.
  std::size_t duplicate_tokens = 0;

  const DenseVector* find(const std::string& token) const {
    auto it = entries.find(token);
    return it == entries.end() ? nullptr : &it->second;
  }
};

struct SentenceVectorTable {
  std::size_t dim = 0;
  std::map<std::string, DenseVector> entries;

  const DenseVector* find(const std::string& id) const {
    auto it = entries.find(id);
    return it == entries.end() ? nullptr : &it->second;
  }
};

struct EmbeddedInstance {
  std::string id;
  DenseVector vector;
  AspectLabel label = AspectLabel::kState;
  std::string language;
  Domain domain = Domain::kCaptions;
  double oov_fraction = 0.0;
};

// Throws kBadHeader, kDimensionMismatch or kUnparsableFloat. Errors name the
// 1-based line.
VectorTable parse_vector_file(const std::filesystem::path& path);
VectorTable read_vector_table(std::istream& in);

// Throws kBadHeader, kDuplicateId, kDimensionMismatch or kUnparsableFloat.
SentenceVectorTable parse_sentence_vector_file(const std::filesystem::path& path);
SentenceVectorTable read_sentence_vector_table(std::istream& in);

// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

// Entries are written in sorted token order so output is reproducible.
void write_vector_table(std::ostream& out, const VectorTable& table);
void write_sentence_vector_table(std::ostream& out, const SentenceVectorTable& table);

// Mean over the tokens present in the table. Absent tokens are skipped and
// counted into oov_fraction; with no token present the result is the zero
// vector and oov_fraction is 1.
EmbeddedInstance embed_mean(const AnnotatedUtterance& utterance,
                            const VectorTable& table, bool l2_normalize = false);

// Throws kMissingUtteranceVector when the id has no vector.
EmbeddedInstance embed_lookup(const AnnotatedUtterance& utterance,
                              const SentenceVectorTable& table,
                              bool l2_normalize = false);

// Scales to unit Euclidean length; the zero vector is left unchanged.
void l2_normalize_in_place(DenseVector& vector);

}  // namespace lexaspect

#endif  // LEXASPECT_EMBEDDINGS_HPP_
