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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "lexaspect/embeddings.hpp"
#include "lexaspect/error.hpp"
#include "test_util.hpp"

using namespace lexaspect;
using lexaspect::testing::error_of;
using lexaspect::testing::utt;

namespace {

VectorTable words(const std::string& text) {
  std::istringstream in(text);
  return read_vector_table(in);
}

SentenceVectorTable sentences(const std::string& text) {
  std::istringstream in(text);
  return read_sentence_vector_table(in);
}

const char* kCatDog = "2 3\ncat 0.1 0.2 0.3\ndog 0.0 1.0 0.0\n";

AnnotatedUtterance with_tokens(std::vector<std::string> tokens) {
  return utt("u1", "de", Domain::kCaptions, AspectLabel::kState, std::move(tokens));
}

}  // namespace

TEST_SUITE("embeddings") {

TEST_CASE("word vector file parses") {
  VectorTable t = words(kCatDog);
  CHECK(t.dim == 3);
  CHECK(t.entries.size() == 2);
  CHECK(t.declared_count == 2);
  REQUIRE(t.find("cat") != nullptr);
  CHECK(t.find("cat")->values == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(t.find("bird") == nullptr);
}

TEST_CASE("word vector file errors") {
  CHECK(error_of([] { words("2 3\ncat 0.1 0.2\n"); }) == ErrorCode::kDimensionMismatch);
  CHECK(error_of([] { words("2 3\ncat 0.1 0.2 0.3 0.4\n"); }) == ErrorCode::kDimensionMismatch);
  CHECK(error_of([] { words("two 3\ncat 0.1 0.2 0.3\n"); }) == ErrorCode::kBadHeader);
  CHECK(error_of([] { words("2\ncat 0.1\n"); }) == ErrorCode::kBadHeader);
  CHECK(error_of([] { words(""); }) == ErrorCode::kBadHeader);
  CHECK(error_of([] { words("1 2\ncat 0.1 abc\n"); }) == ErrorCode::kUnparsableFloat);
  CHECK(error_of([] { words("1 2\ncat 0.1 nan\n"); }) == ErrorCode::kUnparsableFloat);
  CHECK(error_of([] { words("1 2\ncat 0.1 1e999\n"); }) == ErrorCode::kUnparsableFloat);
  CHECK(error_of([] { parse_vector_file("/nonexistent.vec"); }) == ErrorCode::kIoError);
}

TEST_CASE("repeated tokens keep the last vector and are counted") {
  VectorTable t = words("2 2\ncat 1 2\ncat 3 4\n");
  CHECK(t.entries.size() == 1);
  CHECK(t.duplicate_tokens == 1);
  CHECK(t.find("cat")->values == std::vector<double>{3, 4});
}

TEST_CASE("CRLF line endings are accepted") {
  VectorTable t = words("1 2\r\ncat 1 2\r\n");
  CHECK(t.find("cat")->values == std::vector<double>{1, 2});
}

TEST_CASE("sentence vector file") {
  SentenceVectorTable t = sentences("2\nu1\t0.5 0.5\n");
  CHECK(t.dim == 2);
  REQUIRE(t.entries.size() == 1);
  CHECK(t.find("u1")->values == std::vector<double>{0.5, 0.5});
  CHECK(error_of([] { sentences("2\nu1\t0.5 0.5\nu1\t1 1\n"); }) == ErrorCode::kDuplicateId);
  CHECK(sentences("2\n").entries.empty());
  CHECK(error_of([] { sentences("x\nu1\t0.5 0.5\n"); }) == ErrorCode::kBadHeader);
  CHECK(error_of([] { sentences("2\nu1\t0.5\n"); }) == ErrorCode::kDimensionMismatch);
}

TEST_CASE("mean pooling examples") {
  VectorTable t = words(kCatDog);
  EmbeddedInstance e = embed_mean(with_tokens({"cat", "dog"}), t);
  REQUIRE(e.vector.dim() == 3);
  CHECK(e.vector.values[0] == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(e.vector.values[1] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(e.vector.values[2] == doctest::Approx(0.15).epsilon(1e-15));
  CHECK(e.oov_fraction == 0.0);
  CHECK(e.id == "u1");
  CHECK(e.language == "de");

  e = embed_mean(with_tokens({"cat", "zzz"}), t);
  CHECK(e.vector.values == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(e.oov_fraction == 0.5);

  e = embed_mean(with_tokens({"xxx", "zzz"}), t);
  CHECK(e.vector.values == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(e.oov_fraction == 1.0);
}

TEST_CASE("mean pooling is invariant to token order and duplication") {
  std::mt19937 gen(12);
  std::normal_distribution<double> nd;
  std::ostringstream file;
  file << "20 5\n";
  for (int i = 0; i < 20; ++i) {
    file << "w" << i;
    for (int d = 0; d < 5; ++d) file << ' ' << format_double(nd(gen));
    file << '\n';
  }
  VectorTable t = words(file.str());
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> toks;
    const int n = 1 + static_cast<int>(gen() % 12);
    for (int i = 0; i < n; ++i) toks.push_back("w" + std::to_string(gen() % 25));
    EmbeddedInstance base = embed_mean(with_tokens(toks), t);
    CHECK(base.vector.dim() == 5);

    auto shuffled = toks;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    EmbeddedInstance p = embed_mean(with_tokens(shuffled), t);
    CHECK(p.vector == base.vector);
    CHECK(p.oov_fraction == base.oov_fraction);

    auto doubled = toks;
    doubled.insert(doubled.end(), toks.begin(), toks.end());
    EmbeddedInstance d = embed_mean(with_tokens(doubled), t);
    CHECK(d.vector == base.vector);
    CHECK(d.oov_fraction == base.oov_fraction);
  }
}

TEST_CASE("l2 normalization") {
  VectorTable t = words("1 2\na 3 4\n");
  EmbeddedInstance e = embed_mean(with_tokens({"a"}), t, true);
  CHECK(e.vector.values[0] == doctest::Approx(0.6));
  CHECK(e.vector.values[1] == doctest::Approx(0.8));
  DenseVector zero{{0.0, 0.0}};
  l2_normalize_in_place(zero);
  CHECK(zero.values == std::vector<double>{0.0, 0.0});
}

TEST_CASE("lookup by utterance id") {
  SentenceVectorTable t = sentences("2\nu1\t0.5 0.5\nu2\t-1 2\n");
  EmbeddedInstance e = embed_lookup(with_tokens({"x"}), t);
  CHECK(e.vector.values == std::vector<double>{0.5, 0.5});
  CHECK(e.oov_fraction == 0.0);

  auto missing = utt("gone", "de", Domain::kCaptions, AspectLabel::kState);
  try {
    embed_lookup(missing, t);
    FAIL("no error");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kMissingUtteranceVector);
    CHECK(std::string(err.what()).find("gone") != std::string::npos);
  }

  Corpus c;
  c.utterances = {utt("u2", "de", Domain::kCaptions, AspectLabel::kTelic),
                  utt("u1", "de", Domain::kCaptions, AspectLabel::kState)};
  std::vector<EmbeddedInstance> out;
  for (const auto& u : c.utterances) out.push_back(embed_lookup(u, t));
  REQUIRE(out.size() == 2);
  CHECK(out[0].id == "u2");
  CHECK(out[0].label == AspectLabel::kTelic);
  CHECK(out[1].id == "u1");
}

TEST_CASE("word vector tables round-trip through text") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> ud(-1e3, 1e3);
  for (int trial = 0; trial < 20; ++trial) {
    VectorTable t;
    t.dim = 4;
    for (int i = 0; i < 30; ++i) {
      DenseVector v;
      for (int d = 0; d < 4; ++d) v.values.push_back(ud(gen) * std::pow(10.0, int(gen() % 20) - 10));
      t.entries["tok" + std::to_string(i)] = v;
    }
    t.declared_count = t.entries.size();
    std::ostringstream out;
    write_vector_table(out, t);
    VectorTable back = words(out.str());
    CHECK(back.dim == t.dim);
    CHECK(back.entries == t.entries);
    std::ostringstream again;
    write_vector_table(again, back);
    CHECK(again.str() == out.str());
  }
}

TEST_CASE("sentence vector tables round-trip through text") {
  SentenceVectorTable t;
  t.dim = 3;
  t.entries["a"] = DenseVector{{0.1, -2.5e-300, 1.0 / 3.0}};
  t.entries["b"] = DenseVector{{1e300, 0.0, -0.0}};
  std::ostringstream out;
  write_sentence_vector_table(out, t);
  SentenceVectorTable back = sentences(out.str());
  CHECK(back.entries == t.entries);
}

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

}  // TEST_SUITE
