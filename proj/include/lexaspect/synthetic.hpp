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

// Synthetic multilingual corpora living in one shared vector space.
//
// Each language gets `per_language` utterances alternating state /
// non-state (state first). Vectors are drawn from N(mu, sigma^2 I) with
// mu = +e1 for state and -e1 otherwise, the same for every language. The
// non-state label is atelic for captions and telic for Wikipedia, i.e. the
// class that survives the default class drop.
//
// Draw order: languages in the order given, utterances in index order, one
// normal() per component, all from a single SplitMix64(seed).

#ifndef LEXASPECT_SYNTHETIC_HPP_
#define LEXASPECT_SYNTHETIC_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "lexaspect/corpus.hpp"
#include "lexaspect/embeddings.hpp"

namespace lexaspect {

struct SyntheticSpec {
  std::vector<std::string> languages = {"ar", "zh", "fa", "de", "ru", "tr"};
  std::size_t per_language = 100;
  std::size_t dim = 16;
  double sigma = 0.1;
  std::uint64_t seed = 42;
  Domain domain = Domain::kCaptions;
};

struct SyntheticData {
  Corpus corpus;
  // Keyed by utterance id.
  SentenceVectorTable sentence_vectors;
  // Each utterance has one unique token whose word vector equals its
  // sentence vector, so mean pooling reproduces the lookup vectors.
  VectorTable word_vectors;
};

// Throws kInvalidArgument for dim < 2, sigma < 0 or a bad language code.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace lexaspect

#endif  // LEXASPECT_SYNTHETIC_HPP_
