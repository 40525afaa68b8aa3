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

#include "lexaspect/synthetic.hpp"

#include <cmath>
#include <cstdio>

#include "lexaspect/error.hpp"
#include "lexaspect/rng.hpp"

namespace lexaspect {

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  if (spec.dim < 2) throw Error(ErrorCode::kInvalidArgument, "dim must be >= 2");
  if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma must be finite and >= 0");
  }
  for (const auto& lang : spec.languages) {
    if (!is_language_code(lang)) {
      throw Error(ErrorCode::kInvalidArgument, "bad language code '" + lang + "'");
    }
  }

  const AspectLabel non_state =
      spec.domain == Domain::kCaptions ? AspectLabel::kAtelic : AspectLabel::kTelic;
  const char* domain_tag = spec.domain == Domain::kCaptions ? "cap" : "wiki";

  SyntheticData data;
  data.corpus.provenance = "synthetic";
  data.sentence_vectors.dim = spec.dim;
  data.word_vectors.dim = spec.dim;
  SplitMix64 rng(spec.seed);

  for (const std::string& lang : spec.languages) {
    for (std::size_t i = 0; i < spec.per_language; ++i) {
      char id[64];
      std::snprintf(id, sizeof(id), "%s-%s-%05zu", lang.c_str(), domain_tag, i);
      const bool state = i % 2 == 0;

      DenseVector v;
      v.values.resize(spec.dim);
      for (std::size_t d = 0; d < spec.dim; ++d) {
        const double mean = d == 0 ? (state ? 1.0 : -1.0) : 0.0;
        v.values[d] = mean + spec.sigma * rng.normal();
      }

      AnnotatedUtterance u;
      u.id = id;
      u.language = lang;
      u.domain = spec.domain;
      u.tokens = {std::string("w:") + id};
      u.label = state ? AspectLabel::kState : non_state;
      u.verb_lemma = (state ? "be" : "walk") + std::to_string(i % 5);
      data.word_vectors.entries.emplace(u.tokens.front(), v);
      data.sentence_vectors.entries.emplace(u.id, std::move(v));
      data.corpus.utterances.push_back(std::move(u));
    }
  }
  data.word_vectors.declared_count = data.word_vectors.entries.size();
  return data;
}

}  // namespace lexaspect
