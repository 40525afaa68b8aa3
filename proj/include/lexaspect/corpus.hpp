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

// Annotated corpora: one labeled utterance per JSON line.
//
// A corpus file is UTF-8 text with one object per line:
//
//   {"id":"ar-cap-0001","language":"ar","domain":"captions",
//    "tokens":["رجل","يمشي"],"label":"atelic","verb_lemma":"مشى"}
//
// Required keys are id, language, domain, tokens and label. The optional
// keys annotator, verb_lemma, tense and gram_aspect are carried through.
// Any other key is ignored.

#ifndef LEXASPECT_CORPUS_HPP_
#define LEXASPECT_CORPUS_HPP_

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lexaspect {

// Lexical aspect classes. The enumerator order is the canonical class order
// used everywhere a tie has to be broken.
enum class AspectLabel { kState = 0, kTelic = 1, kAtelic = 2 };

inline constexpr std::array<AspectLabel, 3> kAllLabels = {
    AspectLabel::kState, AspectLabel::kTelic, AspectLabel::kAtelic};

enum class Domain { kCaptions = 0, kWikipedia = 1 };

std::string_view to_string(AspectLabel label);
std::string_view to_string(Domain domain);

// Strict, case-sensitive parsing. Returns nullopt for anything else.
std::optional<AspectLabel> parse_label(std::string_view text);
std::optional<Domain> parse_domain(std::string_view text);

// True for a two-letter lowercase ASCII code.
bool is_language_code(std::string_view text);

struct AnnotatedUtterance {
  std::string id;
  std::string language;
  Domain domain = Domain::kCaptions;
  std::vector<std::string> tokens;
  AspectLabel label = AspectLabel::kState;
  std::optional<std::string> annotator;
  std::optional<std::string> verb_lemma;
  std::optional<std::string> tense;
  std::optional<std::string> gram_aspect;

  bool operator==(const AnnotatedUtterance&) const = default;
};

struct Corpus {
  std::vector<AnnotatedUtterance> utterances;
  std::string provenance;

  bool empty() const { return utterances.empty(); }
  std::size_t size() const { return utterances.size(); }

  // Provenance is bookkeeping, not content.
  bool operator==(const Corpus& other) const {
    return utterances == other.utterances;
  }
};

// Throws Error with kMalformedLine, kDuplicateId, kUnknownLabel or
// kEmptyTokens. Line numbers in messages are 1-based.
Corpus load_corpus(const std::filesystem::path& path);
Corpus read_corpus(std::istream& in, std::string provenance = "<stream>");

// Writes one object per line in the same schema load_corpus accepts.
void write_corpus(std::ostream& out, const Corpus& corpus);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

struct CorpusFilter {
  std::optional<std::string> language;
  std::optional<Domain> domain;
  std::optional<std::set<AspectLabel>> labels;
};

// Order-preserving selection; unset criteria match everything.
Corpus filter(const Corpus& corpus, const CorpusFilter& criteria);

// Domain -> label removed from that domain.
using ClassDropPolicy = std::map<Domain, AspectLabel>;

// Telic from captions, atelic from Wikipedia: both are near-empty in their
// domain, which leaves a stative vs. non-stative problem.
ClassDropPolicy default_class_drop_policy();

Corpus apply_class_drop(const Corpus& corpus, const ClassDropPolicy& policy);

// Sorted set of languages / domains present.
std::set<std::string> languages_of(const Corpus& corpus);
std::set<Domain> domains_of(const Corpus& corpus);

}  // namespace lexaspect

#endif  // LEXASPECT_CORPUS_HPP_
