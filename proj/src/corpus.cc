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

#include "lexaspect/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "json.hpp"
#include "lexaspect/error.hpp"

namespace lexaspect {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(std::size_t line_no, const std::string& reason) {
  throw Error(ErrorCode::kMalformedLine,
              "line " + std::to_string(line_no) + ": " + reason);
}

const json& required(const json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end()) malformed(line_no, std::string("missing key '") + key + "'");
  return *it;
}

std::string required_string(const json& obj, const char* key,
                            std::size_t line_no) {
  const json& value = required(obj, key, line_no);
  if (!value.is_string()) {
    malformed(line_no, std::string("key '") + key + "' must be a string");
  }
  return value.get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* key,
                                           std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    malformed(line_no, std::string("key '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

AnnotatedUtterance parse_line(const std::string& line, std::size_t line_no) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    malformed(line_no, std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) malformed(line_no, "expected a JSON object");

  AnnotatedUtterance u;
  u.id = required_string(obj, "id", line_no);
  if (u.id.empty()) malformed(line_no, "empty id");

  u.language = required_string(obj, "language", line_no);
  if (!is_language_code(u.language)) {
    malformed(line_no, "language '" + u.language +
                           "' is not a lowercase two-letter code");
  }

  const std::string domain = required_string(obj, "domain", line_no);
  auto parsed_domain = parse_domain(domain);
  if (!parsed_domain) malformed(line_no, "unknown domain '" + domain + "'");
  u.domain = *parsed_domain;

  const json& tokens = required(obj, "tokens", line_no);
  if (!tokens.is_array()) malformed(line_no, "'tokens' must be an array");
  for (const json& token : tokens) {
    if (!token.is_string()) malformed(line_no, "token must be a string");
    std::string text = token.get<std::string>();
    if (text.empty()) malformed(line_no, "empty token");
    u.tokens.push_back(std::move(text));
  }

  const std::string label = required_string(obj, "label", line_no);
  auto parsed_label = parse_label(label);
  if (!parsed_label) {
    throw Error(ErrorCode::kUnknownLabel, "line " + std::to_string(line_no) +
                                              ": unknown label '" + label + "'");
  }
  u.label = *parsed_label;

  // Checked after the label so a bad label is reported as such even when
  // the token list is also empty.
  if (u.tokens.empty()) {
    throw Error(ErrorCode::kEmptyTokens, "utterance '" + u.id + "' has no tokens");
  }

  u.annotator = optional_string(obj, "annotator", line_no);
  u.verb_lemma = optional_string(obj, "verb_lemma", line_no);
  u.tense = optional_string(obj, "tense", line_no);
  u.gram_aspect = optional_string(obj, "gram_aspect", line_no);
  return u;
}

}  // namespace

std::string_view to_string(AspectLabel label) {
  switch (label) {
    case AspectLabel::kState: return "state";
    case AspectLabel::kTelic: return "telic";
    case AspectLabel::kAtelic: return "atelic";
  }
  return "?";
}

std::string_view to_string(Domain domain) {
  switch (domain) {
    case Domain::kCaptions: return "captions";
    case Domain::kWikipedia: return "wikipedia";
  }
  return "?";
}

std::optional<AspectLabel> parse_label(std::string_view text) {
  for (AspectLabel label : kAllLabels) {
    if (to_string(label) == text) return label;
  }
  return std::nullopt;
}

std::optional<Domain> parse_domain(std::string_view text) {
  if (text == "captions") return Domain::kCaptions;
  if (text == "wikipedia") return Domain::kWikipedia;
  return std::nullopt;
}

bool is_language_code(std::string_view text) {
  return text.size() == 2 && text[0] >= 'a' && text[0] <= 'z' &&
         text[1] >= 'a' && text[1] <= 'z';
}

Corpus read_corpus(std::istream& in, std::string provenance) {
  Corpus corpus;
  corpus.provenance = std::move(provenance);
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    AnnotatedUtterance u = parse_line(line, line_no);
    if (!seen.insert(u.id).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate id '" + u.id + "' on line " +
                                               std::to_string(line_no));
    }
    corpus.utterances.push_back(std::move(u));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open corpus " + path.string());
  return read_corpus(in, path.string());
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const AnnotatedUtterance& u : corpus.utterances) {
    nlohmann::ordered_json obj;
    obj["id"] = u.id;
    obj["language"] = u.language;
    obj["domain"] = to_string(u.domain);
    obj["tokens"] = u.tokens;
    obj["label"] = to_string(u.label);
    if (u.annotator) obj["annotator"] = *u.annotator;
    if (u.verb_lemma) obj["verb_lemma"] = *u.verb_lemma;
    if (u.tense) obj["tense"] = *u.tense;
    if (u.gram_aspect) obj["gram_aspect"] = *u.gram_aspect;
    out << obj.dump() << '\n';
  }
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  write_corpus(out, corpus);
}

Corpus filter(const Corpus& corpus, const CorpusFilter& criteria) {
  Corpus result;
  result.provenance = corpus.provenance;
  for (const AnnotatedUtterance& u : corpus.utterances) {
    if (criteria.language && u.language != *criteria.language) continue;
    if (criteria.domain && u.domain != *criteria.domain) continue;
    if (criteria.labels && !criteria.labels->contains(u.label)) continue;
    result.utterances.push_back(u);
  }
  return result;
}

ClassDropPolicy default_class_drop_policy() {
  return {{Domain::kCaptions, AspectLabel::kTelic},
          {Domain::kWikipedia, AspectLabel::kAtelic}};
}

Corpus apply_class_drop(const Corpus& corpus, const ClassDropPolicy& policy) {
  Corpus result;
  result.provenance = corpus.provenance;
  for (const AnnotatedUtterance& u : corpus.utterances) {
    auto it = policy.find(u.domain);
    if (it != policy.end() && it->second == u.label) continue;
    result.utterances.push_back(u);
  }
  return result;
}

std::set<std::string> languages_of(const Corpus& corpus) {
  std::set<std::string> out;
  for (const auto& u : corpus.utterances) out.insert(u.language);
  return out;
}

std::set<Domain> domains_of(const Corpus& corpus) {
  std::set<Domain> out;
  for (const auto& u : corpus.utterances) out.insert(u.domain);
  return out;
}

}  // namespace lexaspect
