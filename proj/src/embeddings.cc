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

#include "lexaspect/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "lexaspect/error.hpp"

namespace lexaspect {

namespace {

std::string at_line(std::size_t line_no) { return "line " + std::to_string(line_no); }

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

// Splits on runs of spaces.
std::vector<std::string_view> split_spaces(std::string_view text) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos == text.size()) break;
    std::size_t end = text.find(' ', pos);
    if (end == std::string_view::npos) end = text.size();
    fields.push_back(text.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

bool parse_size(std::string_view text, std::size_t& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

double parse_float(std::string_view text, std::size_t line_no) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw Error(ErrorCode::kUnparsableFloat,
                at_line(line_no) + ": cannot parse '" + std::string(text) + "'");
  }
  return value;
}

DenseVector parse_components(const std::vector<std::string_view>& fields,
                             std::size_t first, std::size_t dim,
                             std::size_t line_no) {
  if (fields.size() - first != dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                at_line(line_no) + ": expected " + std::to_string(dim) +
                    " components, found " + std::to_string(fields.size() - first));
  }
  DenseVector v;
  v.values.reserve(dim);
  for (std::size_t i = first; i < fields.size(); ++i) {
    v.values.push_back(parse_float(fields[i], line_no));
  }
  return v;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return in;
}

void write_components(std::ostream& out, const DenseVector& v) {
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    if (i) out << ' ';
    out << format_double(v.values[i]);
  }
}

}  // namespace

VectorTable read_vector_table(std::istream& in) {
  VectorTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kBadHeader, "missing header");
  strip_cr(line);
  const auto header = split_spaces(line);
  if (header.size() != 2 || !parse_size(header[0], table.declared_count) ||
      !parse_size(header[1], table.dim) || table.dim == 0) {
    throw Error(ErrorCode::kBadHeader, "expected '<count> <dim>', got '" + line + "'");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    const auto fields = split_spaces(line);
    if (fields.empty()) continue;
    DenseVector v = parse_components(fields, 1, table.dim, line_no);
    auto [it, inserted] = table.entries.try_emplace(std::string(fields[0]), std::move(v));
    if (!inserted) {
      it->second = std::move(v);  // try_emplace left v intact
      ++table.duplicate_tokens;
    }
  }
  return table;
}

VectorTable parse_vector_file(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return read_vector_table(in);
}

SentenceVectorTable read_sentence_vector_table(std::istream& in) {
  SentenceVectorTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kBadHeader, "missing header");
  strip_cr(line);
  const auto header = split_spaces(line);
  if (header.size() != 1 || !parse_size(header[0], table.dim) || table.dim == 0) {
    throw Error(ErrorCode::kBadHeader, "expected '<dim>', got '" + line + "'");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(ErrorCode::kDimensionMismatch,
                  at_line(line_no) + ": expected '<id>\\t<values>'");
    }
    std::string id = line.substr(0, tab);
    const auto fields = split_spaces(std::string_view(line).substr(tab + 1));
    DenseVector v = parse_components(fields, 0, table.dim, line_no);
    if (!table.entries.emplace(id, std::move(v)).second) {
      throw Error(ErrorCode::kDuplicateId,
                  at_line(line_no) + ": duplicate id '" + id + "'");
    }
  }
  return table;
}

SentenceVectorTable parse_sentence_vector_file(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return read_sentence_vector_table(in);
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_vector_table(std::ostream& out, const VectorTable& table) {
  std::vector<const std::string*> tokens;
  tokens.reserve(table.entries.size());
  for (const auto& [token, v] : table.entries) tokens.push_back(&token);
  std::sort(tokens.begin(), tokens.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });
  out << table.entries.size() << ' ' << table.dim << '\n';
  for (const std::string* token : tokens) {
    out << *token << ' ';
    write_components(out, table.entries.at(*token));
    out << '\n';
  }
}

void write_sentence_vector_table(std::ostream& out, const SentenceVectorTable& table) {
  out << table.dim << '\n';
  for (const auto& [id, v] : table.entries) {
    out << id << '\t';
    write_components(out, v);
    out << '\n';
  }
}

void l2_normalize_in_place(DenseVector& vector) {
  double norm2 = 0.0;
  for (double x : vector.values) norm2 += x * x;
  if (norm2 == 0.0) return;
  const double norm = std::sqrt(norm2);
  for (double& x : vector.values) x /= norm;
}

EmbeddedInstance embed_mean(const AnnotatedUtterance& utterance,
                            const VectorTable& table, bool l2_normalize) {
  // Summing per distinct token in sorted order makes the result independent
  // of token order and of repeating the whole token list.
  std::map<std::string_view, std::size_t> found;
  std::size_t found_total = 0;
  for (const std::string& token : utterance.tokens) {
    if (table.find(token)) {
      ++found[token];
      ++found_total;
    }
  }

  EmbeddedInstance inst;
  inst.id = utterance.id;
  inst.label = utterance.label;
  inst.language = utterance.language;
  inst.domain = utterance.domain;
  inst.vector.values.assign(table.dim, 0.0);
  const std::size_t total = utterance.tokens.size();
  inst.oov_fraction =
      total == 0 ? 1.0
                 : static_cast<double>(total - found_total) / static_cast<double>(total);
  if (found_total == 0) return inst;

  for (const auto& [token, count] : found) {
    const DenseVector& v = table.entries.find(std::string(token))->second;
    const double weight = static_cast<double>(count);
    for (std::size_t d = 0; d < table.dim; ++d) {
      inst.vector.values[d] += weight * v.values[d];
    }
  }
  const double denom = static_cast<double>(found_total);
  for (double& x : inst.vector.values) x /= denom;
  if (l2_normalize) l2_normalize_in_place(inst.vector);
  return inst;
}

EmbeddedInstance embed_lookup(const AnnotatedUtterance& utterance,
                              const SentenceVectorTable& table, bool l2_normalize) {
  const DenseVector* v = table.find(utterance.id);
  if (!v) {
    throw Error(ErrorCode::kMissingUtteranceVector,
                "no sentence vector for utterance '" + utterance.id + "'");
  }
  EmbeddedInstance inst;
  inst.id = utterance.id;
  inst.vector = *v;
  inst.label = utterance.label;
  inst.language = utterance.language;
  inst.domain = utterance.domain;
  inst.oov_fraction = 0.0;
  if (l2_normalize) l2_normalize_in_place(inst.vector);
  return inst;
}

}  // namespace lexaspect
