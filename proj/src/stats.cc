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

#include "lexaspect/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lexaspect/error.hpp"

namespace lexaspect {

namespace {

constexpr double kGammaEps = 1e-14;
constexpr int kGammaMaxIter = 500;

// P(a, x) by its power series; converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < kGammaMaxIter; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kGammaEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by its continued fraction, evaluated with modified Lentz.
double gamma_q_continued_fraction(double a, double x) {
  constexpr double kTiny = std::numeric_limits<double>::min() / kGammaEps;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kGammaMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kGammaEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

template <typename Label>
KappaResult kappa_impl(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(ErrorCode::kLengthMismatch,
                "kappa needs two nonempty sequences of equal length (got " +
                    std::to_string(a.size()) + " and " +
                    std::to_string(b.size()) + ")");
  }
  std::map<Label, std::uint64_t> marg_a, marg_b;
  std::uint64_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++marg_a[a[i]];
    ++marg_b[b[i]];
    if (a[i] == b[i]) ++agree;
  }
  const auto n = static_cast<std::uint64_t>(a.size());
  std::uint64_t chance = 0;  // sum_c count_a(c) * count_b(c)
  for (const auto& [label, count] : marg_a) {
    auto it = marg_b.find(label);
    if (it != marg_b.end()) chance += count * it->second;
  }
  const std::uint64_t n2 = n * n;
  if (chance == n2) {
    throw Error(ErrorCode::kDegenerateAgreement,
                "chance agreement is 1; kappa is undefined");
  }
  KappaResult r;
  r.observed_agreement = static_cast<double>(agree) / static_cast<double>(n);
  r.expected_agreement = static_cast<double>(chance) / static_cast<double>(n2);
  // Integer numerator and denominator keep the quotient correctly rounded.
  const double num = static_cast<double>(agree * n) - static_cast<double>(chance);
  r.kappa = num / static_cast<double>(n2 - chance);
  return r;
}

}  // namespace

FrequencyTable verb_frequencies(const Corpus& corpus) {
  FrequencyTable freq;
  for (const auto& u : corpus.utterances) {
    if (u.verb_lemma) freq.add(*u.verb_lemma);
  }
  return freq;
}

std::vector<std::pair<std::string, std::uint64_t>> ranked_categories(
    const FrequencyTable& freq) {
  std::vector<std::pair<std::string, std::uint64_t>> ranked(
      freq.entries.begin(), freq.entries.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  return ranked;
}

double top_k_coverage(const FrequencyTable& freq, std::size_t k) {
  if (freq.total == 0) throw Error(ErrorCode::kEmptyTable, "frequency table is empty");
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be positive");
  if (k >= freq.entries.size()) return 1.0;
  const auto ranked = ranked_categories(freq);
  std::uint64_t covered = 0;
  for (std::size_t i = 0; i < k; ++i) covered += ranked[i].second;
  return static_cast<double>(covered) / static_cast<double>(freq.total);
}

LabelCounts aspect_counts(const Corpus& corpus) {
  LabelCounts counts;
  for (AspectLabel label : kAllLabels) counts[label] = 0;
  for (const auto& u : corpus.utterances) ++counts[u.label];
  return counts;
}

std::map<AspectLabel, double> aspect_distribution(const Corpus& corpus) {
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "corpus is empty");
  std::map<AspectLabel, double> dist;
  const double n = static_cast<double>(corpus.size());
  for (const auto& [label, count] : aspect_counts(corpus)) {
    dist[label] = static_cast<double>(count) / n;
  }
  return dist;
}

ChiSquareResult chi_square_homogeneity(
    const std::vector<std::vector<std::uint64_t>>& observed) {
  const std::size_t rows = observed.size();
  if (rows < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two rows");
  const std::size_t cols = observed.front().size();
  if (cols < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two columns");
  std::vector<double> row_total(rows, 0.0), col_total(cols, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (observed[i].size() != cols) {
      throw Error(ErrorCode::kInvalidArgument, "ragged contingency table");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      const double o = static_cast<double>(observed[i][j]);
      row_total[i] += o;
      col_total[j] += o;
      grand += o;
    }
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (row_total[i] == 0.0) {
      throw Error(ErrorCode::kDegenerateTable, "row " + std::to_string(i) + " is all zero");
    }
  }
  for (std::size_t j = 0; j < cols; ++j) {
    if (col_total[j] == 0.0) {
      throw Error(ErrorCode::kDegenerateTable,
                  "column " + std::to_string(j) + " is all zero");
    }
  }

  ChiSquareResult r;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double expected = row_total[i] * col_total[j] / grand;
      const double diff = static_cast<double>(observed[i][j]) - expected;
      r.statistic += diff * diff / expected;
    }
  }
  r.df = static_cast<int>((rows - 1) * (cols - 1));
  r.p_value = chi_square_sf(r.statistic, r.df);
  return r;
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "regularized_gamma_q needs a > 0, x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_continued_fraction(a, x);
}

double chi_square_sf(double x, int df) {
  if (df <= 0) throw Error(ErrorCode::kInvalidArgument, "df must be positive");
  if (!(x >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "x must be >= 0");
  const double q = regularized_gamma_q(0.5 * df, 0.5 * x);
  // Far tails underflow; keep the result inside (0, 1].
  return std::clamp(q, std::numeric_limits<double>::min(), 1.0);
}

KappaResult cohen_kappa(std::span<const std::string> labels_a,
                        std::span<const std::string> labels_b) {
  return kappa_impl(labels_a, labels_b);
}

KappaResult cohen_kappa(std::span<const AspectLabel> labels_a,
                        std::span<const AspectLabel> labels_b) {
  return kappa_impl(labels_a, labels_b);
}

double mean_sentence_length(const Corpus& corpus) {
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "corpus is empty");
  std::uint64_t tokens = 0;
  for (const auto& u : corpus.utterances) tokens += u.tokens.size();
  return static_cast<double>(tokens) / static_cast<double>(corpus.size());
}

}  // namespace lexaspect
