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

// Corpus statistics: verb coverage, label distributions, Pearson chi-square
// homogeneity, Cohen's kappa and mean sentence length.

#ifndef LEXASPECT_STATS_HPP_
#define LEXASPECT_STATS_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lexaspect/corpus.hpp"

namespace lexaspect {

struct FrequencyTable {
  std::map<std::string, std::uint64_t> entries;
  std::uint64_t total = 0;

  void add(const std::string& category, std::uint64_t count = 1) {
    entries[category] += count;
    total += count;
  }
};

// Counts verb_lemma over utterances that carry one.
FrequencyTable verb_frequencies(const Corpus& corpus);

// Categories by descending count, ties in lexicographic order.
std::vector<std::pair<std::string, std::uint64_t>> ranked_categories(
    const FrequencyTable& freq);

// Share of the total covered by the k most frequent categories.
// Throws kEmptyTable when the table is empty, kInvalidArgument when k == 0.
double top_k_coverage(const FrequencyTable& freq, std::size_t k);

using LabelCounts = std::map<AspectLabel, std::uint64_t>;

// All three labels are always present as keys.
LabelCounts aspect_counts(const Corpus& corpus);
std::map<AspectLabel, double> aspect_distribution(const Corpus& corpus);

struct ChiSquareResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
};

// Rows are samples, columns categories. Throws kDegenerateTable on a zero
// row or column total and kInvalidArgument on a ragged or undersized table.
ChiSquareResult chi_square_homogeneity(
    const std::vector<std::vector<std::uint64_t>>& observed);

// Upper tail of the chi-square distribution, Q(df/2, x/2).
double chi_square_sf(double x, int df);

// Regularized upper incomplete gamma Q(a, x) for a > 0, x >= 0.
double regularized_gamma_q(double a, double x);

struct KappaResult {
  double kappa = 0.0;
  double observed_agreement = 0.0;
  double expected_agreement = 0.0;
};

// Unweighted Cohen's kappa over two aligned label sequences.
// Throws kLengthMismatch (also for empty input) and kDegenerateAgreement
// when chance agreement is 1.
KappaResult cohen_kappa(std::span<const std::string> labels_a,
                        std::span<const std::string> labels_b);
KappaResult cohen_kappa(std::span<const AspectLabel> labels_a,
                        std::span<const AspectLabel> labels_b);

double mean_sentence_length(const Corpus& corpus);

}  // namespace lexaspect

#endif  // LEXASPECT_STATS_HPP_
