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

// Experimental protocols built on the classifier: stratified k-fold
// cross-validation, the majority-class baseline, leave-one-language-out
// transfer and per-language attribution over training-language coalitions.
//
// All metrics come from TP/FP/FN counts accumulated over every evaluated
// instance. Per-fold scores are never averaged.

#ifndef LEXASPECT_EVALUATION_HPP_
#define LEXASPECT_EVALUATION_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lexaspect/classifier.hpp"
#include "lexaspect/corpus.hpp"
#include "lexaspect/embeddings.hpp"

namespace lexaspect {

// ---------------------------------------------------------------------------
// Folds

struct FoldPlan {
  std::vector<int> assignments;  // fold index per instance
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;

  // Instance indices per fold, ascending.
  std::vector<std::vector<std::size_t>> folds() const;
};

// Fold sizes differ by at most one. Within each fold, every class count is
// the floor or ceiling of count(c) * size(f) / N. Members of each class are
// shuffled with SplitMix64(seed) (classes in canonical order) and dealt
// round-robin over the folds that still have room for that class.
//
// Throws kBadK unless 2 <= k <= labels.size(). A class with fewer than k
// members gets a StratificationInfeasible warning.
FoldPlan make_folds(std::span<const AspectLabel> labels, int k, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Counts and metrics

struct ClassCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t support = 0;  // gold occurrences

  bool operator==(const ClassCounts&) const = default;
};

struct EvalCounts {
  std::map<AspectLabel, ClassCounts> per_class;
  std::uint64_t evaluated = 0;

  void ensure_class(AspectLabel label) { per_class.try_emplace(label); }
  void add(AspectLabel gold, AspectLabel predicted);
  EvalCounts& operator+=(const EvalCounts& other);
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Some ratio was 0/0 and was taken as 0.
  bool zero_division = false;
};

struct MetricsReport {
  std::map<AspectLabel, ClassMetrics> per_class;
  double micro_precision = 0.0;
  double micro_recall = 0.0;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  EvalCounts counts;
};

MetricsReport compute_metrics(const EvalCounts& counts);

enum class Metric { kAccuracy, kMicroF1 };
double metric_value(const MetricsReport& report, Metric metric);

// ---------------------------------------------------------------------------
// Cross-validation and baseline

struct CrossValResult {
  MetricsReport metrics;
  FoldPlan plan;
  std::vector<AspectLabel> classes;
  int models_trained = 0;
  std::vector<int> times_tested;  // per instance
  std::vector<std::string> warnings;
};

// Trains one model per fold on the other folds and accumulates the fold's
// predictions into a single EvalCounts. Folds may run on several threads;
// results are combined in fold order.
CrossValResult cross_validate(std::span<const EmbeddedInstance> instances, int k,
                              std::uint64_t seed, const TrainConfig& config,
                              int threads = 1);

// Most frequent label; ties go to the earliest canonical class.
// Throws kEmptyTrain on empty input.
AspectLabel majority_label(std::span<const AspectLabel> train_labels);

MetricsReport majority_baseline(std::span<const AspectLabel> train_labels,
                                std::span<const AspectLabel> test_labels);

// The majority baseline run through the same stratified folds.
CrossValResult cross_validate_baseline(std::span<const AspectLabel> labels, int k,
                                       std::uint64_t seed);

// ---------------------------------------------------------------------------
// Cross-lingual transfer

// language -> instances, each list in its original order.
using LanguageSets = std::map<std::string, std::vector<EmbeddedInstance>>;

LanguageSets group_by_language(std::span<const EmbeddedInstance> instances);

// Called with the exact training set right before a model is fit.
using TrainObserver = std::function<void(std::span<const EmbeddedInstance>)>;

struct ZeroShotResult {
  std::string target;
  MetricsReport metrics;
  std::vector<AspectLabel> classes;
  std::vector<std::string> train_languages;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  SoftmaxModel model;
  TrainTrace trace;
  std::vector<std::string> warnings;
};

// Trains on every language except target and tests on target. Throws
// kTargetMissing, kMixedDimensions, kEmptyData (no other language has data)
// and kProvenanceViolation if a target instance would reach training.
ZeroShotResult zero_shot_eval(const LanguageSets& corpora, const std::string& target,
                              const TrainConfig& config,
                              const TrainObserver& observer = {});

// ---------------------------------------------------------------------------
// Attribution

struct AttributionReport {
  std::string target;
  std::vector<std::string> contributors;  // sorted
  std::map<std::string, double> impacts;
  // Coalition key (sorted languages joined by ',') -> value. The empty
  // coalition has key "" and is present only when include_empty is set.
  std::map<std::string, double> coalition_values;
  bool include_empty = false;
  std::optional<double> empty_value;
  int evaluations = 0;  // value-function calls
  std::vector<std::string> warnings;
};

std::string coalition_key(const std::vector<std::string>& languages);

using CoalitionValueFn = std::function<double(const std::vector<std::string>&)>;

// Evaluates value_fn once per admissible coalition of contributors and sets
// impact(l) to the uniform mean of v(S + l) - v(S) over admissible S not
// containing l, summed in ascending bitmask order of S over the sorted
// contributors. With include_empty, v({}) is empty_value and value_fn is
// never called on the empty set. value_fn must be safe to call concurrently
// when threads > 1.
//
// Throws kTooFewContributors for fewer than two contributors and
// kInvalidArgument when include_empty is set without an empty_value.
AttributionReport attribute_from_values(const std::string& target,
                                        std::vector<std::string> contributors,
                                        const CoalitionValueFn& value_fn,
                                        bool include_empty,
                                        std::optional<double> empty_value,
                                        int threads = 1);

// v(S) is the metric on target of a model trained on the union of the
// languages in S. With include_empty, v({}) = 1 / |classes|, the expected
// accuracy of a uniform random guess.
AttributionReport language_attribution(const LanguageSets& corpora,
                                       const std::string& target,
                                       const TrainConfig& config, bool include_empty,
                                       Metric metric = Metric::kAccuracy,
                                       int threads = 1,
                                       const TrainObserver& observer = {});

}  // namespace lexaspect

#endif  // LEXASPECT_EVALUATION_HPP_
