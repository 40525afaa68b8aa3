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

#include "lexaspect/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <set>

#include "lexaspect/error.hpp"
#include "lexaspect/rng.hpp"
#include "parallel.hpp"

namespace lexaspect {

namespace {

double safe_ratio(std::uint64_t num, std::uint64_t den, bool& zero_division) {
  if (den == 0) {
    zero_division = true;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

double f1_of(double p, double r, bool& zero_division) {
  if (p + r == 0.0) {
    zero_division = true;
    return 0.0;
  }
  return 2.0 * p * r / (p + r);
}

// Unit-capacity bipartite flow from classes to folds. Finds, for each class
// row, which folds receive one extra member beyond the floor quota, so that
// row and column totals come out exact.
class QuotaFlow {
 public:
  QuotaFlow(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), edge_(rows * cols, kNone), used_(rows * cols, 0) {}

  void allow(std::size_t r, std::size_t c) { edge_[r * cols_ + c] = 1; }
  bool used(std::size_t r, std::size_t c) const { return used_[r * cols_ + c] != 0; }

  // Pushes row_demand[r] units out of each row into columns with
  // col_capacity[c] free slots. Returns false if that is impossible.
  bool solve(std::vector<std::uint64_t> row_demand, std::vector<std::uint64_t> col_capacity) {
    col_capacity_ = std::move(col_capacity);
    for (std::size_t r = 0; r < rows_; ++r) {
      while (row_demand[r] > 0) {
        std::vector<char> seen_col(cols_, 0);
        if (!augment(r, seen_col)) return false;
        --row_demand[r];
      }
    }
    return true;
  }

 private:
  static constexpr char kNone = 0;

  // Depth-first search for an augmenting path from row r to a column with
  // spare capacity, rerouting earlier rows through used edges if needed.
  bool augment(std::size_t r, std::vector<char>& seen_col) {
    for (std::size_t c = 0; c < cols_; ++c) {
      const std::size_t e = r * cols_ + c;
      if (edge_[e] == kNone || used_[e] || seen_col[c]) continue;
      seen_col[c] = 1;
      if (col_capacity_[c] > 0) {
        --col_capacity_[c];
        used_[e] = 1;
        return true;
      }
      // Column full: try to move some other row's unit out of column c.
      for (std::size_t r2 = 0; r2 < rows_; ++r2) {
        const std::size_t e2 = r2 * cols_ + c;
        if (!used_[e2]) continue;
        used_[e2] = 0;
        if (augment(r2, seen_col)) {
          used_[e] = 1;
          return true;
        }
        used_[e2] = 1;
      }
    }
    return false;
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<char> edge_;
  std::vector<char> used_;
  std::vector<std::uint64_t> col_capacity_;
};

std::vector<AspectLabel> label_inventory(std::span<const EmbeddedInstance> a,
                                         std::span<const EmbeddedInstance> b = {}) {
  std::set<AspectLabel> seen;
  for (const auto& inst : a) seen.insert(inst.label);
  for (const auto& inst : b) seen.insert(inst.label);
  return {seen.begin(), seen.end()};
}

void require_two_classes(const std::vector<AspectLabel>& classes) {
  if (classes.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "need at least two classes in the experiment, found " +
                    std::to_string(classes.size()));
  }
}

EvalCounts evaluate_model(const SoftmaxModel& model,
                          std::span<const EmbeddedInstance> test,
                          const std::vector<AspectLabel>& classes) {
  EvalCounts counts;
  for (AspectLabel c : classes) counts.ensure_class(c);
  for (const auto& inst : test) counts.add(inst.label, predict(model, inst.vector));
  return counts;
}

std::size_t common_dim(const LanguageSets& corpora) {
  std::optional<std::size_t> dim;
  for (const auto& [lang, instances] : corpora) {
    for (const auto& inst : instances) {
      if (!dim) dim = inst.vector.dim();
      if (inst.vector.dim() != *dim) {
        throw Error(ErrorCode::kMixedDimensions,
                    "instance '" + inst.id + "' (" + lang + ") has dim " +
                        std::to_string(inst.vector.dim()) + ", expected " +
                        std::to_string(*dim));
      }
    }
  }
  return dim.value_or(0);
}

const std::vector<EmbeddedInstance>& target_set(const LanguageSets& corpora,
                                                const std::string& target) {
  auto it = corpora.find(target);
  if (it == corpora.end() || it->second.empty()) {
    throw Error(ErrorCode::kTargetMissing, "no instances for target language '" + target + "'");
  }
  return it->second;
}

// Union of the given languages, in language order, with the provenance
// check that no instance belongs to the target.
std::vector<EmbeddedInstance> training_union(const LanguageSets& corpora,
                                             const std::vector<std::string>& languages,
                                             const std::string& target) {
  std::vector<EmbeddedInstance> out;
  for (const std::string& lang : languages) {
    auto it = corpora.find(lang);
    if (it == corpora.end()) continue;
    for (const auto& inst : it->second) {
      if (inst.language == target || lang == target) {
        throw Error(ErrorCode::kProvenanceViolation,
                    "target-language instance '" + inst.id + "' in training data");
      }
      out.push_back(inst);
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<std::vector<std::size_t>> FoldPlan::folds() const {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    out[static_cast<std::size_t>(assignments[i])].push_back(i);
  }
  return out;
}

FoldPlan make_folds(std::span<const AspectLabel> labels, int k, std::uint64_t seed) {
  const std::size_t n = labels.size();
  if (k < 2 || static_cast<std::size_t>(k) > n) {
    throw Error(ErrorCode::kBadK, "k=" + std::to_string(k) + " is outside [2, " +
                                      std::to_string(n) + "]");
  }
  const std::size_t folds = static_cast<std::size_t>(k);

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignments.assign(n, -1);

  std::vector<AspectLabel> classes;
  std::vector<std::vector<std::size_t>> members;
  for (AspectLabel label : kAllLabels) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] == label) idx.push_back(i);
    }
    if (idx.empty()) continue;
    if (idx.size() < folds) {
      plan.warnings.push_back("StratificationInfeasible: class '" +
                              std::string(to_string(label)) + "' has " +
                              std::to_string(idx.size()) + " < k=" + std::to_string(k) +
                              " instances");
    }
    classes.push_back(label);
    members.push_back(std::move(idx));
  }

  // Fold sizes: the first n % k folds take one extra instance.
  std::vector<std::uint64_t> size(folds, n / folds);
  for (std::size_t f = 0; f < n % folds; ++f) ++size[f];

  // quota(c, f) starts at floor(n_c * size_f / n); the flow then hands out
  // the remaining units so that every row and column total is exact.
  const std::size_t rows = classes.size();
  std::vector<std::uint64_t> quota(rows * folds);
  std::vector<std::uint64_t> row_demand(rows), col_capacity(size);
  QuotaFlow flow(rows, folds);
  for (std::size_t c = 0; c < rows; ++c) {
    const std::uint64_t nc = members[c].size();
    std::uint64_t placed = 0;
    for (std::size_t f = 0; f < folds; ++f) {
      const std::uint64_t prod = nc * size[f];
      quota[c * folds + f] = prod / n;
      placed += prod / n;
      col_capacity[f] -= prod / n;
      if (prod % n != 0) flow.allow(c, f);
    }
    row_demand[c] = nc - placed;
  }
  if (!flow.solve(row_demand, col_capacity)) {
    // The proportional table is itself a fractional solution, so an integral
    // one always exists.
    throw Error(ErrorCode::kInvalidArgument, "internal: fold quota rounding failed");
  }
  for (std::size_t c = 0; c < rows; ++c) {
    for (std::size_t f = 0; f < folds; ++f) {
      if (flow.used(c, f)) ++quota[c * folds + f];
    }
  }

  SplitMix64 rng(seed);
  for (std::size_t c = 0; c < rows; ++c) {
    std::vector<std::size_t> idx = members[c];
    rng.shuffle(idx);
    std::size_t f = 0;
    for (std::size_t i : idx) {
      while (quota[c * folds + f] == 0) f = (f + 1) % folds;
      plan.assignments[i] = static_cast<int>(f);
      --quota[c * folds + f];
      f = (f + 1) % folds;
    }
  }
  return plan;
}

// ---------------------------------------------------------------------------

void EvalCounts::add(AspectLabel gold, AspectLabel predicted) {
  ensure_class(gold);
  ensure_class(predicted);
  ++evaluated;
  ++per_class[gold].support;
  if (gold == predicted) {
    ++per_class[gold].tp;
  } else {
    ++per_class[gold].fn;
    ++per_class[predicted].fp;
  }
}

EvalCounts& EvalCounts::operator+=(const EvalCounts& other) {
  for (const auto& [label, c] : other.per_class) {
    ClassCounts& mine = per_class[label];
    mine.tp += c.tp;
    mine.fp += c.fp;
    mine.fn += c.fn;
    mine.support += c.support;
  }
  evaluated += other.evaluated;
  return *this;
}

MetricsReport compute_metrics(const EvalCounts& counts) {
  MetricsReport report;
  report.counts = counts;
  std::uint64_t tp = 0, fp = 0, fn = 0;
  double f1_sum = 0.0;
  for (const auto& [label, c] : counts.per_class) {
    ClassMetrics m;
    m.precision = safe_ratio(c.tp, c.tp + c.fp, m.zero_division);
    m.recall = safe_ratio(c.tp, c.tp + c.fn, m.zero_division);
    m.f1 = f1_of(m.precision, m.recall, m.zero_division);
    report.per_class[label] = m;
    f1_sum += m.f1;
    tp += c.tp;
    fp += c.fp;
    fn += c.fn;
  }
  bool ignored = false;
  report.micro_precision = safe_ratio(tp, tp + fp, ignored);
  report.micro_recall = safe_ratio(tp, tp + fn, ignored);
  report.micro_f1 = f1_of(report.micro_precision, report.micro_recall, ignored);
  report.macro_f1 = counts.per_class.empty()
                        ? 0.0
                        : f1_sum / static_cast<double>(counts.per_class.size());
  report.accuracy = safe_ratio(tp, counts.evaluated, ignored);
  return report;
}

double metric_value(const MetricsReport& report, Metric metric) {
  return metric == Metric::kAccuracy ? report.accuracy : report.micro_f1;
}

// ---------------------------------------------------------------------------

CrossValResult cross_validate(std::span<const EmbeddedInstance> instances, int k,
                              std::uint64_t seed, const TrainConfig& config,
                              int threads) {
  config.validate();
  if (instances.empty()) throw Error(ErrorCode::kEmptyData, "no instances");
  CrossValResult result;
  result.classes = label_inventory(instances);
  require_two_classes(result.classes);

  std::vector<AspectLabel> labels;
  labels.reserve(instances.size());
  for (const auto& inst : instances) labels.push_back(inst.label);
  result.plan = make_folds(labels, k, seed);
  result.warnings = result.plan.warnings;
  const auto folds = result.plan.folds();

  std::vector<EvalCounts> fold_counts(folds.size());
  std::vector<char> fold_single_class(folds.size(), 0);
  std::atomic<int> trained{0};
  internal::parallel_for(folds.size(), threads, [&](std::size_t f) {
    std::vector<EmbeddedInstance> train_set, test_set;
    for (std::size_t i = 0; i < instances.size(); ++i) {
      (static_cast<std::size_t>(result.plan.assignments[i]) == f ? test_set : train_set)
          .push_back(instances[i]);
    }
    TrainResult fit = train(train_set, result.classes, config);
    ++trained;
    fold_single_class[f] = fit.trace.single_class;
    fold_counts[f] = evaluate_model(fit.model, test_set, result.classes);
  });

  EvalCounts total;
  for (AspectLabel c : result.classes) total.ensure_class(c);
  for (std::size_t f = 0; f < folds.size(); ++f) {
    total += fold_counts[f];
    if (fold_single_class[f]) {
      result.warnings.push_back("SingleClassData: fold " + std::to_string(f) +
                                " trained on a single class");
    }
  }
  result.times_tested.assign(instances.size(), 0);
  for (const auto& fold : folds) {
    for (std::size_t i : fold) ++result.times_tested[i];
  }
  result.models_trained = trained.load();
  result.metrics = compute_metrics(total);
  return result;
}

AspectLabel majority_label(std::span<const AspectLabel> train_labels) {
  if (train_labels.empty()) throw Error(ErrorCode::kEmptyTrain, "no training labels");
  std::map<AspectLabel, std::size_t> counts;
  for (AspectLabel l : train_labels) ++counts[l];
  AspectLabel best = counts.begin()->first;
  for (const auto& [label, count] : counts) {
    if (count > counts[best]) best = label;
  }
  return best;
}

namespace {

EvalCounts baseline_counts(std::span<const AspectLabel> train_labels,
                           std::span<const AspectLabel> test_labels) {
  const AspectLabel guess = majority_label(train_labels);
  EvalCounts counts;
  for (AspectLabel l : train_labels) counts.ensure_class(l);
  for (AspectLabel l : test_labels) counts.add(l, guess);
  return counts;
}

}  // namespace

MetricsReport majority_baseline(std::span<const AspectLabel> train_labels,
                                std::span<const AspectLabel> test_labels) {
  return compute_metrics(baseline_counts(train_labels, test_labels));
}

CrossValResult cross_validate_baseline(std::span<const AspectLabel> labels, int k,
                                       std::uint64_t seed) {
  if (labels.empty()) throw Error(ErrorCode::kEmptyTrain, "no labels");
  CrossValResult result;
  std::set<AspectLabel> inventory(labels.begin(), labels.end());
  result.classes.assign(inventory.begin(), inventory.end());
  result.plan = make_folds(labels, k, seed);
  result.warnings = result.plan.warnings;
  EvalCounts total;
  for (AspectLabel c : result.classes) total.ensure_class(c);
  for (const auto& fold : result.plan.folds()) {
    std::vector<AspectLabel> train_labels, test_labels;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const bool in_fold = std::binary_search(fold.begin(), fold.end(), i);
      (in_fold ? test_labels : train_labels).push_back(labels[i]);
    }
    total += baseline_counts(train_labels, test_labels);
    ++result.models_trained;
  }
  result.times_tested.assign(labels.size(), 1);
  result.metrics = compute_metrics(total);
  return result;
}

// ---------------------------------------------------------------------------

LanguageSets group_by_language(std::span<const EmbeddedInstance> instances) {
  LanguageSets sets;
  for (const auto& inst : instances) sets[inst.language].push_back(inst);
  return sets;
}

ZeroShotResult zero_shot_eval(const LanguageSets& corpora, const std::string& target,
                              const TrainConfig& config, const TrainObserver& observer) {
  config.validate();
  const auto& test = target_set(corpora, target);
  common_dim(corpora);

  ZeroShotResult result;
  result.target = target;
  for (const auto& [lang, instances] : corpora) {
    if (lang != target && !instances.empty()) result.train_languages.push_back(lang);
  }
  const std::vector<EmbeddedInstance> train_set =
      training_union(corpora, result.train_languages, target);
  if (train_set.empty()) {
    throw Error(ErrorCode::kEmptyData, "no non-target language has data");
  }
  result.classes = label_inventory(train_set, test);
  require_two_classes(result.classes);

  if (observer) observer(train_set);
  TrainResult fit = train(train_set, result.classes, config);
  if (fit.trace.single_class) {
    result.warnings.push_back("SingleClassData: training data has a single class");
  }
  result.metrics = compute_metrics(evaluate_model(fit.model, test, result.classes));
  result.train_size = train_set.size();
  result.test_size = test.size();
  result.model = std::move(fit.model);
  result.trace = std::move(fit.trace);
  return result;
}

// ---------------------------------------------------------------------------

std::string coalition_key(const std::vector<std::string>& languages) {
  std::vector<std::string> sorted = languages;
  std::sort(sorted.begin(), sorted.end());
  std::string key;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i) key += ',';
    key += sorted[i];
  }
  return key;
}

AttributionReport attribute_from_values(const std::string& target,
                                        std::vector<std::string> contributors,
                                        const CoalitionValueFn& value_fn,
                                        bool include_empty,
                                        std::optional<double> empty_value,
                                        int threads) {
  std::sort(contributors.begin(), contributors.end());
  contributors.erase(std::unique(contributors.begin(), contributors.end()),
                     contributors.end());
  const std::size_t n = contributors.size();
  if (n < 2) {
    throw Error(ErrorCode::kTooFewContributors,
                "attribution needs at least two contributor languages, got " +
                    std::to_string(n));
  }
  if (n > 20) throw Error(ErrorCode::kInvalidArgument, "too many contributors");
  if (include_empty && !empty_value) {
    throw Error(ErrorCode::kInvalidArgument, "include_empty requires a value for v({})");
  }

  auto members = [&](std::size_t mask) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) out.push_back(contributors[i]);
    }
    return out;
  };

  // Every nonempty coalition is evaluated exactly once, in parallel if asked.
  const std::size_t full = std::size_t{1} << n;
  std::vector<double> value(full, 0.0);
  internal::parallel_for(full - 1, threads, [&](std::size_t i) {
    const std::size_t mask = i + 1;
    value[mask] = value_fn(members(mask));
  });

  AttributionReport report;
  report.target = target;
  report.contributors = contributors;
  report.include_empty = include_empty;
  report.evaluations = static_cast<int>(full - 1);
  if (include_empty) {
    value[0] = *empty_value;
    report.empty_value = empty_value;
    report.coalition_values[""] = *empty_value;
  }
  for (std::size_t mask = 1; mask < full; ++mask) {
    report.coalition_values[coalition_key(members(mask))] = value[mask];
  }

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t mask = 0; mask < full; ++mask) {
      if (mask & bit) continue;
      if (mask == 0 && !include_empty) continue;
      sum += value[mask | bit] - value[mask];
      ++count;
    }
    report.impacts[contributors[i]] = sum / static_cast<double>(count);
  }
  return report;
}

AttributionReport language_attribution(const LanguageSets& corpora,
                                       const std::string& target,
                                       const TrainConfig& config, bool include_empty,
                                       Metric metric, int threads,
                                       const TrainObserver& observer) {
  config.validate();
  const auto& test = target_set(corpora, target);
  common_dim(corpora);

  std::vector<std::string> contributors;
  std::vector<EmbeddedInstance> all_train;
  for (const auto& [lang, instances] : corpora) {
    if (lang == target || instances.empty()) continue;
    contributors.push_back(lang);
    all_train.insert(all_train.end(), instances.begin(), instances.end());
  }
  const std::vector<AspectLabel> classes = label_inventory(all_train, test);
  require_two_classes(classes);

  std::vector<std::string> warnings;
  std::mutex warn_mutex;
  auto value_fn = [&](const std::vector<std::string>& coalition) {
    const std::vector<EmbeddedInstance> train_set =
        training_union(corpora, coalition, target);
    if (observer) {
      std::lock_guard<std::mutex> lock(warn_mutex);
      observer(train_set);
    }
    TrainResult fit = train(train_set, classes, config);
    if (fit.trace.single_class) {
      std::lock_guard<std::mutex> lock(warn_mutex);
      warnings.push_back("SingleClassData: coalition {" + coalition_key(coalition) +
                         "} has a single class");
    }
    return metric_value(compute_metrics(evaluate_model(fit.model, test, classes)), metric);
  };

  std::optional<double> empty_value;
  if (include_empty) empty_value = 1.0 / static_cast<double>(classes.size());
  AttributionReport report = attribute_from_values(target, contributors, value_fn,
                                                   include_empty, empty_value, threads);
  std::sort(warnings.begin(), warnings.end());
  report.warnings = std::move(warnings);
  return report;
}

}  // namespace lexaspect
