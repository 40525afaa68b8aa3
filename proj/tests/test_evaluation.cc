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
#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <set>

#include "doctest.h"
#include "lexaspect/error.hpp"
#include "lexaspect/evaluation.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace lexaspect;
using lexaspect::testing::error_of;
using lexaspect::testing::inst;

namespace {

constexpr AspectLabel kA = AspectLabel::kState;
constexpr AspectLabel kB = AspectLabel::kAtelic;
constexpr AspectLabel kC = AspectLabel::kTelic;

std::vector<AspectLabel> labels_of(std::initializer_list<std::pair<AspectLabel, int>> runs) {
  std::vector<AspectLabel> out;
  for (const auto& [l, n] : runs) out.insert(out.end(), n, l);
  return out;
}

// Checks the partition and the per-class proportionality bound.
void check_plan(const std::vector<AspectLabel>& labels, const FoldPlan& plan) {
  const std::size_t n = labels.size();
  REQUIRE(plan.assignments.size() == n);
  std::vector<int> seen(n, 0);
  auto folds = plan.folds();
  REQUIRE(folds.size() == static_cast<std::size_t>(plan.k));
  for (const auto& f : folds) {
    CHECK_FALSE(f.empty());
    for (std::size_t i : f) ++seen[i];
  }
  for (int s : seen) CHECK(s == 1);

  std::map<AspectLabel, int> total;
  for (auto l : labels) ++total[l];
  for (const auto& f : folds) {
    std::map<AspectLabel, int> here;
    for (std::size_t i : f) ++here[labels[i]];
    for (const auto& [l, t] : total) {
      const double expected = static_cast<double>(t) * f.size() / n;
      CHECK(std::abs(here[l] - expected) < 1.0);
    }
  }
  std::size_t lo = n, hi = 0;
  for (const auto& f : folds) {
    lo = std::min(lo, f.size());
    hi = std::max(hi, f.size());
  }
  CHECK(hi - lo <= 1);
}

std::vector<EmbeddedInstance> two_class(std::size_t n, std::uint64_t seed, double sigma,
                                        const std::string& lang = "de") {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, sigma);
  std::vector<EmbeddedInstance> out;
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = i % 2 == 0;
    out.push_back(inst(lang + std::to_string(i), {(pos ? 1.0 : -1.0) + nd(gen), nd(gen), nd(gen)},
                       pos ? kA : kB, lang));
  }
  return out;
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("six A and four B over two folds") {
  auto labels = labels_of({{kA, 6}, {kB, 4}});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    FoldPlan p = make_folds(labels, 2, seed);
    for (const auto& f : p.folds()) {
      int a = 0, b = 0;
      for (std::size_t i : f) (labels[i] == kA ? a : b)++;
      CHECK(a == 3);
      CHECK(b == 2);
    }
  }
}

TEST_CASE("fold plans are seeded") {
  auto labels = labels_of({{kA, 13}, {kB, 9}, {kC, 5}});
  FoldPlan x = make_folds(labels, 4, 77);
  FoldPlan y = make_folds(labels, 4, 77);
  CHECK(x.assignments == y.assignments);
  bool any_differs = false;
  for (std::uint64_t s = 0; s < 10; ++s) {
    any_differs |= make_folds(labels, 4, s).assignments != x.assignments;
  }
  CHECK(any_differs);
}

TEST_CASE("k equal to N is leave-one-out") {
  auto labels = labels_of({{kA, 5}, {kB, 5}});
  FoldPlan p = make_folds(labels, 10, 1);
  for (const auto& f : p.folds()) CHECK(f.size() == 1);
  CHECK_FALSE(p.warnings.empty());
}

TEST_CASE("bad k") {
  auto labels = labels_of({{kA, 5}, {kB, 5}});
  CHECK(error_of([&] { make_folds(labels, 1, 0); }) == ErrorCode::kBadK);
  CHECK(error_of([&] { make_folds(labels, 11, 0); }) == ErrorCode::kBadK);
  CHECK(error_of([&] { make_folds(labels, 0, 0); }) == ErrorCode::kBadK);
}

TEST_CASE("stratification warning when a class is smaller than k") {
  auto labels = labels_of({{kA, 20}, {kB, 3}});
  FoldPlan p = make_folds(labels, 5, 3);
  REQUIRE_FALSE(p.warnings.empty());
  CHECK(p.warnings[0].find("StratificationInfeasible") != std::string::npos);
  check_plan(labels, p);
  CHECK(make_folds(labels_of({{kA, 20}, {kB, 10}}), 5, 3).warnings.empty());
}

TEST_CASE("random label multisets satisfy the stratification bound") {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + gen() % 120;
    std::vector<AspectLabel> labels(n);
    const int classes = 1 + static_cast<int>(gen() % 3);
    for (auto& l : labels) l = kAllLabels[gen() % classes];
    const int k = 2 + static_cast<int>(gen() % std::min<std::size_t>(n - 1, 12));
    check_plan(labels, make_folds(labels, k, gen()));
  }
}

TEST_CASE("accumulated counts give the worked F1") {
  EvalCounts fold1, fold2;
  fold1.per_class[kA] = {3, 1, 2, 5};
  fold2.per_class[kA] = {2, 2, 1, 3};
  EvalCounts total;
  total += fold1;
  total += fold2;
  CHECK(total.per_class[kA] == ClassCounts{5, 3, 3, 8});
  MetricsReport m = compute_metrics(total);
  CHECK(m.per_class.at(kA).precision == 0.625);
  CHECK(m.per_class.at(kA).recall == 0.625);
  CHECK(m.per_class.at(kA).f1 == 0.625);
}

TEST_CASE("perfect predictions") {
  EvalCounts c;
  for (auto l : {kA, kB, kA, kC}) c.add(l, l);
  MetricsReport m = compute_metrics(c);
  for (const auto& [l, cm] : m.per_class) CHECK(cm.f1 == 1.0);
  CHECK(m.micro_f1 == 1.0);
  CHECK(m.accuracy == 1.0);
}

TEST_CASE("zero division is flagged and scored as zero") {
  EvalCounts c;
  c.ensure_class(kC);
  c.add(kA, kB);
  c.add(kB, kB);
  MetricsReport m = compute_metrics(c);
  CHECK(m.per_class.at(kC).f1 == 0.0);
  CHECK(m.per_class.at(kC).zero_division);
  CHECK(m.per_class.at(kA).f1 == 0.0);
  CHECK(m.per_class.at(kA).zero_division);  // never predicted: precision is 0/0
  CHECK_FALSE(m.per_class.at(kB).zero_division);
  CHECK(m.per_class.at(kB).f1 == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("micro-F1 equals accuracy for single-label outcomes") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    EvalCounts c;
    for (auto l : kAllLabels) c.ensure_class(l);
    const int n = 1 + static_cast<int>(gen() % 80);
    for (int i = 0; i < n; ++i) c.add(kAllLabels[gen() % 3], kAllLabels[gen() % 3]);
    MetricsReport m = compute_metrics(c);
    CHECK(m.micro_f1 == doctest::Approx(m.accuracy).epsilon(1e-12));
    CHECK(m.micro_precision == doctest::Approx(m.accuracy).epsilon(1e-12));
    CHECK(m.micro_recall == doctest::Approx(m.accuracy).epsilon(1e-12));
    std::uint64_t tp = 0, fp = 0, fn = 0;
    for (const auto& [l, cc] : c.per_class) {
      tp += cc.tp;
      fp += cc.fp;
      fn += cc.fn;
    }
    CHECK(tp + fp == c.evaluated);
    CHECK(tp + fn == c.evaluated);
    double macro = 0;
    for (const auto& [l, cm] : m.per_class) {
      if (cm.precision + cm.recall > 0) {
        CHECK(cm.f1 == doctest::Approx(2 * cm.precision * cm.recall / (cm.precision + cm.recall)));
      }
      macro += cm.f1;
    }
    CHECK(m.macro_f1 == doctest::Approx(macro / 3));
  }
}

TEST_CASE("cross validation protocol") {
  auto data = two_class(100, 1, 0.3);
  CrossValResult r = cross_validate(data, 10, 42, TrainConfig{});
  CHECK(r.models_trained == 10);
  for (int t : r.times_tested) CHECK(t == 1);
  CHECK(r.metrics.counts.evaluated == 100);
  CHECK(r.metrics.micro_f1 >= 0.9);
  CHECK(r.metrics.micro_f1 == doctest::Approx(r.metrics.accuracy).epsilon(1e-12));
  CHECK(r.classes == std::vector<AspectLabel>{kA, kB});
  CHECK(error_of([&] { cross_validate(data, 1, 0, TrainConfig{}); }) == ErrorCode::kBadK);
  auto one_class = data;
  for (auto& x : one_class) x.label = kA;
  CHECK(error_of([&] { cross_validate(one_class, 5, 0, TrainConfig{}); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("cross validation does not depend on thread count") {
  auto data = two_class(60, 2, 1.0);
  CrossValResult a = cross_validate(data, 5, 7, TrainConfig{}, 1);
  CrossValResult b = cross_validate(data, 5, 7, TrainConfig{}, 4);
  CHECK(a.plan.assignments == b.plan.assignments);
  for (auto l : a.classes) CHECK(a.metrics.counts.per_class[l] == b.metrics.counts.per_class[l]);
  CHECK(a.metrics.micro_f1 == b.metrics.micro_f1);
}

TEST_CASE("majority baseline") {
  auto train = labels_of({{kA, 7}, {kB, 3}});
  CHECK(majority_baseline(train, train).accuracy == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(majority_label(labels_of({{kB, 5}, {kA, 5}})) == kA);
  CHECK(majority_label(labels_of({{kB, 5}, {kC, 5}})) == kC);
  CHECK(majority_baseline(train, labels_of({{kB, 4}})).accuracy == 0.0);
  std::vector<AspectLabel> none;
  CHECK(error_of([&] { majority_label(none); }) == ErrorCode::kEmptyTrain);
  CrossValResult cv = cross_validate_baseline(labels_of({{kA, 30}, {kB, 10}}), 10, 1);
  CHECK(cv.metrics.accuracy == 0.75);
  CHECK(cv.models_trained == 10);
}

TEST_CASE("zero-shot trains on the union of the other languages") {
  LanguageSets sets;
  sets["de"] = two_class(10, 1, 0.1, "de");
  sets["fa"] = two_class(10, 2, 0.1, "fa");
  sets["tr"] = two_class(7, 3, 0.1, "tr");
  std::set<std::string> seen;
  ZeroShotResult r = zero_shot_eval(sets, "tr", TrainConfig{},
                                    [&](std::span<const EmbeddedInstance> train) {
                                      for (const auto& x : train) seen.insert(x.language);
                                    });
  CHECK(r.train_size == 20);
  CHECK(r.test_size == 7);
  CHECK(r.train_languages == std::vector<std::string>{"de", "fa"});
  CHECK(seen == std::set<std::string>{"de", "fa"});
  CHECK(r.metrics.accuracy == 1.0);
  CHECK(error_of([&] { zero_shot_eval(sets, "ru", TrainConfig{}); }) == ErrorCode::kTargetMissing);
  sets["ru"] = {};
  CHECK(error_of([&] { zero_shot_eval(sets, "ru", TrainConfig{}); }) == ErrorCode::kTargetMissing);
  sets.erase("ru");
  sets["fa"][0].vector.values.push_back(0.0);
  CHECK(error_of([&] { zero_shot_eval(sets, "tr", TrainConfig{}); }) == ErrorCode::kMixedDimensions);
}

TEST_CASE("zero-shot on a shared space is accurate") {
  LanguageSets sets;
  for (std::string lang : {"de", "fa", "tr"}) sets[lang] = two_class(100, lang[0], 0.1, lang);
  for (const auto& [lang, _] : sets) {
    CHECK(zero_shot_eval(sets, lang, TrainConfig{}).metrics.accuracy >= 0.95);
  }
}

TEST_CASE("attribution with two contributors") {
  auto v = [](const std::vector<std::string>& s) {
    if (s == std::vector<std::string>{"B"}) return 0.6;
    if (s == std::vector<std::string>{"A", "B"}) return 0.8;
    return 0.3;  // {A}
  };
  AttributionReport r = attribute_from_values("T", {"B", "A"}, v, false, std::nullopt);
  CHECK(r.impacts.at("A") == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.impacts.at("B") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.evaluations == 3);
  CHECK(r.coalition_values.size() == 3);
  CHECK(r.contributors == std::vector<std::string>{"A", "B"});
}

TEST_CASE("attribution with three contributors") {
  std::map<std::string, double> table = {{"A", 0.4},   {"B", 0.5},   {"C", 0.6},
                                         {"B,C", 0.7}, {"A,B", 0.7}, {"A,C", 0.65},
                                         {"A,B,C", 0.8}};
  auto v = [&](const std::vector<std::string>& s) { return table.at(coalition_key(s)); };
  AttributionReport r = attribute_from_values("T", {"A", "B", "C"}, v, false, std::nullopt);
  CHECK(r.impacts.at("A") == doctest::Approx((0.2 + 0.05 + 0.1) / 3).epsilon(1e-12));
  CHECK(std::abs(r.impacts.at("A") - 0.11667) < 1e-5);
  CHECK(r.coalition_values == table);
}

TEST_CASE("attribution recovers additive contributions exactly") {
  // Dyadic addends keep every partial sum exact.
  std::map<std::string, double> c = {{"ar", 0.5}, {"de", -0.25}, {"fa", 0.125},
                                     {"ru", 0.0625}, {"zh", -0.03125}};
  auto v = [&](const std::vector<std::string>& s) {
    double sum = 0;
    for (const auto& l : s) sum += c.at(l);
    return sum;
  };
  for (bool include_empty : {false, true}) {
    AttributionReport r = attribute_from_values("tr", {"ar", "de", "fa", "ru", "zh"}, v,
                                                include_empty, 0.0, 3);
    for (const auto& [l, want] : c) CHECK(r.impacts.at(l) == want);
    CHECK(r.coalition_values.size() == (include_empty ? 32u : 31u));
    CHECK(r.evaluations == 31);
  }
}

TEST_CASE("attribution matches brute-force enumeration bitwise") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + gen() % 5;
    std::vector<std::string> langs;
    for (std::size_t i = 0; i < n; ++i) langs.push_back(std::string(1, char('a' + i)) + "x");
    std::map<std::string, double> table;
    auto v = [&](const std::vector<std::string>& s) { return table.at(coalition_key(s)); };
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      std::vector<std::string> s;
      for (std::size_t i = 0; i < n; ++i) if (mask & (1u << i)) s.push_back(langs[i]);
      table[coalition_key(s)] = ud(gen);
    }
    const bool include_empty = trial % 2;
    const double empty = 0.5;
    AttributionReport r = attribute_from_values("tt", langs, v, include_empty, empty, 2);
    auto want = oracle::brute_force_impacts(langs, v, include_empty, empty);
    for (const auto& l : langs) CHECK(r.impacts.at(l) == want.at(l));
  }
}

TEST_CASE("attribution argument checks") {
  auto v = [](const std::vector<std::string>&) { return 0.0; };
  CHECK(error_of([&] { attribute_from_values("T", {"A"}, v, false, std::nullopt); }) ==
        ErrorCode::kTooFewContributors);
  CHECK(error_of([&] { attribute_from_values("T", {"A", "B"}, v, true, std::nullopt); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("language attribution trains each coalition once") {
  LanguageSets sets;
  for (std::string lang : {"ar", "de", "fa", "tr"}) sets[lang] = two_class(20, lang[1], 0.5, lang);
  std::atomic<int> trainings{0};
  std::mutex mu;
  std::set<std::string> keys;
  AttributionReport r = language_attribution(
      sets, "tr", TrainConfig{}, true, Metric::kAccuracy, 2,
      [&](std::span<const EmbeddedInstance> train) {
        ++trainings;
        std::set<std::string> langs;
        for (const auto& x : train) {
          CHECK(x.language != "tr");
          langs.insert(x.language);
        }
        std::lock_guard lock(mu);
        keys.insert(coalition_key({langs.begin(), langs.end()}));
      });
  CHECK(trainings == 7);
  CHECK(keys.size() == 7);
  CHECK(r.evaluations == 7);
  CHECK(r.coalition_values.size() == 8);
  CHECK(r.empty_value == 0.5);
  CHECK(r.coalition_values.at("") == 0.5);

  auto v = [&](const std::vector<std::string>& s) { return r.coalition_values.at(coalition_key(s)); };
  auto want = oracle::brute_force_impacts(r.contributors, v, true, 0.5);
  for (const auto& l : r.contributors) CHECK(r.impacts.at(l) == want.at(l));

  sets.erase("fa");
  sets.erase("de");
  CHECK(error_of([&] { language_attribution(sets, "tr", TrainConfig{}, false); }) ==
        ErrorCode::kTooFewContributors);
}

}  // TEST_SUITE
