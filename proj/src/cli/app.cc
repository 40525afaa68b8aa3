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
#include <chrono>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "lexaspect/classifier.hpp"
#include "lexaspect/cli.hpp"
#include "lexaspect/corpus.hpp"
#include "lexaspect/embeddings.hpp"
#include "lexaspect/error.hpp"
#include "lexaspect/evaluation.hpp"
#include "lexaspect/stats.hpp"
#include "lexaspect/synthetic.hpp"
#include "report.hpp"

namespace lexaspect::cli {

namespace {

struct Options {
  std::string corpus;
  std::string corpus_b;
  std::vector<std::string> vectors;
  std::string mode = "mean";
  std::string language;
  std::string domain;
  bool pool_domains = false;
  std::uint64_t seed = 0;
  int k = 10;
  double l2 = 1e-4;
  int max_iters = 1000;
  double grad_tol = 1e-6;
  std::string drop_policy = "default";
  bool normalize = false;
  bool include_empty = false;
  std::string metric = "accuracy";
  int threads = 1;
  std::string out;
  bool pretty = false;
  std::vector<std::size_t> top_k = {10, 30, 100};
  std::string table;
  std::string model_out;
  // gen-synthetic
  std::vector<std::string> languages = {"ar", "zh", "fa", "de", "ru", "tr"};
  std::size_t count = 100;
  std::size_t dim = 16;
  double sigma = 0.1;
  std::string out_corpus;
  std::string out_vectors;
  std::string out_word_vectors;
};

// Filled in by a subcommand; run() adds the manifest and writes it out.
struct Report {
  RunManifest manifest;
  Json experiment = Json::object();
  std::string payload_key;  // "metrics", "stats" or "attribution"
  Json payload;
  std::vector<std::string> warnings;
};

TrainConfig train_config(const Options& o) {
  TrainConfig c;
  c.l2_lambda = o.l2;
  c.max_iters = o.max_iters;
  c.grad_tol = o.grad_tol;
  c.seed = o.seed;
  c.validate();
  return c;
}

std::optional<ClassDropPolicy> drop_policy(const Options& o) {
  if (o.drop_policy == "default") return default_class_drop_policy();
  return ClassDropPolicy{};
}

Metric parse_metric(const std::string& text) {
  return text == "micro-f1" ? Metric::kMicroF1 : Metric::kAccuracy;
}

// Corpus restricted to the requested language/domain with the class drop
// applied. Refuses to mix domains unless --pool-domains is given.
Corpus prepare_corpus(const Options& o, bool restrict_language, Report& report) {
  Corpus corpus = load_corpus(o.corpus);
  report.manifest.inputs.push_back({"corpus", o.corpus});
  CorpusFilter criteria;
  if (restrict_language && !o.language.empty()) criteria.language = o.language;
  if (!o.domain.empty()) criteria.domain = parse_domain(o.domain);
  corpus = filter(corpus, criteria);
  if (o.domain.empty() && domains_of(corpus).size() > 1 && !o.pool_domains) {
    throw Error(ErrorCode::kMixedDomains,
                "corpus mixes captions and wikipedia; pass --domain or --pool-domains");
  }
  const std::size_t before = corpus.size();
  corpus = apply_class_drop(corpus, *drop_policy(o));
  if (before != corpus.size()) {
    report.warnings.push_back("ClassDrop: removed " + std::to_string(before - corpus.size()) +
                              " utterances");
  }
  if (corpus.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no utterances left after filtering");
  }
  report.manifest.drop_policy = drop_policy(o);
  report.experiment["domain"] = o.domain.empty() ? Json("pooled") : Json(o.domain);
  return corpus;
}

struct VectorSource {
  std::string language;  // empty: applies to every language
  std::string path;
};

std::vector<VectorSource> vector_sources(const Options& o) {
  if (o.vectors.empty()) throw Error(ErrorCode::kInvalidArgument, "--vectors is required");
  std::vector<VectorSource> sources;
  for (const std::string& spec : o.vectors) {
    const auto eq = spec.find('=');
    if (eq != std::string::npos && is_language_code(spec.substr(0, eq))) {
      sources.push_back({spec.substr(0, eq), spec.substr(eq + 1)});
    } else {
      sources.push_back({"", spec});
    }
  }
  return sources;
}

template <typename Table>
const Table& table_for(const std::map<std::string, Table>& tables,
                       const std::string& language) {
  auto it = tables.find(language);
  if (it == tables.end()) it = tables.find("");
  if (it == tables.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "no vector table for language '" + language + "'");
  }
  return it->second;
}

template <typename Table, typename Parser>
std::map<std::string, Table> load_tables(const std::vector<VectorSource>& sources,
                                         Parser parse, Report& report) {
  std::map<std::string, Table> tables;
  std::optional<std::size_t> dim;
  for (const VectorSource& src : sources) {
    Table table = parse(src.path);
    report.manifest.inputs.push_back(
        {src.language.empty() ? "vectors" : "vectors:" + src.language, src.path});
    if (dim && *dim != table.dim) {
      throw Error(ErrorCode::kMixedDimensions,
                  "vector file " + src.path + " has dim " + std::to_string(table.dim) +
                      ", expected " + std::to_string(*dim));
    }
    dim = table.dim;
    tables[src.language] = std::move(table);
  }
  return tables;
}

std::vector<EmbeddedInstance> embed_corpus(const Corpus& corpus, const Options& o,
                                           Report& report) {
  const auto sources = vector_sources(o);
  std::vector<EmbeddedInstance> instances;
  instances.reserve(corpus.size());
  if (o.mode == "lookup") {
    const auto tables = load_tables<SentenceVectorTable>(
        sources, [](const std::string& p) { return parse_sentence_vector_file(p); }, report);
    for (const auto& u : corpus.utterances) {
      instances.push_back(embed_lookup(u, table_for(tables, u.language), o.normalize));
    }
  } else {
    const auto tables = load_tables<VectorTable>(
        sources, [](const std::string& p) { return parse_vector_file(p); }, report);
    for (const auto& [lang, table] : tables) {
      if (table.duplicate_tokens > 0) {
        report.warnings.push_back("DuplicateTokens: " + std::to_string(table.duplicate_tokens) +
                                  " repeated tokens in vectors" +
                                  (lang.empty() ? "" : " for " + lang));
      }
    }
    double oov_sum = 0.0;
    std::size_t all_oov = 0;
    for (const auto& u : corpus.utterances) {
      instances.push_back(embed_mean(u, table_for(tables, u.language), o.normalize));
      oov_sum += instances.back().oov_fraction;
      if (instances.back().oov_fraction == 1.0) ++all_oov;
    }
    report.experiment["mean_oov_fraction"] = oov_sum / static_cast<double>(corpus.size());
    if (all_oov > 0) {
      report.warnings.push_back("AllOov: " + std::to_string(all_oov) +
                                " utterances have no known token and embed as zero");
    }
  }
  report.experiment["mode"] = o.mode;
  report.experiment["normalize"] = o.normalize;
  return instances;
}

// ---------------------------------------------------------------------------
// Subcommands

void run_stats(const Options& o, Report& r) {
  r.payload_key = "stats";
  std::vector<Corpus> corpora;
  corpora.push_back(load_corpus(o.corpus));
  r.manifest.inputs.push_back({"corpus", o.corpus});
  if (!o.corpus_b.empty()) {
    corpora.push_back(load_corpus(o.corpus_b));
    r.manifest.inputs.push_back({"corpus_b", o.corpus_b});
  }

  // Groups are (language, domain) over all supplied corpora.
  std::map<std::string, Corpus> groups;
  for (const Corpus& c : corpora) {
    for (const auto& u : c.utterances) {
      groups[u.language + "/" + std::string(to_string(u.domain))].utterances.push_back(u);
    }
  }

  Json sizes = Json::object(), dist = Json::object(), mean_len = Json::object(),
       top_k = Json::object();
  for (const auto& [key, group] : groups) {
    sizes[key] = group.size();
    Json d = Json::object();
    for (const auto& [label, p] : aspect_distribution(group)) {
      d[std::string(to_string(label))] = p;
    }
    dist[key] = d;
    mean_len[key] = mean_sentence_length(group);
    const FrequencyTable freq = verb_frequencies(group);
    if (freq.total == 0) {
      r.warnings.push_back("EmptyTable: group " + key + " has no verb_lemma annotations");
      continue;
    }
    Json cov = Json::object();
    for (std::size_t k : o.top_k) cov[std::to_string(k)] = top_k_coverage(freq, k);
    top_k[key] = cov;
  }

  Json stats;
  stats["groups"] = Json::array();
  for (const auto& [key, g] : groups) stats["groups"].push_back(key);
  stats["sizes"] = sizes;
  stats["distribution"] = dist;
  stats["mean_length"] = mean_len;
  stats["top_k"] = top_k;

  if (corpora.size() == 2) {
    // Label columns absent from both corpora carry no information.
    std::vector<AspectLabel> columns;
    const LabelCounts a = aspect_counts(corpora[0]);
    const LabelCounts b = aspect_counts(corpora[1]);
    for (AspectLabel label : kAllLabels) {
      if (a.at(label) + b.at(label) > 0) {
        columns.push_back(label);
      } else {
        r.warnings.push_back("EmptyColumn: label '" + std::string(to_string(label)) +
                             "' absent from both corpora; dropped from chi-square");
      }
    }
    std::vector<std::vector<std::uint64_t>> observed(2);
    for (AspectLabel label : columns) {
      observed[0].push_back(a.at(label));
      observed[1].push_back(b.at(label));
    }
    Json chi = to_json(chi_square_homogeneity(observed));
    chi["rows"] = {o.corpus, o.corpus_b};
    chi["columns"] = labels_json(columns);
    chi["observed"] = observed;
    stats["chi_square"] = chi;
  }
  r.experiment["type"] = "stats";
  r.experiment["top_k"] = o.top_k;
  r.payload = stats;
}

void run_kappa(const Options& o, Report& r) {
  r.payload_key = "stats";
  if (o.corpus_b.empty()) throw Error(ErrorCode::kInvalidArgument, "--corpus-b is required");
  const Corpus a = load_corpus(o.corpus);
  const Corpus b = load_corpus(o.corpus_b);
  r.manifest.inputs.push_back({"corpus", o.corpus});
  r.manifest.inputs.push_back({"corpus_b", o.corpus_b});

  std::map<std::string, AspectLabel> by_id;
  for (const auto& u : b.utterances) by_id[u.id] = u.label;
  if (by_id.size() != a.size()) {
    throw Error(ErrorCode::kIdSetMismatch, "corpora have different id sets");
  }
  std::vector<AspectLabel> labels_a, labels_b;
  for (const auto& u : a.utterances) {
    auto it = by_id.find(u.id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kIdSetMismatch, "id '" + u.id + "' missing from second corpus");
    }
    labels_a.push_back(u.label);
    labels_b.push_back(it->second);
  }
  Json stats = to_json(cohen_kappa(labels_a, labels_b));
  stats["items"] = labels_a.size();
  r.experiment["type"] = "kappa";
  r.payload = stats;
}

std::vector<std::vector<std::uint64_t>> parse_table(const std::string& text) {
  std::vector<std::vector<std::uint64_t>> rows;
  std::stringstream rows_in(text);
  std::string row;
  while (std::getline(rows_in, row, ';')) {
    std::vector<std::uint64_t> cells;
    std::stringstream cells_in(row);
    std::string cell;
    while (std::getline(cells_in, cell, ',')) {
      try {
        std::size_t used = 0;
        const long long v = std::stoll(cell, &used);
        if (v < 0 || cell.find_first_not_of(' ', used) != std::string::npos) throw 0;
        cells.push_back(static_cast<std::uint64_t>(v));
      } catch (...) {
        throw Error(ErrorCode::kInvalidArgument, "bad count '" + cell + "' in --table");
      }
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

void run_chisq(const Options& o, Report& r) {
  r.payload_key = "stats";
  std::vector<std::vector<std::uint64_t>> observed;
  if (!o.table.empty()) {
    observed = parse_table(o.table);
  } else if (!o.corpus.empty() && !o.corpus_b.empty()) {
    for (const std::string& path : {o.corpus, o.corpus_b}) {
      std::vector<std::uint64_t> row;
      for (const auto& [label, n] : aspect_counts(load_corpus(path))) row.push_back(n);
      observed.push_back(std::move(row));
    }
    r.manifest.inputs.push_back({"corpus", o.corpus});
    r.manifest.inputs.push_back({"corpus_b", o.corpus_b});
  } else {
    throw Error(ErrorCode::kInvalidArgument, "pass --table or both --corpus and --corpus-b");
  }
  Json chi = to_json(chi_square_homogeneity(observed));
  chi["observed"] = observed;
  r.experiment["type"] = "chisq";
  r.payload = Json{{"chi_square", chi}};
}

void run_crossval(const Options& o, Report& r) {
  r.payload_key = "metrics";
  const TrainConfig config = train_config(o);
  r.manifest.train_config = config;
  r.experiment["type"] = "crossval";
  r.experiment["language"] = o.language.empty() ? Json("all") : Json(o.language);
  const Corpus corpus = prepare_corpus(o, true, r);
  const auto instances = embed_corpus(corpus, o, r);
  const CrossValResult cv = cross_validate(instances, o.k, o.seed, config, o.threads);
  r.experiment["k"] = o.k;
  r.experiment["instances"] = instances.size();
  r.experiment["classes"] = labels_json(cv.classes);
  r.experiment["models_trained"] = cv.models_trained;
  Json fold_sizes = Json::array();
  for (const auto& fold : cv.plan.folds()) fold_sizes.push_back(fold.size());
  r.experiment["fold_sizes"] = fold_sizes;
  r.warnings.insert(r.warnings.end(), cv.warnings.begin(), cv.warnings.end());
  r.payload = to_json(cv.metrics);
}

void run_baseline(const Options& o, Report& r) {
  r.payload_key = "metrics";
  r.experiment["type"] = "baseline";
  r.experiment["language"] = o.language.empty() ? Json("all") : Json(o.language);
  const Corpus corpus = prepare_corpus(o, true, r);
  std::vector<AspectLabel> labels;
  for (const auto& u : corpus.utterances) labels.push_back(u.label);
  const CrossValResult cv = cross_validate_baseline(labels, o.k, o.seed);
  r.experiment["k"] = o.k;
  r.experiment["instances"] = labels.size();
  r.experiment["classes"] = labels_json(cv.classes);
  r.warnings.insert(r.warnings.end(), cv.warnings.begin(), cv.warnings.end());
  r.payload = to_json(cv.metrics);
}

void run_zeroshot(const Options& o, Report& r) {
  r.payload_key = "metrics";
  if (o.language.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--language (the target) is required");
  }
  const TrainConfig config = train_config(o);
  r.manifest.train_config = config;
  r.experiment["type"] = "zeroshot";
  r.experiment["target"] = o.language;
  const Corpus corpus = prepare_corpus(o, false, r);
  const auto instances = embed_corpus(corpus, o, r);
  const ZeroShotResult zs = zero_shot_eval(group_by_language(instances), o.language, config);
  r.experiment["train_languages"] = zs.train_languages;
  r.experiment["train_size"] = zs.train_size;
  r.experiment["test_size"] = zs.test_size;
  r.experiment["classes"] = labels_json(zs.classes);
  r.experiment["trace"] = to_json(zs.trace);
  r.warnings.insert(r.warnings.end(), zs.warnings.begin(), zs.warnings.end());
  if (!o.model_out.empty()) save_model(o.model_out, zs.model, config);
  r.payload = to_json(zs.metrics);
}

void run_attribution(const Options& o, Report& r) {
  r.payload_key = "attribution";
  const TrainConfig config = train_config(o);
  const Metric metric = parse_metric(o.metric);
  r.manifest.train_config = config;
  r.experiment["type"] = "attribution";
  r.experiment["metric"] = metric_name(metric);
  r.experiment["include_empty"] = o.include_empty;
  const Corpus corpus = prepare_corpus(o, false, r);
  const auto instances = embed_corpus(corpus, o, r);
  const LanguageSets sets = group_by_language(instances);

  std::vector<std::string> targets;
  if (o.language.empty()) {
    for (const auto& [lang, v] : sets) targets.push_back(lang);
  } else {
    targets.push_back(o.language);
  }
  r.experiment["targets"] = targets;
  Json reports = Json::array();
  for (const std::string& target : targets) {
    const AttributionReport a =
        language_attribution(sets, target, config, o.include_empty, metric, o.threads);
    reports.push_back(to_json(a, metric));
    for (const auto& w : a.warnings) r.warnings.push_back(target + ": " + w);
  }
  r.payload = reports;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  body(out);
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

void run_gen_synthetic(const Options& o, Report& r) {
  r.payload_key = "stats";
  if (o.out_corpus.empty() || o.out_vectors.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--out-corpus and --out-vectors are required");
  }
  SyntheticSpec spec;
  spec.languages = o.languages;
  spec.per_language = o.count;
  spec.dim = o.dim;
  spec.sigma = o.sigma;
  spec.seed = o.seed;
  if (!o.domain.empty()) spec.domain = *parse_domain(o.domain);
  const SyntheticData data = generate_synthetic(spec);

  write_file(o.out_corpus, [&](std::ostream& out) { write_corpus(out, data.corpus); });
  write_file(o.out_vectors,
             [&](std::ostream& out) { write_sentence_vector_table(out, data.sentence_vectors); });
  if (!o.out_word_vectors.empty()) {
    write_file(o.out_word_vectors,
               [&](std::ostream& out) { write_vector_table(out, data.word_vectors); });
  }
  r.manifest.inputs.push_back({"out_corpus", o.out_corpus});
  r.manifest.inputs.push_back({"out_vectors", o.out_vectors});
  if (!o.out_word_vectors.empty()) {
    r.manifest.inputs.push_back({"out_word_vectors", o.out_word_vectors});
  }

  r.experiment["type"] = "gen-synthetic";
  r.experiment["languages"] = spec.languages;
  r.experiment["per_language"] = spec.per_language;
  r.experiment["dim"] = spec.dim;
  r.experiment["sigma"] = spec.sigma;
  r.experiment["domain"] = to_string(spec.domain);
  Json counts = Json::object();
  for (const auto& [label, n] : aspect_counts(data.corpus)) {
    counts[std::string(to_string(label))] = n;
  }
  r.payload = Json{{"instances", data.corpus.size()}, {"label_counts", counts}};
}

// ---------------------------------------------------------------------------

void error_line(std::ostream& err, std::string_view code, const std::string& message) {
  err << Json{{"error", code}, {"message", message}}.dump() << '\n';
}

// Splices `key = value` lines from --config into the argument list for every
// option not already given on the command line.
std::vector<std::string> apply_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (config_path.empty()) return out;

  static const std::set<std::string> kFlags = {"normalize", "include-empty", "pretty",
                                               "pool-domains"};
  auto given = [&](const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(out.begin(), out.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  std::vector<std::string> extra;
  for (const auto& [key, value] : read_config_file(config_path)) {
    if (given(key)) continue;
    if (kFlags.contains(key)) {
      if (value == "true" || value == "1" || value == "yes") extra.push_back("--" + key);
    } else {
      extra.push_back("--" + key);
      extra.push_back(value);
    }
  }
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open config " + path);
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument,
                  "config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return entries;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Options o;
  CLI::App app{"Lexical aspect classification experiments", kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Write the report to this file instead of stdout");
    sub->add_flag("--pretty", o.pretty, "Render a human-readable table instead of JSON");
  };
  auto add_selection = [&](CLI::App* sub) {
    sub->add_option("--corpus", o.corpus, "Annotated corpus (JSONL)")->required();
    sub->add_option("--language", o.language, "Language code");
    sub->add_option("--domain", o.domain, "captions or wikipedia")
        ->check(CLI::IsMember({"captions", "wikipedia"}));
    sub->add_flag("--pool-domains", o.pool_domains, "Allow mixing captions and wikipedia");
    sub->add_option("--drop-policy", o.drop_policy, "default or none")
        ->check(CLI::IsMember({"default", "none"}));
    sub->add_option("--seed", o.seed, "Seed for folds");
  };
  auto add_vectors = [&](CLI::App* sub) {
    sub->add_option("--vectors", o.vectors,
                    "Vector file, or lang=path to give one language its own file")
        ->required();
    sub->add_option("--mode", o.mode, "mean (word vectors) or lookup (sentence vectors)")
        ->check(CLI::IsMember({"mean", "lookup"}));
    sub->add_flag("--normalize", o.normalize, "L2-normalize utterance vectors");
  };
  auto add_training = [&](CLI::App* sub) {
    sub->add_option("--l2", o.l2, "L2 penalty on weights");
    sub->add_option("--max-iters", o.max_iters, "Gradient descent iteration cap");
    sub->add_option("--grad-tol", o.grad_tol, "Stop when the gradient inf-norm is below this");
  };

  CLI::App* stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("--corpus", o.corpus, "Annotated corpus (JSONL)")->required();
  stats->add_option("--corpus-b", o.corpus_b, "Second corpus; adds a chi-square test");
  stats->add_option("--top-k", o.top_k, "Comma-separated K values")->delimiter(',');
  add_output(stats);

  CLI::App* kappa = app.add_subcommand("kappa", "Cohen's kappa between two annotations");
  kappa->add_option("--corpus", o.corpus, "First annotation")->required();
  kappa->add_option("--corpus-b", o.corpus_b, "Second annotation")->required();
  add_output(kappa);

  CLI::App* chisq = app.add_subcommand("chisq", "Chi-square homogeneity test");
  chisq->add_option("--table", o.table, "Counts, rows separated by ';', cells by ','");
  chisq->add_option("--corpus", o.corpus, "First corpus (label counts)");
  chisq->add_option("--corpus-b", o.corpus_b, "Second corpus (label counts)");
  add_output(chisq);

  CLI::App* crossval = app.add_subcommand("crossval", "Stratified k-fold cross-validation");
  add_selection(crossval);
  add_vectors(crossval);
  add_training(crossval);
  crossval->add_option("--k", o.k, "Number of folds");
  crossval->add_option("--threads", o.threads, "Worker threads");
  add_output(crossval);

  CLI::App* baseline = app.add_subcommand("baseline", "Majority-class baseline");
  add_selection(baseline);
  baseline->add_option("--k", o.k, "Number of folds");
  add_output(baseline);

  CLI::App* zeroshot = app.add_subcommand("zeroshot", "Leave-one-language-out transfer");
  add_selection(zeroshot);
  add_vectors(zeroshot);
  add_training(zeroshot);
  zeroshot->add_option("--model-out", o.model_out, "Save the trained model as JSON");
  add_output(zeroshot);

  CLI::App* attribution = app.add_subcommand("attribution", "Per-language coalition impact");
  add_selection(attribution);
  add_vectors(attribution);
  add_training(attribution);
  attribution->add_flag("--include-empty", o.include_empty,
                        "Include the empty coalition with v({}) = 1/|classes|");
  attribution->add_option("--metric", o.metric, "accuracy or micro-f1")
      ->check(CLI::IsMember({"accuracy", "micro-f1"}));
  attribution->add_option("--threads", o.threads, "Worker threads");
  add_output(attribution);

  CLI::App* gen = app.add_subcommand("gen-synthetic", "Write a synthetic shared-space corpus");
  gen->add_option("--languages", o.languages, "Comma-separated language codes")->delimiter(',');
  gen->add_option("--count", o.count, "Utterances per language");
  gen->add_option("--dim", o.dim, "Vector dimension");
  gen->add_option("--sigma", o.sigma, "Noise standard deviation");
  gen->add_option("--seed", o.seed, "Seed");
  gen->add_option("--domain", o.domain, "captions or wikipedia")
      ->check(CLI::IsMember({"captions", "wikipedia"}));
  gen->add_option("--out-corpus", o.out_corpus, "Corpus output path")->required();
  gen->add_option("--out-vectors", o.out_vectors, "Sentence-vector output path")->required();
  gen->add_option("--out-word-vectors", o.out_word_vectors, "Word-vector output path");
  add_output(gen);

  std::vector<std::string> args;
  try {
    args = apply_config(raw_args);
  } catch (const Error& e) {
    error_line(err, error_code_name(e.code()), e.what());
    return 1;
  }
  std::vector<std::string> argv_storage = {kToolName};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << kToolVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    error_line(err, "UsageError", e.what());
    return 2;
  }

  Report report;
  CLI::App* sub = app.get_subcommands().front();
  report.manifest.subcommand = sub->get_name();
  report.manifest.seed = o.seed;
  try {
    if (o.threads < 1) throw Error(ErrorCode::kInvalidArgument, "--threads must be >= 1");
    if (sub == stats) run_stats(o, report);
    else if (sub == kappa) run_kappa(o, report);
    else if (sub == chisq) run_chisq(o, report);
    else if (sub == crossval) run_crossval(o, report);
    else if (sub == baseline) run_baseline(o, report);
    else if (sub == zeroshot) run_zeroshot(o, report);
    else if (sub == attribution) run_attribution(o, report);
    else if (sub == gen) run_gen_synthetic(o, report);

    report.manifest.duration_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    Json doc;
    doc["manifest"] = to_json(report.manifest);
    doc["experiment"] = report.experiment;
    doc[report.payload_key] = report.payload;
    doc["warnings"] = report.warnings;

    const std::string text = o.pretty ? render_pretty(doc) : doc.dump(2) + "\n";
    if (o.out.empty()) {
      out << text;
    } else {
      write_file(o.out, [&](std::ostream& f) { f << text; });
    }
  } catch (const Error& e) {
    error_line(err, error_code_name(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    error_line(err, "InternalError", e.what());
    return 1;
  }
  return 0;
}

}  // namespace lexaspect::cli
