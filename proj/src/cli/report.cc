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

#include "report.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "lexaspect/cli.hpp"
#include "lexaspect/error.hpp"
#include "lexaspect/rng.hpp"

namespace lexaspect::cli {

namespace {

std::string fixed(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

void render_metrics(std::ostringstream& os, const Json& m) {
  os << pad("class", 10) << pad("tp", 8) << pad("fp", 8) << pad("fn", 8)
     << pad("support", 9) << pad("P", 8) << pad("R", 8) << "F1\n";
  for (const auto& [label, c] : m["per_class"].items()) {
    os << pad(label, 10) << pad(std::to_string(c["tp"].get<std::uint64_t>()), 8)
       << pad(std::to_string(c["fp"].get<std::uint64_t>()), 8)
       << pad(std::to_string(c["fn"].get<std::uint64_t>()), 8)
       << pad(std::to_string(c["support"].get<std::uint64_t>()), 9)
       << pad(fixed(c["precision"].get<double>()), 8)
       << pad(fixed(c["recall"].get<double>()), 8) << fixed(c["f1"].get<double>())
       << (c["zero_division"].get<bool>() ? "  (0/0)" : "") << '\n';
  }
  os << "micro-F1 " << fixed(m["micro_f1"].get<double>()) << "  macro-F1 "
     << fixed(m["macro_f1"].get<double>()) << "  accuracy "
     << fixed(m["accuracy"].get<double>()) << "  evaluated "
     << m["evaluated"].get<std::uint64_t>() << '\n';
}

void render_attribution(std::ostringstream& os, const Json& a) {
  os << "target " << a["target"].get<std::string>() << " (" << a["metric"].get<std::string>()
     << ", " << a["evaluations"].get<int>() << " coalitions)\n";
  for (const auto& [lang, v] : a["impacts"].items()) {
    os << "  impact " << pad(lang, 4) << (v.get<double>() >= 0 ? " " : "")
       << fixed(v.get<double>()) << '\n';
  }
}

}  // namespace

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof(byte), "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

Json labels_json(const std::vector<AspectLabel>& labels) {
  Json arr = Json::array();
  for (AspectLabel l : labels) arr.push_back(to_string(l));
  return arr;
}

std::string_view metric_name(Metric metric) {
  return metric == Metric::kAccuracy ? "accuracy" : "micro-f1";
}

Json to_json(const TrainConfig& config) {
  Json j;
  j["l2_lambda"] = config.l2_lambda;
  j["max_iters"] = config.max_iters;
  j["grad_tol"] = config.grad_tol;
  j["seed"] = config.seed;
  return j;
}

Json to_json(const RunManifest& manifest) {
  Json j;
  j["tool"] = kToolName;
  j["tool_version"] = kToolVersion;
  j["subcommand"] = manifest.subcommand;
  Json inputs = Json::array();
  for (const InputFile& f : manifest.inputs) {
    inputs.push_back({{"role", f.role}, {"path", f.path}, {"sha256", sha256_file(f.path)}});
  }
  j["inputs"] = inputs;
  j["seed"] = manifest.seed;
  j["rng"] = kRngAlgorithm;
  j["train_config"] = manifest.train_config ? to_json(*manifest.train_config) : Json(nullptr);
  if (manifest.drop_policy) {
    Json policy = Json::object();
    for (const auto& [domain, label] : *manifest.drop_policy) {
      policy[std::string(to_string(domain))] = to_string(label);
    }
    j["drop_policy"] = policy;
  } else {
    j["drop_policy"] = nullptr;
  }
  j["duration_ms"] = manifest.duration_ms;
  return j;
}

Json to_json(const MetricsReport& metrics) {
  Json j;
  std::vector<AspectLabel> classes;
  for (const auto& [label, c] : metrics.counts.per_class) classes.push_back(label);
  j["classes"] = labels_json(classes);
  Json per_class = Json::object();
  for (const auto& [label, c] : metrics.counts.per_class) {
    const ClassMetrics& m = metrics.per_class.at(label);
    per_class[std::string(to_string(label))] = {
        {"tp", c.tp},           {"fp", c.fp},         {"fn", c.fn},
        {"support", c.support}, {"precision", m.precision}, {"recall", m.recall},
        {"f1", m.f1},           {"zero_division", m.zero_division}};
  }
  j["per_class"] = per_class;
  j["micro_precision"] = metrics.micro_precision;
  j["micro_recall"] = metrics.micro_recall;
  j["micro_f1"] = metrics.micro_f1;
  j["macro_f1"] = metrics.macro_f1;
  j["accuracy"] = metrics.accuracy;
  j["evaluated"] = metrics.counts.evaluated;
  return j;
}

Json to_json(const AttributionReport& report, Metric metric) {
  Json j;
  j["target"] = report.target;
  j["contributors"] = report.contributors;
  j["metric"] = metric_name(metric);
  j["include_empty"] = report.include_empty;
  j["empty_value"] = report.empty_value ? Json(*report.empty_value) : Json(nullptr);
  j["evaluations"] = report.evaluations;
  Json impacts = Json::object();
  for (const auto& [lang, v] : report.impacts) impacts[lang] = v;
  j["impacts"] = impacts;
  Json values = Json::object();
  for (const auto& [key, v] : report.coalition_values) values[key] = v;
  j["coalition_values"] = values;
  return j;
}

Json to_json(const ChiSquareResult& result) {
  return {{"statistic", result.statistic}, {"df", result.df}, {"p_value", result.p_value}};
}

Json to_json(const KappaResult& result) {
  return {{"kappa", result.kappa},
          {"observed_agreement", result.observed_agreement},
          {"expected_agreement", result.expected_agreement}};
}

Json to_json(const TrainTrace& trace) {
  return {{"iterations_run", trace.iterations_run},
          {"final_loss", trace.final_loss},
          {"final_grad_norm", trace.final_grad_norm},
          {"converged", trace.converged},
          {"line_search_failed", trace.line_search_failed},
          {"single_class", trace.single_class}};
}

std::string render_pretty(const Json& report) {
  std::ostringstream os;
  const Json& manifest = report["manifest"];
  os << manifest["tool"].get<std::string>() << ' ' << manifest["subcommand"].get<std::string>()
     << "  seed " << manifest["seed"].get<std::uint64_t>() << '\n';
  const Json& exp = report["experiment"];
  for (const auto& [key, value] : exp.items()) {
    if (value.is_primitive()) os << "  " << key << ": " << value.dump() << '\n';
  }
  os << '\n';

  if (report.contains("metrics")) render_metrics(os, report["metrics"]);
  if (report.contains("attribution")) {
    for (const Json& a : report["attribution"]) render_attribution(os, a);
  }
  if (report.contains("stats")) {
    const Json& s = report["stats"];
    if (s.contains("distribution")) {
      os << pad("group", 16) << pad("n", 8) << pad("state", 8) << pad("telic", 8)
         << pad("atelic", 8) << "mean_len\n";
      for (const auto& [group, d] : s["distribution"].items()) {
        os << pad(group, 16) << pad(std::to_string(s["sizes"][group].get<std::uint64_t>()), 8)
           << pad(fixed(d["state"].get<double>(), 3), 8)
           << pad(fixed(d["telic"].get<double>(), 3), 8)
           << pad(fixed(d["atelic"].get<double>(), 3), 8)
           << fixed(s["mean_length"][group].get<double>(), 2) << '\n';
      }
    }
    if (s.contains("top_k")) {
      for (const auto& [group, cov] : s["top_k"].items()) {
        os << "top-k " << pad(group, 16);
        for (const auto& [k, v] : cov.items()) os << "  top" << k << "=" << fixed(v.get<double>(), 3);
        os << '\n';
      }
    }
    if (s.contains("chi_square")) {
      const Json& c = s["chi_square"];
      os << "chi-square " << fixed(c["statistic"].get<double>()) << "  df "
         << c["df"].get<int>() << "  p " << c["p_value"].get<double>() << '\n';
    }
    if (s.contains("kappa")) {
      os << "kappa " << fixed(s["kappa"].get<double>()) << "  po "
         << fixed(s["observed_agreement"].get<double>()) << "  pe "
         << fixed(s["expected_agreement"].get<double>()) << '\n';
    }
  }
  for (const Json& w : report["warnings"]) os << "warning: " << w.get<std::string>() << '\n';
  return os.str();
}

}  // namespace lexaspect::cli
