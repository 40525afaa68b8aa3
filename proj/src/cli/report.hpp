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

// JSON rendering of results and the run manifest.

#ifndef LEXASPECT_CLI_REPORT_HPP_
#define LEXASPECT_CLI_REPORT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lexaspect/classifier.hpp"
#include "lexaspect/corpus.hpp"
#include "lexaspect/evaluation.hpp"
#include "lexaspect/stats.hpp"

namespace lexaspect::cli {

using Json = nlohmann::ordered_json;

struct InputFile {
  std::string role;
  std::string path;
};

struct RunManifest {
  std::string subcommand;
  std::vector<InputFile> inputs;
  std::uint64_t seed = 0;
  std::optional<TrainConfig> train_config;
  std::optional<ClassDropPolicy> drop_policy;  // nullopt: no class drop applies
  double duration_ms = 0.0;
};

// Hex SHA-256 of a file's bytes. Throws kIoError.
std::string sha256_file(const std::string& path);

Json to_json(const RunManifest& manifest);
Json to_json(const TrainConfig& config);
Json to_json(const MetricsReport& metrics);
Json to_json(const AttributionReport& report, Metric metric);
Json to_json(const ChiSquareResult& result);
Json to_json(const KappaResult& result);
Json to_json(const TrainTrace& trace);
Json labels_json(const std::vector<AspectLabel>& labels);

std::string_view metric_name(Metric metric);

// Human-readable rendering of a report for --pretty.
std::string render_pretty(const Json& report);

}  // namespace lexaspect::cli

#endif  // LEXASPECT_CLI_REPORT_HPP_
