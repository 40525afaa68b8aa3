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

// Multinomial logistic regression with an L2 penalty on the weights.
//
// The objective for N instances (x_i, y_i) is
//
//   L(W, b) = 1/N * sum_i -log softmax(W x_i + b)[y_i] + lambda * ||W||_F^2
//
// and is minimized by full-batch gradient descent with Armijo backtracking,
// starting from all-zero parameters. Everything is deterministic: training
// data is put into a canonical order first and all sums run in index order.

#ifndef LEXASPECT_CLASSIFIER_HPP_
#define LEXASPECT_CLASSIFIER_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lexaspect/corpus.hpp"
#include "lexaspect/embeddings.hpp"

namespace lexaspect {

struct TrainConfig {
  double l2_lambda = 1e-4;
  int max_iters = 1000;
  double grad_tol = 1e-6;  // on the infinity norm of the gradient
  // Reserved; full-batch descent draws no random numbers.
  std::uint64_t seed = 0;

  // Throws kInvalidArgument when a field is out of range. max_iters == 0 is
  // accepted and yields the zero model.
  void validate() const;
};

struct SoftmaxModel {
  std::vector<AspectLabel> classes;  // canonical order
  std::size_t dim = 0;
  std::vector<double> weights;  // classes.size() x dim, row-major
  std::vector<double> bias;

  static SoftmaxModel zeros(std::vector<AspectLabel> classes, std::size_t dim);

  std::size_t num_classes() const { return classes.size(); }
  double weight(std::size_t c, std::size_t d) const { return weights[c * dim + d]; }
  // Index of label in classes, or -1.
  int class_index(AspectLabel label) const;
};

struct ModelGradient {
  std::vector<double> weights;
  std::vector<double> bias;
};

struct LossAndGradient {
  double loss = 0.0;
  ModelGradient grad;
};

// Throws kEmptyData, kDimensionMismatch or kUnknownClassLabel.
LossAndGradient loss_and_gradient(const SoftmaxModel& model,
                                  std::span<const EmbeddedInstance> data,
                                  double l2_lambda);

struct TrainTrace {
  int iterations_run = 0;
  double final_loss = 0.0;
  double final_grad_norm = 0.0;
  bool converged = false;
  // Armijo backtracking could not find a decrease; training stopped early.
  bool line_search_failed = false;
  // Only one label occurred in the data; the model predicts it with
  // probability 1.
  bool single_class = false;
  // Loss at the start and after every accepted step.
  std::vector<double> loss_history;
};

struct TrainResult {
  SoftmaxModel model;
  TrainTrace trace;
};

// classes must hold at least two labels in canonical order and include every
// label in data. Throws kEmptyData, kInvalidArgument, kUnknownClassLabel or
// kDimensionMismatch.
TrainResult train(std::span<const EmbeddedInstance> data,
                  const std::vector<AspectLabel>& classes,
                  const TrainConfig& config);

// Labels present in data, in canonical order.
std::vector<AspectLabel> classes_present(std::span<const EmbeddedInstance> data);

std::vector<double> predict_proba(const SoftmaxModel& model, const DenseVector& x);
AspectLabel predict(const SoftmaxModel& model, const DenseVector& x);

// JSON with classes, dim, weights (one array per class), bias and the
// training configuration.
std::string serialize_model(const SoftmaxModel& model, const TrainConfig& config);

struct StoredModel {
  SoftmaxModel model;
  TrainConfig config;
};

// Throws kBadModel on malformed input.
StoredModel deserialize_model(const std::string& text);
void save_model(const std::filesystem::path& path, const SoftmaxModel& model,
                const TrainConfig& config);
StoredModel load_model(const std::filesystem::path& path);

}  // namespace lexaspect

#endif  // LEXASPECT_CLASSIFIER_HPP_
