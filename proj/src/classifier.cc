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

#include "lexaspect/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "lexaspect/error.hpp"

namespace lexaspect {

namespace {

constexpr double kArmijoC = 1e-4;
constexpr double kArmijoShrink = 0.5;
constexpr double kInitialStep = 1.0;
constexpr int kMaxBacktracks = 60;

// Logit assigned to absent classes of a single-class model; exp() of it
// minus zero is exactly 0 in double precision.
constexpr double kAbsentClassLogit = -1000.0;

// Training data packed into one row-major matrix with integer targets.
struct Design {
  std::size_t n = 0;
  std::size_t dim = 0;
  std::size_t num_classes = 0;
  std::vector<double> x;
  std::vector<int> y;
};

Design pack(std::span<const EmbeddedInstance> data,
            const std::vector<AspectLabel>& classes, std::size_t dim,
            std::span<const std::size_t> order) {
  Design d;
  d.n = order.size();
  d.dim = dim;
  d.num_classes = classes.size();
  d.x.reserve(d.n * dim);
  d.y.reserve(d.n);
  for (std::size_t idx : order) {
    const EmbeddedInstance& inst = data[idx];
    if (inst.vector.dim() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "instance '" + inst.id + "' has dim " +
                      std::to_string(inst.vector.dim()) + ", expected " +
                      std::to_string(dim));
    }
    auto it = std::find(classes.begin(), classes.end(), inst.label);
    if (it == classes.end()) {
      throw Error(ErrorCode::kUnknownClassLabel,
                  "instance '" + inst.id + "' has label '" +
                      std::string(to_string(inst.label)) + "' outside the class set");
    }
    d.x.insert(d.x.end(), inst.vector.values.begin(), inst.vector.values.end());
    d.y.push_back(static_cast<int>(it - classes.begin()));
  }
  return d;
}

// Parameters are [W row-major | b]. Returns the loss and, when grad is
// non-null, writes the gradient in the same layout.
double evaluate(const Design& d, double l2_lambda, const std::vector<double>& theta,
                std::vector<double>* grad) {
  const std::size_t C = d.num_classes;
  const std::size_t D = d.dim;
  const double* W = theta.data();
  const double* b = theta.data() + C * D;
  if (grad) grad->assign(theta.size(), 0.0);

  std::vector<double> z(C);
  double data_loss = 0.0;
  for (std::size_t i = 0; i < d.n; ++i) {
    const double* xi = d.x.data() + i * D;
    double zmax = -INFINITY;
    for (std::size_t c = 0; c < C; ++c) {
      double s = b[c];
      const double* wc = W + c * D;
      for (std::size_t k = 0; k < D; ++k) s += wc[k] * xi[k];
      z[c] = s;
      zmax = std::max(zmax, s);
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < C; ++c) sum += std::exp(z[c] - zmax);
    const double lse = zmax + std::log(sum);
    data_loss += lse - z[d.y[i]];
    if (!grad) continue;
    double* gW = grad->data();
    double* gb = grad->data() + C * D;
    for (std::size_t c = 0; c < C; ++c) {
      double r = std::exp(z[c] - lse);
      if (static_cast<int>(c) == d.y[i]) r -= 1.0;
      gb[c] += r;
      double* gwc = gW + c * D;
      for (std::size_t k = 0; k < D; ++k) gwc[k] += r * xi[k];
    }
  }

  const double inv_n = 1.0 / static_cast<double>(d.n);
  double penalty = 0.0;
  for (std::size_t j = 0; j < C * D; ++j) penalty += W[j] * W[j];
  if (grad) {
    for (std::size_t j = 0; j < C * D; ++j) {
      (*grad)[j] = (*grad)[j] * inv_n + 2.0 * l2_lambda * W[j];
    }
    for (std::size_t j = C * D; j < theta.size(); ++j) (*grad)[j] *= inv_n;
  }
  return data_loss * inv_n + l2_lambda * penalty;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

std::vector<double> logits(const SoftmaxModel& model, const DenseVector& x) {
  if (x.dim() != model.dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "vector dim " + std::to_string(x.dim()) + " != model dim " +
                    std::to_string(model.dim));
  }
  std::vector<double> z(model.num_classes());
  for (std::size_t c = 0; c < z.size(); ++c) {
    double s = model.bias[c];
    for (std::size_t k = 0; k < model.dim; ++k) s += model.weight(c, k) * x.values[k];
    z[c] = s;
  }
  return z;
}

// Index permutation that sorts instances by content, so training does not
// depend on the order the caller supplied them in.
std::vector<std::size_t> canonical_order(std::span<const EmbeddedInstance> data) {
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const EmbeddedInstance& x = data[a];
    const EmbeddedInstance& y = data[b];
    if (x.id != y.id) return x.id < y.id;
    if (x.language != y.language) return x.language < y.language;
    if (x.label != y.label) return x.label < y.label;
    return x.vector.values < y.vector.values;
  });
  return order;
}

std::vector<double> pack_params(const SoftmaxModel& m) {
  std::vector<double> theta = m.weights;
  theta.insert(theta.end(), m.bias.begin(), m.bias.end());
  return theta;
}

void unpack_params(const std::vector<double>& theta, SoftmaxModel& m) {
  const std::size_t wsize = m.num_classes() * m.dim;
  std::copy(theta.begin(), theta.begin() + wsize, m.weights.begin());
  std::copy(theta.begin() + wsize, theta.end(), m.bias.begin());
}

void check_classes(const std::vector<AspectLabel>& classes) {
  if (classes.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "a model needs at least two classes");
  }
  for (std::size_t i = 1; i < classes.size(); ++i) {
    if (!(classes[i - 1] < classes[i])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "classes must be distinct and in canonical order");
    }
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (!(l2_lambda >= 0.0) || !std::isfinite(l2_lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "l2_lambda must be finite and >= 0");
  }
  if (max_iters < 0) throw Error(ErrorCode::kInvalidArgument, "max_iters must be >= 0");
  if (!(grad_tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "grad_tol must be > 0");
}

SoftmaxModel SoftmaxModel::zeros(std::vector<AspectLabel> classes, std::size_t dim) {
  SoftmaxModel m;
  m.dim = dim;
  m.weights.assign(classes.size() * dim, 0.0);
  m.bias.assign(classes.size(), 0.0);
  m.classes = std::move(classes);
  return m;
}

int SoftmaxModel::class_index(AspectLabel label) const {
  auto it = std::find(classes.begin(), classes.end(), label);
  return it == classes.end() ? -1 : static_cast<int>(it - classes.begin());
}

LossAndGradient loss_and_gradient(const SoftmaxModel& model,
                                  std::span<const EmbeddedInstance> data,
                                  double l2_lambda) {
  if (data.empty()) throw Error(ErrorCode::kEmptyData, "no instances");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  const Design d = pack(data, model.classes, model.dim, order);
  std::vector<double> grad;
  LossAndGradient out;
  out.loss = evaluate(d, l2_lambda, pack_params(model), &grad);
  const std::size_t wsize = model.num_classes() * model.dim;
  out.grad.weights.assign(grad.begin(), grad.begin() + wsize);
  out.grad.bias.assign(grad.begin() + wsize, grad.end());
  return out;
}

std::vector<AspectLabel> classes_present(std::span<const EmbeddedInstance> data) {
  std::vector<AspectLabel> out;
  for (AspectLabel label : kAllLabels) {
    for (const auto& inst : data) {
      if (inst.label == label) {
        out.push_back(label);
        break;
      }
    }
  }
  return out;
}

TrainResult train(std::span<const EmbeddedInstance> data,
                  const std::vector<AspectLabel>& classes,
                  const TrainConfig& config) {
  config.validate();
  if (data.empty()) throw Error(ErrorCode::kEmptyData, "no training instances");
  check_classes(classes);
  const std::size_t dim = data.front().vector.dim();
  const std::vector<std::size_t> order = canonical_order(data);
  const Design d = pack(data, classes, dim, order);

  TrainResult result;
  result.model = SoftmaxModel::zeros(classes, dim);
  TrainTrace& trace = result.trace;

  const std::vector<AspectLabel> present = classes_present(data);
  if (present.size() == 1) {
    trace.single_class = true;
    const int keep = result.model.class_index(present.front());
    for (std::size_t c = 0; c < classes.size(); ++c) {
      result.model.bias[c] = static_cast<int>(c) == keep ? 0.0 : kAbsentClassLogit;
    }
    std::vector<double> grad;
    trace.final_loss = evaluate(d, config.l2_lambda, pack_params(result.model), &grad);
    trace.final_grad_norm = inf_norm(grad);
    trace.converged = trace.final_grad_norm <= config.grad_tol;
    trace.loss_history.push_back(trace.final_loss);
    return result;
  }

  std::vector<double> theta = pack_params(result.model);
  std::vector<double> grad;
  double loss = evaluate(d, config.l2_lambda, theta, &grad);
  double gnorm = inf_norm(grad);
  trace.loss_history.push_back(loss);

  std::vector<double> trial(theta.size());
  std::vector<double> trial_grad;
  while (trace.iterations_run < config.max_iters && gnorm > config.grad_tol) {
    double grad_sq = 0.0;
    for (double g : grad) grad_sq += g * g;
    double step = kInitialStep;
    bool accepted = false;
    for (int bt = 0; bt <= kMaxBacktracks; ++bt) {
      for (std::size_t j = 0; j < theta.size(); ++j) trial[j] = theta[j] - step * grad[j];
      const double trial_loss = evaluate(d, config.l2_lambda, trial, &trial_grad);
      if (trial_loss <= loss - kArmijoC * step * grad_sq) {
        theta.swap(trial);
        grad.swap(trial_grad);
        loss = trial_loss;
        accepted = true;
        break;
      }
      step *= kArmijoShrink;
    }
    if (!accepted) {
      trace.line_search_failed = true;
      break;
    }
    gnorm = inf_norm(grad);
    ++trace.iterations_run;
    trace.loss_history.push_back(loss);
  }

  unpack_params(theta, result.model);
  trace.final_loss = loss;
  trace.final_grad_norm = gnorm;
  trace.converged = gnorm <= config.grad_tol;
  return result;
}

std::vector<double> predict_proba(const SoftmaxModel& model, const DenseVector& x) {
  std::vector<double> z = logits(model, x);
  const double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - zmax);
    sum += v;
  }
  for (double& v : z) v /= sum;
  return z;
}

AspectLabel predict(const SoftmaxModel& model, const DenseVector& x) {
  const std::vector<double> p = predict_proba(model, x);
  std::size_t best = 0;
  for (std::size_t c = 1; c < p.size(); ++c) {
    if (p[c] > p[best]) best = c;
  }
  return model.classes[best];
}

std::string serialize_model(const SoftmaxModel& model, const TrainConfig& config) {
  nlohmann::ordered_json j;
  std::vector<std::string> classes;
  for (AspectLabel c : model.classes) classes.emplace_back(to_string(c));
  j["classes"] = classes;
  j["dim"] = model.dim;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < model.num_classes(); ++c) {
    rows.push_back(std::vector<double>(model.weights.begin() + c * model.dim,
                                       model.weights.begin() + (c + 1) * model.dim));
  }
  j["weights"] = rows;
  j["bias"] = model.bias;
  j["train_config"] = {{"l2_lambda", config.l2_lambda},
                       {"max_iters", config.max_iters},
                       {"grad_tol", config.grad_tol},
                       {"seed", config.seed}};
  return j.dump(2);
}

StoredModel deserialize_model(const std::string& text) {
  StoredModel out;
  try {
    const auto j = nlohmann::json::parse(text);
    std::vector<AspectLabel> classes;
    for (const auto& c : j.at("classes")) {
      auto label = parse_label(c.get<std::string>());
      if (!label) throw Error(ErrorCode::kBadModel, "unknown class in model");
      classes.push_back(*label);
    }
    check_classes(classes);
    const auto dim = j.at("dim").get<std::size_t>();
    SoftmaxModel m = SoftmaxModel::zeros(classes, dim);
    const auto& rows = j.at("weights");
    if (rows.size() != classes.size()) throw Error(ErrorCode::kBadModel, "weight rows != classes");
    for (std::size_t c = 0; c < rows.size(); ++c) {
      auto row = rows[c].get<std::vector<double>>();
      if (row.size() != dim) throw Error(ErrorCode::kBadModel, "weight row has wrong length");
      std::copy(row.begin(), row.end(), m.weights.begin() + c * dim);
    }
    m.bias = j.at("bias").get<std::vector<double>>();
    if (m.bias.size() != classes.size()) throw Error(ErrorCode::kBadModel, "bias length != classes");
    const auto& cfg = j.at("train_config");
    out.config.l2_lambda = cfg.at("l2_lambda").get<double>();
    out.config.max_iters = cfg.at("max_iters").get<int>();
    out.config.grad_tol = cfg.at("grad_tol").get<double>();
    out.config.seed = cfg.at("seed").get<std::uint64_t>();
    out.model = std::move(m);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadModel, std::string("malformed model: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kBadModel) throw;
    throw Error(ErrorCode::kBadModel, e.what());
  }
  return out;
}

void save_model(const std::filesystem::path& path, const SoftmaxModel& model,
                const TrainConfig& config) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << serialize_model(model, config) << '\n';
}

StoredModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return deserialize_model(buf.str());
}

}  // namespace lexaspect
