// Copyright 2026 The hostload Authors.
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

#include "hostload/training.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "hostload/errors.hpp"
#include "hostload/format.hpp"

namespace hostload {

TrainConfig TrainConfig::for_task(const TaskSpec& task) {
  TrainConfig config;
  config.task = task;
  if (task.kind == TaskKind::kEsp) {
    config.input_window = 24;
    config.truncated_length = 39;
  } else {
    config.input_window = 64;
    config.truncated_length = 36;
  }
  return config;
}

void TrainConfig::validate() const {
  if (input_window == 0 || hidden_size == 0 || fc_size == 0 || batch_size == 0 ||
      max_epochs == 0 || truncated_length == 0 || early_stop_patience == 0) {
    throw UsageError("training sizes and counts must all be >= 1");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) throw UsageError("dropout rate must lie in [0, 1)");
  if (!(clip_norm > 0.0)) throw UsageError("clip norm must be positive");
  sgd.validate();
}

double anneal(const TrainState& state, const TrainConfig& config) {
  return annealed_rate(config.sgd, static_cast<int>(state.epoch));
}

Vector dropout_mask(std::size_t size, double rate, std::mt19937_64& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) throw UsageError("dropout rate must lie in [0, 1)");
  Vector mask(size, 1.0);
  if (rate == 0.0) return mask;
  const double keep_scale = 1.0 / (1.0 - rate);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double& m : mask) m = u(rng) < rate ? 0.0 : keep_scale;
  return mask;
}

void apply_dropout(std::span<double> activations, double rate, bool training,
                   std::mt19937_64& rng) {
  if (!training || rate == 0.0) return;
  const Vector mask = dropout_mask(activations.size(), rate, rng);
  for (std::size_t k = 0; k < activations.size(); ++k) activations[k] *= mask[k];
}

double evaluation_loss(const BiLstmModel& model, std::span<const WindowPair> windows) {
  if (windows.empty()) throw DataError("no windows to evaluate");
  double total = 0.0;
  for (const auto& w : windows) {
    const Vector pred = predict_standardized(model, w.history);
    double se = 0.0;
    for (std::size_t k = 0; k < pred.size(); ++k) se += (pred[k] - w.target[k]) * (pred[k] - w.target[k]);
    total += se / static_cast<double>(pred.size());
  }
  return total / static_cast<double>(windows.size());
}

BatchGradient batch_gradient(const BiLstmModel& model, std::span<const WindowPair> windows,
                             std::span<const std::size_t> indices, std::size_t truncated_length,
                             double dropout_rate, std::mt19937_64& rng) {
  if (indices.empty()) throw DataError("empty batch");
  BatchGradient out{model.zero_gradients(), 0.0};
  const double inv_batch = 1.0 / static_cast<double>(indices.size());
  const std::size_t m = model.dims.output_size;
  Vector d_pred(m);
  for (std::size_t idx : indices) {
    const WindowPair& w = windows[idx];
    if (w.target.size() != m) throw ShapeError("target length does not match model output");
    Vector mask;
    if (dropout_rate > 0.0) mask = dropout_mask(model.dims.fc_size, dropout_rate, rng);
    const ForwardPass pass = model_forward(model, to_sequence(w.history), mask);
    double se = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double diff = pass.prediction[k] - w.target[k];
      se += diff * diff;
      d_pred[k] = 2.0 * diff / static_cast<double>(m) * inv_batch;
    }
    out.loss += se / static_cast<double>(m) * inv_batch;
    ModelGradients g = model_backward(model, pass, d_pred, truncated_length);
    out.gradients.add(g);
  }
  return out;
}

TrainResult train(BiLstmModel model, std::span<const WindowPair> train_windows,
                  std::span<const WindowPair> validation_windows, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  config.validate();
  model.validate();
  if (train_windows.empty()) throw DataError("no training windows");
  if (validation_windows.empty()) throw DataError("no validation windows");

  std::mt19937_64 rng(config.rng_seed);
  SgdVelocity velocity;
  std::vector<std::size_t> order(train_windows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainResult result{model, {}};
  TrainState& state = result.state;
  state.best_validation_loss = std::numeric_limits<double>::infinity();
  const bool bi = model.bidirectional();
  const auto started = std::chrono::steady_clock::now();

  for (state.epoch = 0; state.epoch < config.max_epochs; ++state.epoch) {
    state.learning_rate = anneal(state, config);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng() % (order.size() - i));
      std::swap(order[i], order[j]);
    }

    EpochRecord record;
    record.epoch = state.epoch;
    record.learning_rate = state.learning_rate;
    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      const std::span<const std::size_t> batch(order.data() + begin, end - begin);
      BatchGradient bg =
          batch_gradient(model, train_windows, batch, config.truncated_length, config.dropout_rate, rng);
      if (!std::isfinite(bg.loss)) {
        throw DivergenceError("non-finite training loss at epoch " + std::to_string(state.epoch) +
                              ", batch starting at " + std::to_string(begin));
      }
      const ParamViews grads = bg.gradients.views(bi);
      const double pre = clip_global_norm(grads, config.clip_norm);
      const double post = global_norm(grads);
      sgd_step(model.parameters(), grads, state.learning_rate, config.sgd.momentum, velocity);
      state.post_clip_norms.push_back(post);
      record.max_pre_clip_norm = std::max(record.max_pre_clip_norm, pre);
      record.max_post_clip_norm = std::max(record.max_post_clip_norm, post);
      loss_sum += bg.loss;
      ++record.updates;
    }
    record.train_loss = loss_sum / static_cast<double>(record.updates);
    record.validation_loss = evaluation_loss(model, validation_windows);
    if (!std::isfinite(record.validation_loss)) {
      throw DivergenceError("non-finite validation loss at epoch " + std::to_string(state.epoch));
    }
    record.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    state.history.push_back(record);
    if (on_epoch) on_epoch(record);

    if (record.validation_loss < state.best_validation_loss) {
      state.best_validation_loss = record.validation_loss;
      state.best_epoch = state.epoch;
      state.epochs_since_improvement = 0;
      result.model = model;
    } else if (++state.epochs_since_improvement >= config.early_stop_patience) {
      state.early_stopped = true;
      ++state.epoch;
      break;
    }
  }
  return result;
}

void write_epoch_log_header(std::ostream& out) {
  out << "epoch\ttrain_loss\tvalidation_loss\tlearning_rate\telapsed_s\n";
}

void write_epoch_log_line(std::ostream& out, const EpochRecord& r) {
  out << r.epoch << '\t' << format_double(r.train_loss) << '\t' << format_double(r.validation_loss)
      << '\t' << format_double(r.learning_rate) << '\t' << format_fixed(r.elapsed_seconds, 3) << '\n';
}

}  // namespace hostload
