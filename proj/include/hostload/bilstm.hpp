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

// The forecasting network: a forward and a backward LSTM over the history
// window, per-step fusion of the two hidden states, a ReLU fully connected
// layer over the flattened feature sequence, and a bias-free linear head.
//
// The same type also represents the unidirectional LSTM baseline
// (Architecture::kLstm), which drops the backward direction and the FC
// columns that would read it.

#ifndef HOSTLOAD_BILSTM_HPP_
#define HOSTLOAD_BILSTM_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hostload/lstm.hpp"
#include "hostload/nn_core.hpp"
#include "hostload/scaler.hpp"

namespace hostload {

enum class Architecture { kBiLstm, kLstm };

// kConcat stacks [l1 * h_fwd; l2 * h_bwd] per step; kSum adds them.
enum class Fusion { kConcat, kSum };

Architecture parse_architecture(const std::string& name);
const char* to_string(Architecture a);
Fusion parse_fusion(const std::string& name);
const char* to_string(Fusion f);

struct ModelDims {
  std::size_t input_size = 1;
  std::size_t hidden_size = 128;
  std::size_t window = 64;
  std::size_t fc_size = 128;
  std::size_t output_size = 1;

  bool operator==(const ModelDims&) const = default;
};

struct ModelGradients;

struct BiLstmModel {
  Architecture architecture = Architecture::kBiLstm;
  Fusion fusion = Fusion::kConcat;
  ModelDims dims;
  LstmParams fwd;
  LstmParams bwd;  // empty for kLstm
  // Fixed fusion weights; not trained.
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  Matrix w_fc;  // fc_size x (window * step_features())
  Vector b_fc;
  Matrix w_r;   // output_size x fc_size

  // Xavier weights, zero biases, deterministic per seed.
  static BiLstmModel create(Architecture architecture, const ModelDims& dims, std::uint64_t seed,
                            Fusion fusion = Fusion::kConcat);
  static BiLstmModel zeros(Architecture architecture, const ModelDims& dims,
                           Fusion fusion = Fusion::kConcat);

  bool bidirectional() const { return architecture == Architecture::kBiLstm; }
  // Fused feature width per time step.
  std::size_t step_features() const;
  std::size_t fc_input_size() const { return dims.window * step_features(); }

  // Trainable buffers in declared order: fwd (8), bwd (8, BiLSTM only), w_fc,
  // b_fc, w_r.
  ParamViews parameters();
  std::vector<std::string> parameter_names() const;
  std::size_t parameter_count() const;

  ModelGradients zero_gradients() const;

  // Throws ShapeError if any buffer disagrees with dims.
  void validate() const;
};

struct ModelGradients {
  LstmParams fwd;
  LstmParams bwd;
  Matrix w_fc;
  Vector b_fc;
  Matrix w_r;

  // Same order as BiLstmModel::parameters().
  ParamViews views(bool bidirectional);
  void add(ModelGradients& other, double scale = 1.0);
};

// Per-step fused features H = [h_1, ..., h_W] for one history window.
struct FeaturePass {
  LstmCache fwd_cache;
  LstmCache bwd_cache;  // in the backward direction's own (reversed) order
  Vector features;      // flattened, step-major
};

FeaturePass bilstm_forward(const BiLstmModel& model, const Sequence& window);

// relu(W_F * features + b_F).
Vector fc_forward(const BiLstmModel& model, std::span<const double> features);

// W_R * o.
Vector regress(const BiLstmModel& model, std::span<const double> fc_out);

struct ForwardPass {
  FeaturePass feature_pass;
  Vector fc_pre;
  Vector fc_out;
  Vector dropout_scale;  // per FC unit multiplier; empty means identity
  Vector fc_dropped;
  Vector prediction;
};

// Full forward. `dropout_scale`, when non-empty, multiplies the FC output.
ForwardPass model_forward(const BiLstmModel& model, const Sequence& window,
                          std::span<const double> dropout_scale = {});

// Exact gradients of a loss with derivative d_prediction w.r.t. the output.
// Throws ShapeError when `pass` does not come from a forward of this model.
ModelGradients model_backward(const BiLstmModel& model, const ForwardPass& pass,
                              std::span<const double> d_prediction,
                              std::size_t truncated_length = kFullBptt);

// Each scalar becomes a length-1 input vector.
Sequence to_sequence(std::span<const double> values);

// Prediction in standardized units for a standardized univariate window.
Vector predict_standardized(const BiLstmModel& model, std::span<const double> window);

// Standardized window -> original load units, clamped at zero.
Vector predict(const BiLstmModel& model, std::span<const double> window, const Scaler& scaler);

}  // namespace hostload

#endif  // HOSTLOAD_BILSTM_HPP_
