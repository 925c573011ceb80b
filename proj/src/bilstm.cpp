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

#include "hostload/bilstm.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "hostload/errors.hpp"

namespace hostload {

Architecture parse_architecture(const std::string& name) {
  if (name == "bilstm") return Architecture::kBiLstm;
  if (name == "lstm") return Architecture::kLstm;
  throw UsageError("unknown network '" + name + "' (expected bilstm or lstm)");
}

const char* to_string(Architecture a) { return a == Architecture::kBiLstm ? "bilstm" : "lstm"; }

Fusion parse_fusion(const std::string& name) {
  if (name == "concat") return Fusion::kConcat;
  if (name == "sum") return Fusion::kSum;
  throw UsageError("unknown fusion '" + name + "' (expected concat or sum)");
}

const char* to_string(Fusion f) { return f == Fusion::kConcat ? "concat" : "sum"; }

std::size_t BiLstmModel::step_features() const {
  return bidirectional() && fusion == Fusion::kConcat ? 2 * dims.hidden_size : dims.hidden_size;
}

BiLstmModel BiLstmModel::zeros(Architecture architecture, const ModelDims& dims, Fusion fusion) {
  if (dims.input_size == 0 || dims.hidden_size == 0 || dims.window == 0 || dims.fc_size == 0 ||
      dims.output_size == 0) {
    throw ShapeError("model dimensions must all be >= 1");
  }
  BiLstmModel m;
  m.architecture = architecture;
  m.fusion = fusion;
  m.dims = dims;
  m.fwd = LstmParams::zeros(dims.input_size, dims.hidden_size);
  if (m.bidirectional()) m.bwd = LstmParams::zeros(dims.input_size, dims.hidden_size);
  m.w_fc = Matrix(dims.fc_size, m.fc_input_size());
  m.b_fc = Vector(dims.fc_size, 0.0);
  m.w_r = Matrix(dims.output_size, dims.fc_size);
  return m;
}

BiLstmModel BiLstmModel::create(Architecture architecture, const ModelDims& dims,
                                std::uint64_t seed, Fusion fusion) {
  BiLstmModel m = zeros(architecture, dims, fusion);
  std::mt19937_64 rng(seed);
  m.fwd = LstmParams::xavier(dims.input_size, dims.hidden_size, rng);
  if (m.bidirectional()) m.bwd = LstmParams::xavier(dims.input_size, dims.hidden_size, rng);
  m.w_fc = xavier_init(dims.fc_size, m.fc_input_size(), rng);
  m.w_r = xavier_init(dims.output_size, dims.fc_size, rng);
  return m;
}

ParamViews BiLstmModel::parameters() {
  ParamViews views = fwd.views();
  if (bidirectional()) {
    const ParamViews b = bwd.views();
    views.insert(views.end(), b.begin(), b.end());
  }
  views.push_back(w_fc.values());
  views.push_back(b_fc);
  views.push_back(w_r.values());
  return views;
}

std::vector<std::string> BiLstmModel::parameter_names() const {
  std::vector<std::string> names;
  for (const auto& n : LstmParams::view_names()) names.push_back("fwd." + n);
  if (bidirectional()) {
    for (const auto& n : LstmParams::view_names()) names.push_back("bwd." + n);
  }
  names.insert(names.end(), {"w_fc", "b_fc", "w_r"});
  return names;
}

std::size_t BiLstmModel::parameter_count() const {
  const std::size_t lstm = 4 * (fwd.w_i.size() + fwd.b_i.size());
  return lstm * (bidirectional() ? 2 : 1) + w_fc.size() + b_fc.size() + w_r.size();
}

ModelGradients BiLstmModel::zero_gradients() const {
  ModelGradients g;
  g.fwd = LstmParams::zeros(dims.input_size, dims.hidden_size);
  if (bidirectional()) g.bwd = LstmParams::zeros(dims.input_size, dims.hidden_size);
  g.w_fc = Matrix(w_fc.rows(), w_fc.cols());
  g.b_fc = Vector(b_fc.size(), 0.0);
  g.w_r = Matrix(w_r.rows(), w_r.cols());
  return g;
}

void BiLstmModel::validate() const {
  const auto check_lstm = [&](const LstmParams& p, const char* which) {
    p.validate();
    if (p.hidden_size() != dims.hidden_size || p.input_size() != dims.input_size) {
      throw ShapeError(std::string(which) + " LSTM does not match model dimensions");
    }
  };
  check_lstm(fwd, "forward");
  if (bidirectional()) check_lstm(bwd, "backward");
  if (w_fc.rows() != dims.fc_size || w_fc.cols() != fc_input_size() || b_fc.size() != dims.fc_size) {
    throw ShapeError("FC layer does not match model dimensions");
  }
  if (w_r.rows() != dims.output_size || w_r.cols() != dims.fc_size) {
    throw ShapeError("regression head does not match model dimensions");
  }
}

ParamViews ModelGradients::views(bool bidirectional) {
  ParamViews v = fwd.views();
  if (bidirectional) {
    const ParamViews b = bwd.views();
    v.insert(v.end(), b.begin(), b.end());
  }
  v.push_back(w_fc.values());
  v.push_back(b_fc);
  v.push_back(w_r.values());
  return v;
}

void ModelGradients::add(ModelGradients& other, double scale) {
  const bool bi = !bwd.b_i.empty();
  const ParamViews mine = views(bi);
  const ParamViews theirs = other.views(bi);
  if (mine.size() != theirs.size()) throw ShapeError("gradient sets differ");
  for (std::size_t k = 0; k < mine.size(); ++k) {
    if (mine[k].size() != theirs[k].size()) throw ShapeError("gradient buffers differ");
    for (std::size_t i = 0; i < mine[k].size(); ++i) mine[k][i] += scale * theirs[k][i];
  }
}

FeaturePass bilstm_forward(const BiLstmModel& model, const Sequence& window) {
  const std::size_t w = model.dims.window;
  const std::size_t nh = model.dims.hidden_size;
  if (window.size() != w) {
    throw ShapeError("history window of " + std::to_string(window.size()) + " steps, model expects " +
                     std::to_string(w));
  }
  FeaturePass pass;
  auto fwd = lstm_sequence_forward(model.fwd, window, LstmState::zeros(nh));
  pass.fwd_cache = std::move(fwd.cache);
  pass.features.assign(model.fc_input_size(), 0.0);
  const std::size_t width = model.step_features();

  if (!model.bidirectional()) {
    for (std::size_t t = 0; t < w; ++t) {
      for (std::size_t k = 0; k < nh; ++k) pass.features[t * width + k] = model.lambda1 * fwd.hidden[t][k];
    }
    return pass;
  }

  const Sequence reversed(window.rbegin(), window.rend());
  auto bwd = lstm_sequence_forward(model.bwd, reversed, LstmState::zeros(nh));
  pass.bwd_cache = std::move(bwd.cache);
  for (std::size_t t = 0; t < w; ++t) {
    const Vector& hf = fwd.hidden[t];
    const Vector& hb = bwd.hidden[w - 1 - t];
    double* out = pass.features.data() + t * width;
    if (model.fusion == Fusion::kConcat) {
      for (std::size_t k = 0; k < nh; ++k) {
        out[k] = model.lambda1 * hf[k];
        out[nh + k] = model.lambda2 * hb[k];
      }
    } else {
      for (std::size_t k = 0; k < nh; ++k) out[k] = model.lambda1 * hf[k] + model.lambda2 * hb[k];
    }
  }
  return pass;
}

namespace {

Vector fc_preactivation(const BiLstmModel& model, std::span<const double> features) {
  if (features.size() != model.w_fc.cols()) {
    throw ShapeError("FC input of " + std::to_string(features.size()) + " values, expected " +
                     std::to_string(model.w_fc.cols()));
  }
  Vector pre = matvec(model.w_fc, features);
  for (std::size_t k = 0; k < pre.size(); ++k) pre[k] += model.b_fc[k];
  return pre;
}

}  // namespace

Vector fc_forward(const BiLstmModel& model, std::span<const double> features) {
  Vector out = fc_preactivation(model, features);
  for (double& v : out) v = relu(v);
  return out;
}

Vector regress(const BiLstmModel& model, std::span<const double> fc_out) {
  if (fc_out.size() != model.w_r.cols()) {
    throw ShapeError("regression input of " + std::to_string(fc_out.size()) + " values, expected " +
                     std::to_string(model.w_r.cols()));
  }
  return matvec(model.w_r, fc_out);
}

ForwardPass model_forward(const BiLstmModel& model, const Sequence& window,
                          std::span<const double> dropout_scale) {
  ForwardPass pass;
  pass.feature_pass = bilstm_forward(model, window);
  pass.fc_pre = fc_preactivation(model, pass.feature_pass.features);
  pass.fc_out.resize(pass.fc_pre.size());
  for (std::size_t k = 0; k < pass.fc_pre.size(); ++k) pass.fc_out[k] = relu(pass.fc_pre[k]);
  pass.fc_dropped = pass.fc_out;
  if (!dropout_scale.empty()) {
    if (dropout_scale.size() != pass.fc_out.size()) throw ShapeError("dropout mask size mismatch");
    pass.dropout_scale.assign(dropout_scale.begin(), dropout_scale.end());
    for (std::size_t k = 0; k < pass.fc_dropped.size(); ++k) pass.fc_dropped[k] *= dropout_scale[k];
  }
  pass.prediction = regress(model, pass.fc_dropped);
  return pass;
}

ModelGradients model_backward(const BiLstmModel& model, const ForwardPass& pass,
                              std::span<const double> d_prediction, std::size_t truncated_length) {
  const std::size_t w = model.dims.window;
  const std::size_t nh = model.dims.hidden_size;
  const FeaturePass& fp = pass.feature_pass;
  if (d_prediction.size() != model.dims.output_size || pass.prediction.size() != model.dims.output_size ||
      fp.fwd_cache.size() != w || fp.features.size() != model.fc_input_size() ||
      pass.fc_pre.size() != model.dims.fc_size ||
      (model.bidirectional() && fp.bwd_cache.size() != w)) {
    throw ShapeError("forward pass does not match this model");
  }

  ModelGradients g = model.zero_gradients();

  outer_add(g.w_r, d_prediction, pass.fc_dropped);
  Vector d_fc(model.dims.fc_size, 0.0);
  matvec_transposed_add(model.w_r, d_prediction, d_fc);
  for (std::size_t k = 0; k < d_fc.size(); ++k) {
    if (!pass.dropout_scale.empty()) d_fc[k] *= pass.dropout_scale[k];
    d_fc[k] *= relu_prime(pass.fc_pre[k]);
  }
  outer_add(g.w_fc, d_fc, fp.features);
  for (std::size_t k = 0; k < d_fc.size(); ++k) g.b_fc[k] = d_fc[k];
  Vector d_features(fp.features.size(), 0.0);
  matvec_transposed_add(model.w_fc, d_fc, d_features);

  const std::size_t width = model.step_features();
  Sequence dh_fwd(w, Vector(nh, 0.0));
  Sequence dh_bwd;
  if (model.bidirectional()) dh_bwd.assign(w, Vector(nh, 0.0));
  for (std::size_t t = 0; t < w; ++t) {
    const double* df = d_features.data() + t * width;
    for (std::size_t k = 0; k < nh; ++k) dh_fwd[t][k] = model.lambda1 * df[k];
    if (!model.bidirectional()) continue;
    const double* db = model.fusion == Fusion::kConcat ? df + nh : df;
    for (std::size_t k = 0; k < nh; ++k) dh_bwd[w - 1 - t][k] = model.lambda2 * db[k];
  }

  g.fwd = lstm_sequence_backward(model.fwd, fp.fwd_cache, dh_fwd, truncated_length).params;
  if (model.bidirectional()) {
    g.bwd = lstm_sequence_backward(model.bwd, fp.bwd_cache, dh_bwd, truncated_length).params;
  }
  return g;
}

Sequence to_sequence(std::span<const double> values) {
  Sequence seq;
  seq.reserve(values.size());
  for (double v : values) seq.push_back(Vector{v});
  return seq;
}

Vector predict_standardized(const BiLstmModel& model, std::span<const double> window) {
  if (model.dims.input_size != 1) throw ShapeError("predict expects a univariate model");
  const FeaturePass fp = bilstm_forward(model, to_sequence(window));
  return regress(model, fc_forward(model, fp.features));
}

Vector predict(const BiLstmModel& model, std::span<const double> window, const Scaler& scaler) {
  if (!(scaler.std > 0.0)) throw UsageError("predict needs the training scaler (std > 0)");
  Vector out = predict_standardized(model, window);
  for (double& v : out) v = std::max(0.0, scaler.invert(v));
  return out;
}

}  // namespace hostload
