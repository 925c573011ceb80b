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

#include "hostload/lstm.hpp"

#include <algorithm>
#include <string>

#include "hostload/errors.hpp"

namespace hostload {

LstmParams LstmParams::zeros(std::size_t input_size, std::size_t hidden_size) {
  const std::size_t cols = hidden_size + input_size;
  LstmParams p;
  p.w_i = p.w_f = p.w_o = p.w_c = Matrix(hidden_size, cols);
  p.b_i = p.b_f = p.b_o = p.b_c = Vector(hidden_size, 0.0);
  return p;
}

LstmParams LstmParams::xavier(std::size_t input_size, std::size_t hidden_size,
                              std::mt19937_64& rng) {
  const std::size_t cols = hidden_size + input_size;
  LstmParams p = zeros(input_size, hidden_size);
  p.w_i = xavier_init(hidden_size, cols, rng);
  p.w_f = xavier_init(hidden_size, cols, rng);
  p.w_o = xavier_init(hidden_size, cols, rng);
  p.w_c = xavier_init(hidden_size, cols, rng);
  return p;
}

ParamViews LstmParams::views() {
  return {w_i.values(), w_f.values(), w_o.values(), w_c.values(), b_i, b_f, b_o, b_c};
}

std::vector<std::string> LstmParams::view_names() {
  return {"w_i", "w_f", "w_o", "w_c", "b_i", "b_f", "b_o", "b_c"};
}

void LstmParams::validate() const {
  const std::size_t h = w_i.rows();
  const std::size_t cols = w_i.cols();
  if (h == 0 || cols <= h) throw ShapeError("lstm: weight shape must be hidden x (hidden + input)");
  for (const Matrix* m : {&w_f, &w_o, &w_c}) {
    if (m->rows() != h || m->cols() != cols) throw ShapeError("lstm: gate weight shapes differ");
  }
  for (const Vector* b : {&b_i, &b_f, &b_o, &b_c}) {
    if (b->size() != h) throw ShapeError("lstm: bias length must equal hidden size");
  }
}

LstmState LstmState::zeros(std::size_t hidden_size) {
  return {Vector(hidden_size, 0.0), Vector(hidden_size, 0.0)};
}

namespace {

// W [h; x] + b without materialising the concatenation.
void gate_affine(const Matrix& w, const Vector& b, std::span<const double> h,
                 std::span<const double> x, Vector& out) {
  const std::size_t nh = h.size();
  out.resize(w.rows());
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const auto row = w.row(r);
    double acc = b[r];
    for (std::size_t j = 0; j < nh; ++j) acc += row[j] * h[j];
    for (std::size_t j = 0; j < x.size(); ++j) acc += row[nh + j] * x[j];
    out[r] = acc;
  }
}

}  // namespace

std::pair<LstmState, LstmStep> lstm_cell_forward(const LstmParams& params,
                                                 std::span<const double> x,
                                                 const LstmState& prev) {
  const std::size_t nh = params.hidden_size();
  if (x.size() != params.input_size()) {
    throw ShapeError("lstm: input length " + std::to_string(x.size()) + ", expected " +
                     std::to_string(params.input_size()));
  }
  if (prev.h.size() != nh || prev.c.size() != nh) {
    throw ShapeError("lstm: previous state length does not match hidden size");
  }

  LstmStep step;
  step.x.assign(x.begin(), x.end());
  step.h_prev = prev.h;
  step.c_prev = prev.c;
  gate_affine(params.w_i, params.b_i, prev.h, x, step.i);
  gate_affine(params.w_f, params.b_f, prev.h, x, step.f);
  gate_affine(params.w_o, params.b_o, prev.h, x, step.o);
  gate_affine(params.w_c, params.b_c, prev.h, x, step.g);
  step.c.resize(nh);
  step.tanh_c.resize(nh);
  step.h.resize(nh);
  for (std::size_t k = 0; k < nh; ++k) {
    step.i[k] = sigmoid(step.i[k]);
    step.f[k] = sigmoid(step.f[k]);
    step.o[k] = sigmoid(step.o[k]);
    step.g[k] = tanh_act(step.g[k]);
    step.c[k] = step.f[k] * prev.c[k] + step.i[k] * step.g[k];
    step.tanh_c[k] = tanh_act(step.c[k]);
    step.h[k] = step.o[k] * step.tanh_c[k];
  }
  LstmState next{step.h, step.c};
  return {std::move(next), std::move(step)};
}

LstmSequenceOutput lstm_sequence_forward(const LstmParams& params, const Sequence& inputs,
                                         const LstmState& init) {
  if (inputs.empty()) throw ShapeError("lstm: empty input sequence");
  LstmSequenceOutput out;
  out.hidden.reserve(inputs.size());
  out.cache.reserve(inputs.size());
  LstmState state = init;
  for (const Vector& x : inputs) {
    auto [next, step] = lstm_cell_forward(params, x, state);
    out.hidden.push_back(next.h);
    out.cache.push_back(std::move(step));
    state = std::move(next);
  }
  return out;
}

std::vector<StepRange> truncated_bptt_segments(std::size_t length, std::size_t truncated_length) {
  if (truncated_length == 0) throw UsageError("truncated length must be >= 1");
  std::vector<StepRange> segments;
  for (std::size_t begin = 0; begin < length;) {
    const std::size_t end = length - begin <= truncated_length ? length : begin + truncated_length;
    segments.push_back({begin, end});
    begin = end;
  }
  return segments;
}

LstmGradients lstm_sequence_backward(const LstmParams& params, const LstmCache& cache,
                                     const Sequence& dh, std::size_t truncated_length) {
  if (dh.size() != cache.size()) {
    throw ShapeError("lstm backward: " + std::to_string(dh.size()) + " upstream gradients for " +
                     std::to_string(cache.size()) + " cached steps");
  }
  const std::size_t nh = params.hidden_size();
  const std::size_t nx = params.input_size();

  LstmGradients out{LstmParams::zeros(nx, nh), Sequence(cache.size())};
  if (cache.empty()) return out;

  std::vector<bool> cut(cache.size(), false);
  for (const StepRange& s : truncated_bptt_segments(cache.size(), truncated_length)) {
    cut[s.begin] = true;
  }

  Vector dh_next(nh, 0.0), dc_next(nh, 0.0);
  Vector da_i(nh), da_f(nh), da_o(nh), da_g(nh);
  Vector dconcat(nh + nx);
  for (std::size_t t = cache.size(); t-- > 0;) {
    const LstmStep& s = cache[t];
    if (dh[t].size() != nh) throw ShapeError("lstm backward: upstream gradient length mismatch");
    for (std::size_t k = 0; k < nh; ++k) {
      const double dht = dh[t][k] + dh_next[k];
      const double dot = dht * s.tanh_c[k];
      const double dct = dc_next[k] + dht * s.o[k] * tanh_prime(s.tanh_c[k]);
      da_i[k] = dct * s.g[k] * sigmoid_prime(s.i[k]);
      da_f[k] = dct * s.c_prev[k] * sigmoid_prime(s.f[k]);
      da_o[k] = dot * sigmoid_prime(s.o[k]);
      da_g[k] = dct * s.i[k] * tanh_prime(s.g[k]);
      dc_next[k] = dct * s.f[k];
    }

    Vector concat;
    concat.reserve(nh + nx);
    concat.insert(concat.end(), s.h_prev.begin(), s.h_prev.end());
    concat.insert(concat.end(), s.x.begin(), s.x.end());
    outer_add(out.params.w_i, da_i, concat);
    outer_add(out.params.w_f, da_f, concat);
    outer_add(out.params.w_o, da_o, concat);
    outer_add(out.params.w_c, da_g, concat);
    for (std::size_t k = 0; k < nh; ++k) {
      out.params.b_i[k] += da_i[k];
      out.params.b_f[k] += da_f[k];
      out.params.b_o[k] += da_o[k];
      out.params.b_c[k] += da_g[k];
    }

    std::fill(dconcat.begin(), dconcat.end(), 0.0);
    matvec_transposed_add(params.w_i, da_i, dconcat);
    matvec_transposed_add(params.w_f, da_f, dconcat);
    matvec_transposed_add(params.w_o, da_o, dconcat);
    matvec_transposed_add(params.w_c, da_g, dconcat);
    std::copy(dconcat.begin(), dconcat.begin() + static_cast<std::ptrdiff_t>(nh), dh_next.begin());
    out.dx[t].assign(dconcat.begin() + static_cast<std::ptrdiff_t>(nh), dconcat.end());

    if (cut[t]) {
      std::fill(dh_next.begin(), dh_next.end(), 0.0);
      std::fill(dc_next.begin(), dc_next.end(), 0.0);
    }
  }
  return out;
}

RnnStep rnn_cell_forward(const RnnParams& params, std::span<const double> x,
                         std::span<const double> h_prev) {
  const std::size_t nh = params.w.rows();
  if (params.u.rows() != nh || params.u.cols() != x.size() || params.w.cols() != nh ||
      h_prev.size() != nh || params.b_h.size() != nh || params.v.cols() != nh ||
      params.b_y.size() != params.v.rows()) {
    throw ShapeError("rnn: inconsistent parameter or input shapes");
  }
  RnnStep out;
  out.h = matvec(params.u, x);
  const Vector wh = matvec(params.w, h_prev);
  for (std::size_t k = 0; k < nh; ++k) out.h[k] = tanh_act(out.h[k] + wh[k] + params.b_h[k]);
  out.y = matvec(params.v, out.h);
  for (std::size_t k = 0; k < out.y.size(); ++k) out.y[k] += params.b_y[k];
  return out;
}

}  // namespace hostload
