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

// LSTM cell and sequence passes with exact backpropagation through time,
// plus the plain tanh RNN cell kept as a reference baseline.
//
// Gate pre-activations are one affine map over the concatenation [h_{t-1}; x_t]:
//
//   i = sigmoid(W_i [h; x] + b_i)      f = sigmoid(W_f [h; x] + b_f)
//   o = sigmoid(W_o [h; x] + b_o)      g = tanh(W_c [h; x] + b_c)
//   c_t = f * c_{t-1} + i * g          h_t = o * tanh(c_t)

#ifndef HOSTLOAD_LSTM_HPP_
#define HOSTLOAD_LSTM_HPP_

#include <cstddef>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hostload/nn_core.hpp"

namespace hostload {

using Sequence = std::vector<Vector>;

struct LstmParams {
  // Each hidden x (hidden + input); the first `hidden` columns act on h_{t-1}.
  Matrix w_i, w_f, w_o, w_c;
  Vector b_i, b_f, b_o, b_c;

  static LstmParams zeros(std::size_t input_size, std::size_t hidden_size);
  // Xavier-uniform weights, zero biases.
  static LstmParams xavier(std::size_t input_size, std::size_t hidden_size, std::mt19937_64& rng);

  std::size_t hidden_size() const { return b_i.size(); }
  std::size_t input_size() const { return w_i.cols() - w_i.rows(); }

  // Declared order: w_i, w_f, w_o, w_c, b_i, b_f, b_o, b_c.
  ParamViews views();
  static std::vector<std::string> view_names();
  void validate() const;
};

struct LstmState {
  Vector h;
  Vector c;

  static LstmState zeros(std::size_t hidden_size);
};

// Activations retained for one forward step.
struct LstmStep {
  Vector x;
  Vector h_prev, c_prev;
  Vector i, f, o, g;
  Vector c, tanh_c, h;
};

using LstmCache = std::vector<LstmStep>;

// Throws ShapeError on dimension mismatch.
std::pair<LstmState, LstmStep> lstm_cell_forward(const LstmParams& params,
                                                 std::span<const double> x,
                                                 const LstmState& prev);

struct LstmSequenceOutput {
  Sequence hidden;
  LstmCache cache;
};

// Runs the cell over `inputs` in order. Throws ShapeError on an empty sequence
// or ragged inputs.
LstmSequenceOutput lstm_sequence_forward(const LstmParams& params, const Sequence& inputs,
                                         const LstmState& init);

inline constexpr std::size_t kFullBptt = std::numeric_limits<std::size_t>::max();

struct StepRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const StepRange&) const = default;
};

// Partitions [0, length) into consecutive blocks of `truncated_length` steps
// (the last block may be shorter). Gradient flow is cut at block starts.
std::vector<StepRange> truncated_bptt_segments(std::size_t length, std::size_t truncated_length);

struct LstmGradients {
  LstmParams params;
  Sequence dx;
};

// Gradients of a loss whose derivative w.r.t. each step's hidden output is
// dh[t]. Recurrent gradients (through both h and c) are dropped when crossing
// a truncation boundary; forward state was never cut.
LstmGradients lstm_sequence_backward(const LstmParams& params, const LstmCache& cache,
                                     const Sequence& dh,
                                     std::size_t truncated_length = kFullBptt);

struct RnnParams {
  Matrix u;  // hidden x input
  Matrix w;  // hidden x hidden
  Vector b_h;
  Matrix v;  // output x hidden
  Vector b_y;
};

struct RnnStep {
  Vector h;
  Vector y;
};

// h = tanh(U x + W h_prev + b_h), y = V h + b_y.
RnnStep rnn_cell_forward(const RnnParams& params, std::span<const double> x,
                         std::span<const double> h_prev);

}  // namespace hostload

#endif  // HOSTLOAD_LSTM_HPP_
