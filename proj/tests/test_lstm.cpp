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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hostload/errors.hpp"
#include "hostload/lstm.hpp"
#include "support/gradcheck.hpp"

namespace hostload {
namespace {

using testing::max_relative_error;
using testing::random_sequence;
using testing::relative_error;

double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

LstmParams random_params(std::size_t input, std::size_t hidden, std::mt19937_64& rng,
                         double scale = 0.6) {
  LstmParams p = LstmParams::zeros(input, hidden);
  std::uniform_real_distribution<double> u(-scale, scale);
  for (auto buf : p.views()) {
    for (double& x : buf) x = u(rng);
  }
  return p;
}

// Sum_t <dh_t, h_t> recomputed from scratch; the state entering each segment
// start is frozen at the value from the reference run, so gradients cannot
// pass it. With a single segment this is the plain forward.
double detached_loss(const LstmParams& p, const Sequence& xs, const Sequence& dh,
                     const Sequence& ref_h, const Sequence& ref_c, std::size_t truncation) {
  const std::size_t hidden = p.hidden_size();
  LstmState state = LstmState::zeros(hidden);
  double loss = 0.0;
  for (std::size_t t = 0; t < xs.size(); ++t) {
    if (t > 0 && truncation != kFullBptt && t % truncation == 0) {
      state.h = ref_h[t - 1];
      state.c = ref_c[t - 1];
    }
    auto [next, step] = lstm_cell_forward(p, xs[t], state);
    loss += dot(dh[t], next.h);
    state = next;
  }
  return loss;
}

double sequence_gradient_error(std::size_t input, std::size_t hidden, std::size_t length,
                               std::size_t truncation, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  LstmParams p = random_params(input, hidden, rng);
  Sequence xs = random_sequence(length, input, rng);
  const Sequence dh = random_sequence(length, hidden, rng);
  const auto out = lstm_sequence_forward(p, xs, LstmState::zeros(hidden));
  Sequence ref_c;
  for (const auto& s : out.cache) ref_c.push_back(s.c);
  LstmGradients g = lstm_sequence_backward(p, out.cache, dh, truncation);
  const auto loss = [&] { return detached_loss(p, xs, dh, out.hidden, ref_c, truncation); };
  double worst = max_relative_error(p.views(), g.params.views(), loss);
  for (std::size_t t = 0; t < length; ++t) {
    const auto numeric = testing::numeric_gradient(xs[t], loss);
    for (std::size_t k = 0; k < input; ++k) {
      worst = std::max(worst, relative_error(g.dx[t][k], numeric[k]));
    }
  }
  return worst;
}

TEST(LstmCell, ZeroParamsAnalytic) {
  const LstmParams p = LstmParams::zeros(2, 3);
  LstmState prev{{0.1, -0.4, 2.0}, {0.8, -1.2, 3.0}};
  const auto [next, step] = lstm_cell_forward(p, Vector{0.7, -3.0}, prev);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(step.i[k], 0.5);
    EXPECT_EQ(step.f[k], 0.5);
    EXPECT_EQ(step.o[k], 0.5);
    EXPECT_EQ(step.g[k], 0.0);
    EXPECT_DOUBLE_EQ(next.c[k], 0.5 * prev.c[k]);
    EXPECT_DOUBLE_EQ(next.h[k], 0.5 * std::tanh(0.5 * prev.c[k]));
  }
}

TEST(LstmCell, ZeroStateZeroInputGivesZeroHidden) {
  std::mt19937_64 rng(3);
  LstmParams p = random_params(2, 3, rng);
  p.b_i = p.b_f = p.b_o = p.b_c = Vector(3, 0.0);
  const auto [next, step] = lstm_cell_forward(p, Vector{0.0, 0.0}, LstmState::zeros(3));
  for (double h : next.h) EXPECT_EQ(h, 0.0);
}

TEST(LstmCell, ScalarHandOracle) {
  LstmParams p = LstmParams::zeros(1, 1);
  // columns: [h_prev, x]
  p.w_i = Matrix::from_rows({{0.3, -0.5}});
  p.w_f = Matrix::from_rows({{-0.2, 0.8}});
  p.w_o = Matrix::from_rows({{0.6, 0.1}});
  p.w_c = Matrix::from_rows({{-0.7, 0.9}});
  p.b_i = {0.05};
  p.b_f = {0.4};
  p.b_o = {-0.3};
  p.b_c = {0.2};
  const double x = 0.6, h0 = -0.25, c0 = 0.9;
  const auto sig = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
  const double i = sig(0.3 * h0 - 0.5 * x + 0.05);
  const double f = sig(-0.2 * h0 + 0.8 * x + 0.4);
  const double o = sig(0.6 * h0 + 0.1 * x - 0.3);
  const double g = std::tanh(-0.7 * h0 + 0.9 * x + 0.2);
  const double c = f * c0 + i * g;
  const double h = o * std::tanh(c);
  const auto [next, step] = lstm_cell_forward(p, Vector{x}, LstmState{{h0}, {c0}});
  EXPECT_NEAR(step.i[0], i, 1e-15);
  EXPECT_NEAR(step.f[0], f, 1e-15);
  EXPECT_NEAR(step.o[0], o, 1e-15);
  EXPECT_NEAR(step.g[0], g, 1e-15);
  EXPECT_NEAR(next.c[0], c, 1e-15);
  EXPECT_NEAR(next.h[0], h, 1e-15);
}

TEST(LstmCell, DimensionMismatchThrows) {
  const LstmParams p = LstmParams::zeros(2, 3);
  EXPECT_THROW(lstm_cell_forward(p, Vector{1.0}, LstmState::zeros(3)), ShapeError);
  EXPECT_THROW(lstm_cell_forward(p, Vector{1.0, 2.0}, LstmState::zeros(2)), ShapeError);
}

TEST(LstmSequence, LengthOneEqualsCell) {
  std::mt19937_64 rng(8);
  const LstmParams p = random_params(3, 4, rng);
  const Sequence xs = random_sequence(1, 3, rng);
  const auto out = lstm_sequence_forward(p, xs, LstmState::zeros(4));
  const auto [next, step] = lstm_cell_forward(p, xs[0], LstmState::zeros(4));
  ASSERT_EQ(out.hidden.size(), 1u);
  EXPECT_EQ(out.hidden[0], next.h);
}

TEST(LstmSequence, CacheLengthMatches) {
  std::mt19937_64 rng(9);
  const LstmParams p = random_params(3, 4, rng);
  const auto out = lstm_sequence_forward(p, random_sequence(7, 3, rng), LstmState::zeros(4));
  EXPECT_EQ(out.cache.size(), 7u);
  EXPECT_EQ(out.hidden.size(), 7u);
}

TEST(LstmSequence, EmptyOrRaggedThrows) {
  const LstmParams p = LstmParams::zeros(2, 3);
  EXPECT_THROW(lstm_sequence_forward(p, {}, LstmState::zeros(3)), ShapeError);
  EXPECT_THROW(lstm_sequence_forward(p, {{1.0, 2.0}, {1.0}}, LstmState::zeros(3)), ShapeError);
}

TEST(LstmSequence, ContractiveCellConverges) {
  LstmParams p = LstmParams::zeros(1, 2);
  for (auto* w : {&p.w_i, &p.w_f, &p.w_o, &p.w_c}) {
    for (double& v : w->values()) v = 0.1;
  }
  p.b_f = {-1.0, -1.0};
  const Sequence xs(40, Vector{0.8});
  const auto out = lstm_sequence_forward(p, xs, LstmState::zeros(2));
  double prev_gap = INFINITY;
  for (std::size_t t = 1; t < xs.size(); ++t) {
    double gap = 0.0;
    for (std::size_t k = 0; k < 2; ++k) gap += std::pow(out.hidden[t][k] - out.hidden[t - 1][k], 2);
    gap = std::sqrt(gap);
    EXPECT_LE(gap, prev_gap) << "step " << t;
    prev_gap = gap;
  }
  EXPECT_LT(prev_gap, 1e-10);
}

TEST(LstmSequence, ForwardIsDeterministic) {
  std::mt19937_64 rng(10);
  const LstmParams p = random_params(3, 4, rng);
  const Sequence xs = random_sequence(6, 3, rng);
  const auto a = lstm_sequence_forward(p, xs, LstmState::zeros(4));
  const auto b = lstm_sequence_forward(p, xs, LstmState::zeros(4));
  EXPECT_EQ(a.hidden, b.hidden);
}

TEST(LstmSequence, GateRanges) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const LstmParams p = random_params(3, 4, rng, 1.0);
    const auto out = lstm_sequence_forward(p, random_sequence(10, 3, rng), LstmState::zeros(4));
    for (const auto& s : out.cache) {
      for (std::size_t k = 0; k < 4; ++k) {
        for (double gate : {s.i[k], s.f[k], s.o[k]}) {
          EXPECT_GT(gate, 0.0);
          EXPECT_LT(gate, 1.0);
        }
        EXPECT_GT(s.g[k], -1.0);
        EXPECT_LT(s.g[k], 1.0);
        EXPECT_GT(s.tanh_c[k], -1.0);
        EXPECT_LT(s.tanh_c[k], 1.0);
      }
    }
  }
}

TEST(LstmSequence, SaturatedGatesCarryMemory) {
  std::mt19937_64 rng(13);
  LstmParams p = random_params(2, 3, rng, 0.3);
  p.b_f = Vector(3, 50.0);
  p.b_i = Vector(3, -50.0);
  const LstmState init{{0.0, 0.0, 0.0}, {0.7, -0.4, 1.3}};
  const auto out = lstm_sequence_forward(p, random_sequence(12, 2, rng), init);
  for (const auto& s : out.cache) {
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(s.c[k], init.c[k]);
  }
}

TEST(LstmBackward, ZeroUpstreamGivesZeroGradients) {
  std::mt19937_64 rng(14);
  const LstmParams p = random_params(3, 4, rng);
  const auto out = lstm_sequence_forward(p, random_sequence(5, 3, rng), LstmState::zeros(4));
  LstmGradients g = lstm_sequence_backward(p, out.cache, Sequence(5, Vector(4, 0.0)));
  for (auto buf : g.params.views()) {
    for (double v : buf) EXPECT_EQ(v, 0.0);
  }
  for (const auto& dx : g.dx) {
    for (double v : dx) EXPECT_EQ(v, 0.0);
  }
}

TEST(LstmBackward, LengthMismatchThrows) {
  std::mt19937_64 rng(15);
  const LstmParams p = random_params(3, 4, rng);
  const auto out = lstm_sequence_forward(p, random_sequence(5, 3, rng), LstmState::zeros(4));
  EXPECT_THROW(lstm_sequence_backward(p, out.cache, Sequence(4, Vector(4, 0.0))), ShapeError);
}

TEST(LstmBackward, TwoStepThreeUnitMatchesFiniteDifferences) {
  EXPECT_LT(sequence_gradient_error(2, 3, 2, kFullBptt, 21), 1e-4);
}

TEST(LstmBackward, RandomInstancesMatchFiniteDifferences) {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    EXPECT_LT(sequence_gradient_error(3, 4, 5, kFullBptt, seed), 1e-4) << "seed " << seed;
  }
}

TEST(LstmBackward, SaturatedOutputGateAgreesWithOracle) {
  std::mt19937_64 rng(23);
  LstmParams p = random_params(2, 3, rng);
  p.b_o = Vector(3, -30.0);
  Sequence xs = random_sequence(3, 2, rng);
  const Sequence dh = random_sequence(3, 3, rng);
  const auto out = lstm_sequence_forward(p, xs, LstmState::zeros(3));
  LstmGradients g = lstm_sequence_backward(p, out.cache, dh);
  const auto numeric = testing::numeric_gradient(
      p.b_o, [&] { return detached_loss(p, xs, dh, {}, {}, kFullBptt); });
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_LT(std::abs(g.params.b_o[k]), 1e-10);
    EXPECT_NEAR(g.params.b_o[k], numeric[k], 1e-10);
  }
}

TEST(TruncatedBptt, SegmentsPartitionTheSequence) {
  EXPECT_EQ(truncated_bptt_segments(7, 3),
            (std::vector<StepRange>{{0, 3}, {3, 6}, {6, 7}}));
  EXPECT_EQ(truncated_bptt_segments(4, 10), (std::vector<StepRange>{{0, 4}}));
  EXPECT_EQ(truncated_bptt_segments(4, kFullBptt), (std::vector<StepRange>{{0, 4}}));
  EXPECT_THROW(truncated_bptt_segments(4, 0), UsageError);
  for (std::size_t len = 1; len < 30; ++len) {
    for (std::size_t t = 1; t < 12; ++t) {
      const auto segs = truncated_bptt_segments(len, t);
      std::size_t next = 0;
      for (const auto& s : segs) {
        EXPECT_EQ(s.begin, next);
        EXPECT_GT(s.end, s.begin);
        EXPECT_LE(s.end - s.begin, t);
        next = s.end;
      }
      EXPECT_EQ(next, len);
    }
  }
}

TEST(TruncatedBptt, MatchesDetachedStateOracle) {
  for (std::size_t t : {1u, 2u, 3u}) {
    EXPECT_LT(sequence_gradient_error(3, 4, 7, t, 300 + t), 1e-4) << "truncation " << t;
  }
}

TEST(TruncatedBptt, LongTruncationEqualsFullBptt) {
  std::mt19937_64 rng(31);
  const LstmParams p = random_params(3, 4, rng);
  const auto out = lstm_sequence_forward(p, random_sequence(6, 3, rng), LstmState::zeros(4));
  const Sequence dh = random_sequence(6, 4, rng);
  LstmGradients full = lstm_sequence_backward(p, out.cache, dh);
  LstmGradients cut = lstm_sequence_backward(p, out.cache, dh, 6);
  LstmGradients longer = lstm_sequence_backward(p, out.cache, dh, 50);
  const auto fv = full.params.views(), cv = cut.params.views(), lv = longer.params.views();
  for (std::size_t k = 0; k < fv.size(); ++k) {
    for (std::size_t i = 0; i < fv[k].size(); ++i) {
      EXPECT_EQ(fv[k][i], cv[k][i]);
      EXPECT_EQ(fv[k][i], lv[k][i]);
    }
  }
  EXPECT_EQ(full.dx, cut.dx);
}

TEST(RnnCell, ZeroParams) {
  const RnnParams p{Matrix(3, 2), Matrix(3, 3), Vector(3), Matrix(1, 3), Vector(1)};
  const RnnStep s = rnn_cell_forward(p, Vector{0.4, -1.0}, Vector(3, 0.2));
  EXPECT_EQ(s.h, Vector(3, 0.0));
  EXPECT_EQ(s.y, Vector(1, 0.0));
}

TEST(RnnCell, ScalarOracle) {
  const RnnParams p{Matrix::from_rows({{1}}), Matrix::from_rows({{0}}), {0},
                    Matrix::from_rows({{1}}), {0}};
  const RnnStep s = rnn_cell_forward(p, Vector{0.5}, Vector{0.9});
  EXPECT_DOUBLE_EQ(s.h[0], std::tanh(0.5));
  EXPECT_DOUBLE_EQ(s.y[0], std::tanh(0.5));
}

TEST(RnnCell, SharedParamsAcrossSteps) {
  const RnnParams p{Matrix::from_rows({{0.5}}), Matrix::from_rows({{0.3}}), {0.1},
                    Matrix::from_rows({{2.0}}), {-0.1}};
  const RnnStep s1 = rnn_cell_forward(p, Vector{1.0}, Vector{0.0});
  const RnnStep s2 = rnn_cell_forward(p, Vector{1.0}, s1.h);
  EXPECT_DOUBLE_EQ(s2.h[0], std::tanh(0.5 + 0.3 * s1.h[0] + 0.1));
  EXPECT_DOUBLE_EQ(s2.y[0], 2.0 * s2.h[0] - 0.1);
}

TEST(RnnCell, ShapeMismatchThrows) {
  const RnnParams p{Matrix(3, 2), Matrix(3, 3), Vector(3), Matrix(1, 3), Vector(1)};
  EXPECT_THROW(rnn_cell_forward(p, Vector{0.4}, Vector(3, 0.0)), ShapeError);
}

}  // namespace
}  // namespace hostload
