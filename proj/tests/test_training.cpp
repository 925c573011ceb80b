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
#include <cstring>
#include <random>
#include <sstream>

#include "hostload/errors.hpp"
#include "hostload/training.hpp"
#include "support/gradcheck.hpp"

namespace hostload {
namespace {

std::vector<WindowPair> random_windows(std::size_t count, std::size_t w_in, std::size_t out,
                                       std::mt19937_64& rng) {
  std::vector<WindowPair> windows(count);
  for (auto& w : windows) {
    w.history = testing::random_vector(w_in, rng);
    w.target = testing::random_vector(out, rng);
  }
  return windows;
}

TrainConfig tiny_config(std::size_t w_in) {
  TrainConfig c;
  c.task = TaskSpec::parse("actual:2");
  c.input_window = w_in;
  c.hidden_size = 4;
  c.fc_size = 6;
  c.batch_size = 4;
  c.max_epochs = 5;
  c.truncated_length = w_in;
  c.dropout_rate = 0.0;
  c.early_stop_patience = 100;
  c.rng_seed = 9;
  return c;
}

BiLstmModel tiny_model(const TrainConfig& c, std::uint64_t seed = 3,
                       Architecture arch = Architecture::kBiLstm) {
  return BiLstmModel::create(arch, {1, c.hidden_size, c.input_window, c.fc_size, 2}, seed);
}

TEST(TrainConfig, TaskDefaults) {
  const TrainConfig esp = TrainConfig::for_task(TaskSpec::parse("esp:4"));
  EXPECT_EQ(esp.input_window, 24u);
  EXPECT_EQ(esp.truncated_length, 39u);
  const TrainConfig act = TrainConfig::for_task(TaskSpec::parse("actual:6"));
  EXPECT_EQ(act.input_window, 64u);
  EXPECT_EQ(act.truncated_length, 36u);
  EXPECT_EQ(act.hidden_size, 128u);
  EXPECT_EQ(act.batch_size, 128u);
  EXPECT_EQ(act.max_epochs, 90u);
  EXPECT_EQ(act.clip_norm, 5.0);
  EXPECT_EQ(act.dropout_rate, 0.01);
  EXPECT_EQ(act.early_stop_patience, 10u);
}

TEST(TrainConfig, Validation) {
  TrainConfig c = tiny_config(4);
  c.dropout_rate = 1.0;
  EXPECT_THROW(c.validate(), UsageError);
  c = tiny_config(4);
  c.batch_size = 0;
  EXPECT_THROW(c.validate(), UsageError);
}

TEST(Anneal, Schedule) {
  const TrainConfig c = TrainConfig::for_task(TaskSpec::parse("actual:1"));
  TrainState s;
  s.epoch = 29;
  EXPECT_DOUBLE_EQ(anneal(s, c), 0.01);
  s.epoch = 30;
  EXPECT_DOUBLE_EQ(anneal(s, c), 0.001);
  s.epoch = 60;
  EXPECT_DOUBLE_EQ(anneal(s, c), 0.0001);
}

TEST(Dropout, IdentityCases) {
  std::mt19937_64 rng(1);
  std::vector<double> a{1, 2, 3};
  apply_dropout(a, 0.0, true, rng);
  EXPECT_EQ(a, (std::vector<double>{1, 2, 3}));
  apply_dropout(a, 0.7, false, rng);
  EXPECT_EQ(a, (std::vector<double>{1, 2, 3}));
}

TEST(Dropout, SurvivorFractionAndScale) {
  std::mt19937_64 rng(2);
  std::vector<double> a(10000, 1.0);
  apply_dropout(a, 0.5, true, rng);
  std::size_t kept = 0;
  for (double v : a) {
    EXPECT_TRUE(v == 0.0 || v == 2.0);
    kept += v != 0.0;
  }
  EXPECT_NEAR(static_cast<double>(kept) / 1e4, 0.5, 0.02);
  EXPECT_THROW(dropout_mask(3, 1.0, rng), UsageError);
}

TEST(BatchGradient, LongTruncationIsBitwiseFullBptt) {
  std::mt19937_64 data(4);
  const TrainConfig c = tiny_config(6);
  const BiLstmModel m = tiny_model(c);
  const auto windows = random_windows(5, 6, 2, data);
  const std::vector<std::size_t> idx{0, 1, 2, 3, 4};
  std::mt19937_64 r1(5), r2(5);
  BatchGradient full = batch_gradient(m, windows, idx, kFullBptt, 0.0, r1);
  BatchGradient cut = batch_gradient(m, windows, idx, 6, 0.0, r2);
  const auto a = full.gradients.views(true), b = cut.gradients.views(true);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(std::memcmp(a[k].data(), b[k].data(), a[k].size() * sizeof(double)), 0);
  }
  EXPECT_EQ(full.loss, cut.loss);
}

TEST(BatchGradient, MatchesFiniteDifferencesOfBatchLoss) {
  std::mt19937_64 data(6);
  const TrainConfig c = tiny_config(4);
  BiLstmModel m = tiny_model(c);
  testing::randomize(m, data);
  const auto windows = random_windows(3, 4, 2, data);
  const std::vector<std::size_t> idx{2, 0, 1};
  std::mt19937_64 rng(1);
  BatchGradient bg = batch_gradient(m, windows, idx, kFullBptt, 0.0, rng);
  const auto loss = [&] { return evaluation_loss(m, windows); };
  EXPECT_NEAR(bg.loss, loss(), 1e-12);
  EXPECT_LT(testing::max_relative_error(m.parameters(), bg.gradients.views(true), loss), 1e-4);
}

TEST(Train, MemorizesSingleWindow) {
  std::mt19937_64 data(7);
  TrainConfig c = tiny_config(6);
  c.batch_size = 1;
  c.max_epochs = 2000;
  c.sgd.anneal_every = 0;
  const auto windows = random_windows(1, 6, 2, data);
  const TrainResult r = train(tiny_model(c), windows, windows, c);
  EXPECT_LT(r.state.best_validation_loss, 1e-4);
  EXPECT_LT(evaluation_loss(r.model, windows), 1e-4);
}

TEST(Train, SeededRunsAreBitIdentical) {
  std::mt19937_64 data(8);
  TrainConfig c = tiny_config(5);
  c.dropout_rate = 0.2;
  c.truncated_length = 2;
  const auto tr = random_windows(10, 5, 2, data);
  const auto va = random_windows(4, 5, 2, data);
  const TrainResult a = train(tiny_model(c), tr, va, c);
  const TrainResult b = train(tiny_model(c), tr, va, c);
  ASSERT_EQ(a.state.history.size(), b.state.history.size());
  for (std::size_t e = 0; e < a.state.history.size(); ++e) {
    EXPECT_EQ(a.state.history[e].train_loss, b.state.history[e].train_loss);
    EXPECT_EQ(a.state.history[e].validation_loss, b.state.history[e].validation_loss);
  }
  EXPECT_EQ(a.model.w_fc, b.model.w_fc);
  c.rng_seed = 10;
  const TrainResult other = train(tiny_model(c), tr, va, c);
  EXPECT_NE(other.state.history.back().train_loss, a.state.history.back().train_loss);
}

TEST(Train, PatienceOneStopsAfterTwoEpochs) {
  std::mt19937_64 data(9);
  TrainConfig c = tiny_config(4);
  c.early_stop_patience = 1;
  c.max_epochs = 50;
  auto tr = random_windows(8, 4, 2, data);
  auto va = tr;
  for (auto& w : tr) w.target = {3.0, 3.0};
  for (auto& w : va) w.target = {-3.0, -3.0};
  const TrainResult r = train(tiny_model(c), tr, va, c);
  EXPECT_TRUE(r.state.early_stopped);
  EXPECT_EQ(r.state.history.size(), 2u);
  EXPECT_EQ(r.state.best_epoch, 0u);
}

TEST(Train, PostClipNormBounded) {
  std::mt19937_64 data(10);
  TrainConfig c = tiny_config(5);
  c.clip_norm = 0.05;
  const auto tr = random_windows(12, 5, 2, data);
  const TrainResult r = train(tiny_model(c), tr, tr, c);
  double max_pre = 0.0;
  for (const auto& e : r.state.history) max_pre = std::max(max_pre, e.max_pre_clip_norm);
  EXPECT_GT(max_pre, c.clip_norm);
  ASSERT_FALSE(r.state.post_clip_norms.empty());
  for (double n : r.state.post_clip_norms) EXPECT_LE(n, c.clip_norm * (1.0 + 1e-12));
}

TEST(Train, SmallStepLossIsMonotone) {
  std::mt19937_64 data(11);
  TrainConfig c = tiny_config(5);
  c.batch_size = 6;
  c.max_epochs = 60;
  c.sgd.learning_rate = 1e-3;
  c.sgd.momentum = 0.0;
  c.sgd.anneal_every = 0;
  const auto tr = random_windows(6, 5, 2, data);
  const TrainResult r = train(tiny_model(c), tr, tr, c);
  for (std::size_t e = 1; e < r.state.history.size(); ++e) {
    EXPECT_LE(r.state.history[e].train_loss, r.state.history[e - 1].train_loss * (1.0 + 1e-12))
        << "epoch " << e;
  }
  EXPECT_LT(r.state.history.back().train_loss, r.state.history.front().train_loss);
}

TEST(Train, BestSnapshotIsReturned) {
  std::mt19937_64 data(12);
  TrainConfig c = tiny_config(5);
  c.max_epochs = 15;
  c.sgd.learning_rate = 0.05;
  const auto tr = random_windows(12, 5, 2, data);
  const auto va = random_windows(6, 5, 2, data);
  const TrainResult r = train(tiny_model(c), tr, va, c);
  EXPECT_LE(r.state.best_validation_loss, r.state.history.back().validation_loss);
  EXPECT_EQ(evaluation_loss(r.model, va), r.state.best_validation_loss);
  EXPECT_EQ(r.state.history[r.state.best_epoch].validation_loss, r.state.best_validation_loss);
  double running = INFINITY;
  for (const auto& e : r.state.history) running = std::min(running, e.validation_loss);
  EXPECT_EQ(running, r.state.best_validation_loss);
}

TEST(Train, LearningRateAnnealsInHistory) {
  std::mt19937_64 data(13);
  TrainConfig c = tiny_config(3);
  c.hidden_size = 2;
  c.fc_size = 2;
  c.max_epochs = 62;
  c.sgd.anneal_every = 30;
  const auto tr = random_windows(4, 3, 2, data);
  const TrainResult r = train(tiny_model(c), tr, tr, c);
  ASSERT_EQ(r.state.history.size(), 62u);
  EXPECT_DOUBLE_EQ(r.state.history[29].learning_rate, 0.01);
  EXPECT_DOUBLE_EQ(r.state.history[30].learning_rate, 0.001);
  EXPECT_DOUBLE_EQ(r.state.history[60].learning_rate, 0.0001);
}

TEST(Train, UnidirectionalBaselineTrains) {
  std::mt19937_64 data(14);
  const TrainConfig c = tiny_config(5);
  const auto tr = random_windows(8, 5, 2, data);
  const TrainResult a = train(tiny_model(c, 3, Architecture::kLstm), tr, tr, c);
  const TrainResult b = train(tiny_model(c, 3, Architecture::kLstm), tr, tr, c);
  EXPECT_EQ(a.model.w_r, b.model.w_r);
  EXPECT_TRUE(a.model.bwd.b_i.empty());
}

TEST(Train, NonFiniteLossIsDivergence) {
  std::mt19937_64 data(15);
  const TrainConfig c = tiny_config(4);
  auto tr = random_windows(4, 4, 2, data);
  tr[1].target[0] = std::nan("");
  EXPECT_THROW(train(tiny_model(c), tr, tr, c), DivergenceError);
}

TEST(Train, EmptyInputsRejected) {
  const TrainConfig c = tiny_config(4);
  std::mt19937_64 data(16);
  const auto tr = random_windows(4, 4, 2, data);
  EXPECT_THROW(train(tiny_model(c), {}, tr, c), DataError);
  EXPECT_THROW(train(tiny_model(c), tr, {}, c), DataError);
}

TEST(EpochLog, Format) {
  std::ostringstream out;
  write_epoch_log_header(out);
  write_epoch_log_line(out, EpochRecord{3, 0.5, 0.25, 0.01, 0, 0, 1, 1.23456});
  EXPECT_EQ(out.str(),
            "epoch\ttrain_loss\tvalidation_loss\tlearning_rate\telapsed_s\n"
            "3\t0.5\t0.25\t0.01\t1.235\n");
}

}  // namespace
}  // namespace hostload
