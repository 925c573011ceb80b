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

// Comparison predictors evaluated under the same protocol as the BiLSTM:
// a least-squares AR(p) model and (through BiLstmModel with
// Architecture::kLstm) a unidirectional LSTM.

#ifndef HOSTLOAD_BASELINES_HPP_
#define HOSTLOAD_BASELINES_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hostload {

// x_t = intercept + sum_j coefficients[j-1] * x_{t-j}.
struct ArModel {
  std::size_t order = 16;
  std::vector<double> coefficients;
  double intercept = 0.0;
};

// Least-squares fit over every t >= p. Throws DataError when the series is
// not longer than p or the design matrix is rank deficient.
ArModel ar_fit(std::span<const double> series, std::size_t order = 16);

// Iterated one-step forecasts; each prediction feeds the next.
std::vector<double> ar_predict(const ArModel& model, std::span<const double> history,
                               std::size_t horizon);

// One-step in-sample residual sum of squares over t >= p.
double ar_residual_ss(const ArModel& model, std::span<const double> series);

enum class ModelKind { kAr, kLstm, kBiLstm };

// "ar", "lstm", "bilstm".
ModelKind parse_model_kind(const std::string& name);
const char* to_string(ModelKind kind);
std::vector<std::string> registered_models();

}  // namespace hostload

#endif  // HOSTLOAD_BASELINES_HPP_
