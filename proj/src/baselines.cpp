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

#include "hostload/baselines.hpp"

#include <Eigen/Dense>

#include "hostload/errors.hpp"

namespace hostload {

ArModel ar_fit(std::span<const double> series, std::size_t order) {
  if (order == 0) throw UsageError("AR order must be >= 1");
  if (series.size() <= order) {
    throw DataError("AR(" + std::to_string(order) + ") needs more than " + std::to_string(order) +
                    " values");
  }
  const auto rows = static_cast<Eigen::Index>(series.size() - order);
  const auto cols = static_cast<Eigen::Index>(order + 1);
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::size_t t = order + static_cast<std::size_t>(r);
    design(r, 0) = 1.0;
    for (std::size_t j = 1; j <= order; ++j) design(r, static_cast<Eigen::Index>(j)) = series[t - j];
    rhs(r) = series[t];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < cols) throw DataError("AR design matrix is singular (constant series?)");
  const Eigen::VectorXd beta = qr.solve(rhs);

  ArModel model;
  model.order = order;
  model.intercept = beta(0);
  model.coefficients.resize(order);
  for (std::size_t j = 0; j < order; ++j) model.coefficients[j] = beta(static_cast<Eigen::Index>(j + 1));
  return model;
}

std::vector<double> ar_predict(const ArModel& model, std::span<const double> history,
                               std::size_t horizon) {
  const std::size_t p = model.coefficients.size();
  if (history.size() < p) {
    throw DataError("AR(" + std::to_string(p) + ") needs " + std::to_string(p) +
                    " history values, got " + std::to_string(history.size()));
  }
  std::vector<double> buf(history.end() - static_cast<std::ptrdiff_t>(p), history.end());
  std::vector<double> out;
  out.reserve(horizon);
  for (std::size_t h = 0; h < horizon; ++h) {
    double next = model.intercept;
    for (std::size_t j = 1; j <= p; ++j) next += model.coefficients[j - 1] * buf[buf.size() - j];
    out.push_back(next);
    buf.push_back(next);
  }
  return out;
}

double ar_residual_ss(const ArModel& model, std::span<const double> series) {
  const std::size_t p = model.coefficients.size();
  double ss = 0.0;
  for (std::size_t t = p; t < series.size(); ++t) {
    double pred = model.intercept;
    for (std::size_t j = 1; j <= p; ++j) pred += model.coefficients[j - 1] * series[t - j];
    ss += (series[t] - pred) * (series[t] - pred);
  }
  return ss;
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "ar") return ModelKind::kAr;
  if (name == "lstm") return ModelKind::kLstm;
  if (name == "bilstm") return ModelKind::kBiLstm;
  throw UsageError("unknown model '" + name + "' (expected ar, lstm or bilstm)");
}

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kAr:
      return "ar";
    case ModelKind::kLstm:
      return "lstm";
    case ModelKind::kBiLstm:
      return "bilstm";
  }
  return "?";
}

std::vector<std::string> registered_models() { return {"ar", "lstm", "bilstm"}; }

}  // namespace hostload
