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

#include "hostload/nn_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hostload/errors.hpp"

namespace hostload {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ShapeError("matrix data length " + std::to_string(data_.size()) +
                     " does not match " + std::to_string(rows_) + "x" +
                     std::to_string(cols_));
  }
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("ragged matrix rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

Vector matvec(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) {
    throw ShapeError("matvec: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " times vector of " + std::to_string(x.size()));
  }
  Vector out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto row = a.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * x[j];
    out[i] = acc;
  }
  return out;
}

void matvec_transposed_add(const Matrix& a, std::span<const double> v, std::span<double> out) {
  if (a.rows() != v.size() || a.cols() != out.size()) {
    throw ShapeError("matvec_transposed_add: shape mismatch");
  }
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double vi = v[i];
    if (vi == 0.0) continue;
    const auto row = a.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) out[j] += row[j] * vi;
  }
}

void outer_add(Matrix& a, std::span<const double> u, std::span<const double> v) {
  if (a.rows() != u.size() || a.cols() != v.size()) {
    throw ShapeError("outer_add: shape mismatch");
  }
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double ui = u[i];
    if (ui == 0.0) continue;
    auto row = a.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += ui * v[j];
  }
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double sigmoid_prime(double y) { return y * (1.0 - y); }

double tanh_act(double x) { return std::tanh(x); }

double tanh_prime(double y) { return 1.0 - y * y; }

double relu(double x) { return x > 0.0 ? x : 0.0; }

double relu_prime(double x) { return x > 0.0 ? 1.0 : 0.0; }

Matrix xavier_init(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return xavier_init(rows, cols, rng);
}

Matrix xavier_init(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  if (rows == 0 || cols == 0) throw ShapeError("xavier_init: empty shape");
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix m(rows, cols);
  for (double& v : m.values()) v = dist(rng);
  return m;
}

double global_norm(std::span<const std::span<double>> grads) {
  double sum = 0.0;
  for (const auto& g : grads) {
    for (double v : g) sum += v * v;
  }
  return std::sqrt(sum);
}

double clip_global_norm(std::span<const std::span<double>> grads, double max_norm) {
  if (!(max_norm > 0.0)) throw UsageError("clip norm must be positive");
  const double norm = global_norm(grads);
  if (!std::isfinite(norm)) {
    throw DivergenceError("non-finite gradient norm; training diverged");
  }
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (const auto& g : grads) {
      for (double& v : g) v *= scale;
    }
  }
  return norm;
}

void SgdConfig::validate() const {
  if (!(learning_rate > 0.0)) throw UsageError("learning rate must be positive");
  if (!(anneal_factor > 0.0 && anneal_factor < 1.0)) {
    throw UsageError("anneal factor must lie in (0, 1)");
  }
  if (anneal_every < 0) throw UsageError("anneal interval must be >= 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw UsageError("momentum must lie in [0, 1)");
}

double annealed_rate(const SgdConfig& config, int epoch) {
  if (config.anneal_every <= 0 || epoch < config.anneal_every) return config.learning_rate;
  const int drops = epoch / config.anneal_every;
  double lr = config.learning_rate;
  for (int i = 0; i < drops; ++i) lr *= config.anneal_factor;
  return lr;
}

void sgd_step(std::span<const std::span<double>> params,
              std::span<const std::span<double>> grads, double learning_rate,
              double momentum, SgdVelocity& velocity) {
  if (params.size() != grads.size()) throw ShapeError("sgd_step: buffer count mismatch");
  if (velocity.empty()) {
    velocity.reserve(params.size());
    for (const auto& p : params) velocity.emplace_back(p.size(), 0.0);
  }
  if (velocity.size() != params.size()) throw ShapeError("sgd_step: velocity count mismatch");
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto p = params[k];
    const auto g = grads[k];
    auto& v = velocity[k];
    if (p.size() != g.size() || p.size() != v.size()) {
      throw ShapeError("sgd_step: buffer " + std::to_string(k) + " size mismatch");
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      v[i] = momentum * v[i] - learning_rate * g[i];
      p[i] += v[i];
    }
  }
}

}  // namespace hostload
