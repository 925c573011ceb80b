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

// Dense numeric kernels shared by the recurrent and feed-forward layers.
// Everything is double precision, row-major, and allocation-explicit.

#ifndef HOSTLOAD_NN_CORE_HPP_
#define HOSTLOAD_NN_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace hostload {

using Vector = std::vector<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  // Throws ShapeError if data.size() != rows * cols.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Standard product a * b. Throws ShapeError when a.cols() != b.rows().
Matrix matmul(const Matrix& a, const Matrix& b);

// a * x.
Vector matvec(const Matrix& a, std::span<const double> x);

// out += a^T * v.
void matvec_transposed_add(const Matrix& a, std::span<const double> v, std::span<double> out);

// a += u * v^T.
void outer_add(Matrix& a, std::span<const double> u, std::span<const double> v);

double sigmoid(double x);
// Derivative expressed through the sigmoid output y.
double sigmoid_prime(double y);
double tanh_act(double x);
// Derivative expressed through the tanh output y.
double tanh_prime(double y);
double relu(double x);
// Subgradient at exactly 0 is 0.
double relu_prime(double x);

// Uniform in +-sqrt(6 / (rows + cols)).
Matrix xavier_init(std::size_t rows, std::size_t cols, std::uint64_t seed);
Matrix xavier_init(std::size_t rows, std::size_t cols, std::mt19937_64& rng);

// A flat list of parameter (or gradient) buffers, in a fixed declared order.
using ParamViews = std::vector<std::span<double>>;

double global_norm(std::span<const std::span<double>> grads);

// Rescales every buffer by max_norm / g when the global L2 norm g exceeds
// max_norm. Returns g (the norm before clipping). Throws DivergenceError on a
// non-finite gradient and UsageError when max_norm <= 0.
double clip_global_norm(std::span<const std::span<double>> grads, double max_norm);

struct SgdConfig {
  double learning_rate = 0.01;
  double anneal_factor = 0.1;
  // 0 disables annealing.
  int anneal_every = 30;
  double momentum = 0.9;

  void validate() const;
};

// Learning rate in effect during a zero-based epoch:
// learning_rate * anneal_factor^floor(epoch / anneal_every).
double annealed_rate(const SgdConfig& config, int epoch);

// One velocity buffer per parameter buffer; sized on first use.
using SgdVelocity = std::vector<std::vector<double>>;

// Momentum SGD: v <- momentum * v - lr * g; p <- p + v.
// With momentum 0 this is p <- p - lr * g.
void sgd_step(std::span<const std::span<double>> params,
              std::span<const std::span<double>> grads, double learning_rate,
              double momentum, SgdVelocity& velocity);

}  // namespace hostload

#endif  // HOSTLOAD_NN_CORE_HPP_
