// Copyright 2026 The tiltrl Authors
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

#include "tiltrl/mlp.h"

#include <cmath>

#include <Eigen/QR>

#include "tiltrl/error.h"
#include "tiltrl/random.h"

namespace tiltrl {
namespace {

using ConstMatrixMap = Eigen::Map<const Eigen::MatrixXd>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;

void EluInPlace(Eigen::MatrixXd* x) {
  // max(v, 0) + exp(min(v, 0)) - 1 keeps Eigen's packet exp in use; a
  // select() over both branches does not vectorize.
  x->array() = x->array().cwiseMax(0.0) + (x->array().cwiseMin(0.0).exp() - 1.0);
}

// Rows x cols matrix with orthonormal rows or columns (whichever is fewer).
Eigen::MatrixXd Orthogonal(std::mt19937_64& rng, int rows, int cols) {
  const int n = std::max(rows, cols);
  const int m = std::min(rows, cols);
  Eigen::MatrixXd a(n, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) a(i, j) = StandardNormal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, m);
  // Sign fix makes the distribution uniform (Haar).
  const Eigen::MatrixXd r = qr.matrixQR();
  for (int j = 0; j < m; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  if (rows < cols) return q.transpose();
  return q;
}

}  // namespace

Mlp::Mlp(int input_size, std::vector<int> hidden_sizes, int output_size) {
  if (input_size < 1 || output_size < 1) {
    throw Error(ErrorCode::kInvalidArgument, "layer sizes must be positive");
  }
  sizes_.push_back(input_size);
  for (int h : hidden_sizes) {
    if (h < 1) throw Error(ErrorCode::kInvalidArgument, "hidden size < 1");
    sizes_.push_back(h);
  }
  sizes_.push_back(output_size);
  for (int l = 0; l < num_layers(); ++l) {
    offsets_.push_back(num_params_);
    num_params_ += sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
  }
}

void Mlp::Initialize(std::mt19937_64& rng, double hidden_gain,
                     double output_gain, double* params) const {
  for (int l = 0; l < num_layers(); ++l) {
    const int out = sizes_[l + 1];
    const int in = sizes_[l];
    const double gain = l + 1 == num_layers() ? output_gain : hidden_gain;
    Eigen::Map<Eigen::MatrixXd>(params + WeightOffset(l), out, in) =
        gain * Orthogonal(rng, out, in);
    Eigen::Map<Eigen::VectorXd>(params + BiasOffset(l), out).setZero();
  }
}

Eigen::MatrixXd Mlp::Forward(const double* params, const Eigen::MatrixXd& x,
                             Cache* cache) const {
  if (x.rows() != input_size()) {
    throw Error(ErrorCode::kInvalidArgument, "network input has wrong size");
  }
  if (cache != nullptr) cache->inputs.resize(num_layers());
  Eigen::MatrixXd h = x;
  for (int l = 0; l < num_layers(); ++l) {
    const int out = sizes_[l + 1];
    const int in = sizes_[l];
    const ConstMatrixMap w(params + WeightOffset(l), out, in);
    const ConstVectorMap b(params + BiasOffset(l), out);
    Eigen::MatrixXd z = w * h;
    z.colwise() += b;
    if (cache != nullptr) cache->inputs[l] = std::move(h);
    if (l + 1 < num_layers()) EluInPlace(&z);
    h = std::move(z);
  }
  return h;
}

void Mlp::Backward(const double* params, const Cache& cache,
                   const Eigen::MatrixXd& d_output, double* grad) const {
  Eigen::MatrixXd delta = d_output;
  for (int l = num_layers() - 1; l >= 0; --l) {
    const int out = sizes_[l + 1];
    const int in = sizes_[l];
    Eigen::Map<Eigen::MatrixXd>(grad + WeightOffset(l), out, in).noalias() +=
        delta * cache.inputs[l].transpose();
    Eigen::Map<Eigen::VectorXd>(grad + BiasOffset(l), out) +=
        delta.rowwise().sum();
    if (l == 0) break;
    const ConstMatrixMap w(params + WeightOffset(l), out, in);
    // ELU'(z) = 1 for z > 0 and exp(z) = ELU(z) + 1 otherwise, i.e.
    // min(y, 0) + 1 in terms of the cached output y = ELU(z).
    Eigen::MatrixXd upstream = w.transpose() * delta;
    upstream.array() *= cache.inputs[l].array().cwiseMin(0.0) + 1.0;
    delta = std::move(upstream);
  }
}

}  // namespace tiltrl
