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

// Fully connected network with ELU hidden layers and a linear output layer.
// The network object only describes shapes; parameters live in a caller-owned
// flat vector so optimizers and checkpoints see one contiguous block.

#ifndef TILTRL_MLP_H_
#define TILTRL_MLP_H_

#include <random>
#include <vector>

#include <Eigen/Core>

namespace tiltrl {

class Mlp {
 public:
  Mlp() = default;
  Mlp(int input_size, std::vector<int> hidden_sizes, int output_size);

  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  int num_layers() const { return static_cast<int>(sizes_.size()) - 1; }
  // Layer widths including input and output.
  const std::vector<int>& sizes() const { return sizes_; }
  int num_params() const { return num_params_; }

  // Orthogonal weights with `hidden_gain` on hidden layers and `output_gain`
  // on the last layer; zero biases.
  void Initialize(std::mt19937_64& rng, double hidden_gain, double output_gain,
                  double* params) const;

  // Intermediate values kept for the backward pass.
  struct Cache {
    std::vector<Eigen::MatrixXd> inputs;  // input to each layer
  };

  // `x` is input_size x batch. When `cache` is null nothing is stored.
  Eigen::MatrixXd Forward(const double* params, const Eigen::MatrixXd& x,
                          Cache* cache) const;

  // Adds dLoss/dparams to `grad` given dLoss/doutput.
  void Backward(const double* params, const Cache& cache,
                const Eigen::MatrixXd& d_output, double* grad) const;

 private:
  int WeightOffset(int layer) const { return offsets_[layer]; }
  int BiasOffset(int layer) const {
    return offsets_[layer] + sizes_[layer + 1] * sizes_[layer];
  }

  std::vector<int> sizes_;
  std::vector<int> offsets_;
  int num_params_ = 0;
};

}  // namespace tiltrl

#endif  // TILTRL_MLP_H_
