// Copyright 2026 The Kinolab Authors
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

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rng.hpp"

namespace kinolab::trainer {

// Dense tanh MLP with explicit backprop, batched over matrix rows.
class Mlp {
 public:
  Mlp() = default;
  Mlp(int input_dim, std::vector<int> hidden, int output_dim);

  // Orthogonal-style initialization; the output layer is scaled by
  // `final_scale`.
  void init(Rng& rng, double final_scale = 1.0);

  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }
  const std::vector<int>& hidden() const { return hidden_; }
  int num_layers() const { return static_cast<int>(weights_.size()); }

  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;

  struct Cache {
    std::vector<Eigen::MatrixXd> activations;  // [0]=input, then post-tanh
  };
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Cache& cache) const;

  struct Grads {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::RowVectorXd> biases;
    void setZero();
  };
  Grads make_grads() const;

  // Accumulates into `grads`; cache must come from forward() on the same
  // input.
  void backward(const Cache& cache, const Eigen::MatrixXd& dout,
                Grads& grads) const;

  std::vector<Eigen::MatrixXd>& weights() { return weights_; }
  std::vector<Eigen::RowVectorXd>& biases() { return biases_; }
  const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
  const std::vector<Eigen::RowVectorXd>& biases() const { return biases_; }

 private:
  int input_dim_ = 0;
  int output_dim_ = 0;
  std::vector<int> hidden_;
  std::vector<Eigen::MatrixXd> weights_;     // (in, out) per layer
  std::vector<Eigen::RowVectorXd> biases_;
};

// Adam over an arbitrary list of tensors; moment buffers are keyed by
// position, so the tensor list must be stable across steps.
class Adam {
 public:
  Adam(double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(const std::vector<Eigen::Map<Eigen::VectorXd>>& params,
            const std::vector<Eigen::Map<const Eigen::VectorXd>>& grads,
            double lr);

  void reset();

 private:
  double beta1_, beta2_, eps_;
  long step_count_ = 0;
  std::vector<Eigen::VectorXd> m_, v_;
};

}  // namespace kinolab::trainer
