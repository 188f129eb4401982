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

#include "net.hpp"

#include <cmath>

#include "errors.hpp"

namespace kinolab::trainer {

Mlp::Mlp(int input_dim, std::vector<int> hidden, int output_dim)
    : input_dim_(input_dim), output_dim_(output_dim), hidden_(std::move(hidden)) {
  int in = input_dim_;
  for (int h : hidden_) {
    weights_.emplace_back(Eigen::MatrixXd::Zero(in, h));
    biases_.emplace_back(Eigen::RowVectorXd::Zero(h));
    in = h;
  }
  weights_.emplace_back(Eigen::MatrixXd::Zero(in, output_dim_));
  biases_.emplace_back(Eigen::RowVectorXd::Zero(output_dim_));
}

void Mlp::init(Rng& rng, double final_scale) {
  for (size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd& w = weights_[l];
    Eigen::MatrixXd gauss(w.rows(), w.cols());
    for (Eigen::Index i = 0; i < gauss.rows(); ++i) {
      for (Eigen::Index j = 0; j < gauss.cols(); ++j) {
        gauss(i, j) = rng.normal();
      }
    }
    // Orthonormal columns (or rows for wide matrices) from a QR factorization.
    const bool tall = gauss.rows() >= gauss.cols();
    Eigen::MatrixXd a = tall ? gauss : Eigen::MatrixXd(gauss.transpose());
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
    // Fix the sign convention so the result is deterministic.
    Eigen::MatrixXd r = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      if (r(j, j) < 0) q.col(j) = -q.col(j);
    }
    w = tall ? q : Eigen::MatrixXd(q.transpose());
    const double scale = l + 1 == weights_.size() ? final_scale : 1.0;
    w *= scale;
    biases_[l].setZero();
  }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
  if (x.cols() != input_dim_) {
    throw InvalidInput("mlp forward: input width mismatch");
  }
  Eigen::MatrixXd h = x;
  for (size_t l = 0; l < weights_.size(); ++l) {
    h = (h * weights_[l]).rowwise() + biases_[l];
    if (l + 1 < weights_.size()) h = h.array().tanh().matrix();
  }
  return h;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x, Cache& cache) const {
  if (x.cols() != input_dim_) {
    throw InvalidInput("mlp forward: input width mismatch");
  }
  cache.activations.clear();
  cache.activations.push_back(x);
  Eigen::MatrixXd h = x;
  for (size_t l = 0; l < weights_.size(); ++l) {
    h = (h * weights_[l]).rowwise() + biases_[l];
    if (l + 1 < weights_.size()) {
      h = h.array().tanh().matrix();
      cache.activations.push_back(h);
    }
  }
  return h;
}

Mlp::Grads Mlp::make_grads() const {
  Grads g;
  for (size_t l = 0; l < weights_.size(); ++l) {
    g.weights.emplace_back(Eigen::MatrixXd::Zero(weights_[l].rows(), weights_[l].cols()));
    g.biases.emplace_back(Eigen::RowVectorXd::Zero(biases_[l].size()));
  }
  return g;
}

void Mlp::Grads::setZero() {
  for (auto& w : weights) w.setZero();
  for (auto& b : biases) b.setZero();
}

void Mlp::backward(const Cache& cache, const Eigen::MatrixXd& dout,
                   Grads& grads) const {
  const int layers = num_layers();
  Eigen::MatrixXd delta = dout;
  for (int l = layers - 1; l >= 0; --l) {
    const Eigen::MatrixXd& input = cache.activations[l];
    grads.weights[l] += input.transpose() * delta;
    grads.biases[l] += delta.colwise().sum();
    if (l > 0) {
      // Pull the gradient through tanh: act' = 1 - act^2.
      const Eigen::MatrixXd& act = cache.activations[l];
      delta = ((delta * weights_[l].transpose()).array() *
               (1.0 - act.array().square()))
                  .matrix();
    }
  }
}

void Adam::reset() {
  m_.clear();
  v_.clear();
  step_count_ = 0;
}

void Adam::step(const std::vector<Eigen::Map<Eigen::VectorXd>>& params,
                const std::vector<Eigen::Map<const Eigen::VectorXd>>& grads,
                double lr) {
  if (params.size() != grads.size()) {
    throw InvalidInput("adam: parameter/gradient list size mismatch");
  }
  if (m_.empty()) {
    for (const auto& p : params) {
      m_.emplace_back(Eigen::VectorXd::Zero(p.size()));
      v_.emplace_back(Eigen::VectorXd::Zero(p.size()));
    }
  }
  ++step_count_;
  const double bc1 = 1.0 - std::pow(beta1_, step_count_);
  const double bc2 = 1.0 - std::pow(beta2_, step_count_);
  for (size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grads[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grads[i].array().square().matrix();
    const Eigen::ArrayXd mhat = m_[i].array() / bc1;
    const Eigen::ArrayXd vhat = v_[i].array() / bc2;
    Eigen::Map<Eigen::VectorXd> p = params[i];
    p.array() -= lr * mhat / (vhat.sqrt() + eps_);
  }
}

}  // namespace kinolab::trainer
