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
#include <utility>
#include <vector>

#include "net.hpp"
#include "rng.hpp"

namespace kinolab::trainer {

// Asymmetric actor-critic: the actor reads the stacked observation, the
// critic reads the stacked privileged observation. Gaussian policy with a
// learned per-joint log standard deviation.

struct PolicyConfig {
  int obs_dim = 0;
  int priv_dim = 0;
  int action_dim = 0;
  std::vector<int> actor_hidden{512, 256, 128};
  std::vector<int> critic_hidden{512, 256, 128};
  double init_log_std = 0.0;            // ln(1.0)
  double min_log_std = -2.9957322735539909;  // ln(0.05)
  double actor_final_scale = 0.01;
};

class Policy {
 public:
  Policy() = default;
  Policy(const PolicyConfig& config, Rng& rng);

  Eigen::MatrixXd actor_mean(const Eigen::MatrixXd& obs) const {
    return actor.forward(obs);
  }
  Eigen::VectorXd values(const Eigen::MatrixXd& priv) const {
    return critic.forward(priv).col(0);
  }

  // Samples one action; deterministic mode returns the mean. Throws
  // InvalidInput on an observation shape mismatch.
  std::pair<Eigen::VectorXd, double> act(const Eigen::VectorXd& obs, Rng& rng,
                                         bool deterministic = false) const;

  // Row-wise Gaussian log density of `actions` under means and the policy's
  // log_std.
  Eigen::VectorXd log_prob(const Eigen::MatrixXd& mean,
                           const Eigen::MatrixXd& actions) const;

  // Closed-form entropy of one action distribution (shared by all states).
  double entropy() const;

  // Stable tensor list: actor weights/biases, critic weights/biases, log_std.
  std::vector<Eigen::Map<Eigen::VectorXd>> parameter_views();
  int num_params();

  void clamp_log_std();

  PolicyConfig config;
  Mlp actor;
  Mlp critic;
  Eigen::RowVectorXd log_std;
};

// Per-dimension running mean/variance (Welford) with a unit-variance prior
// pseudo-sample; normalized outputs are clipped to +-10.
class RunningNormalizer {
 public:
  RunningNormalizer() = default;
  explicit RunningNormalizer(int dim, bool enabled = true);

  void update(const double* x);
  void normalize(const double* in, double* out) const;
  int dim() const { return static_cast<int>(mean_.size()); }
  bool enabled() const { return enabled_; }

  Eigen::VectorXd mean_;
  Eigen::VectorXd m2_;
  double count_ = 1.0;
  bool enabled_ = true;
};

}  // namespace kinolab::trainer
