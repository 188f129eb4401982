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

#include "evaluation.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "env.hpp"
#include "errors.hpp"
#include "json_util.hpp"
#include "metrics.hpp"
#include "plots.hpp"

namespace kinolab::evaluation {

namespace {

std::string trajectory_record_json(const env::TrajectoryRecord& r, int point,
                                   int episode) {
  Json j;
  j["point"] = point;
  j["episode"] = episode;
  j["time"] = r.time;
  j["phase"] = r.phase;
  j["command"] = Json::array({r.command.vx, r.command.vy, r.command.yaw_rate});
  j["base_position"] = vec3_json(r.base_position);
  j["base_quaternion"] =
      Json::array({r.base_orientation.w(), r.base_orientation.x(),
                   r.base_orientation.y(), r.base_orientation.z()});
  j["base_lin_velocity"] = vec3_json(r.base_lin_velocity);
  j["base_ang_velocity"] = vec3_json(r.base_ang_velocity);
  j["heading_velocity"] = r.heading_velocity;
  Json q = Json::array(), dq = Json::array(), act = Json::array();
  for (int i = 0; i < r.joint_positions.size(); ++i) {
    q.push_back(r.joint_positions[i]);
    dq.push_back(r.joint_velocities[i]);
    act.push_back(r.action[i]);
  }
  j["joint_positions"] = q;
  j["joint_velocities"] = dq;
  j["actions"] = act;
  j["momentum_total"] = vec3_json(r.momentum.total);
  Json groups;
  for (int g = 0; g < kinodyn::kNumGroups; ++g) {
    groups[kinodyn::group_name(static_cast<kinodyn::LinkGroup>(g))] =
        vec3_json(r.momentum.per_group[g]);
  }
  j["momentum_groups"] = groups;
  j["reward_total"] = r.breakdown.total;
  Json terms;
  terms["angular_momentum"] = r.breakdown.angular_momentum.raw;
  terms["base_height"] = r.breakdown.base_height.raw;
  terms["feet_clearance"] = r.breakdown.feet_clearance.raw;
  terms["joint_position"] = r.breakdown.joint_position.raw;
  for (const auto& [name, term] : r.breakdown.general) terms[name] = term.raw;
  j["reward_terms"] = terms;
  j["foot_contact"] = Json::array({r.foot_contact[0], r.foot_contact[1]});
  j["termination"] = static_cast<int>(r.termination);
  return j.dump();
}

}  // namespace

PerturbationProfile PerturbationProfile::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open perturbation profile: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("perturbation profile '" + path + "': " + e.what());
  }
  reject_unknown_keys(j, "perturbation profile",
                      {"contact_stiffness_scale", "contact_damping_scale",
                       "friction_scale", "mass_scale", "gravity_scale",
                       "substep_multiplier"});
  PerturbationProfile p;
  read_field(j, "contact_stiffness_scale", p.contact_stiffness_scale);
  read_field(j, "contact_damping_scale", p.contact_damping_scale);
  read_field(j, "friction_scale", p.friction_scale);
  read_field(j, "mass_scale", p.mass_scale);
  read_field(j, "gravity_scale", p.gravity_scale);
  read_field(j, "substep_multiplier", p.substep_multiplier);
  if (p.substep_multiplier < 1) {
    throw ConfigError("perturbation profile: substep_multiplier must be >= 1");
  }
  return p;
}

std::string PerturbationProfile::to_json_text() const {
  Json j;
  j["contact_stiffness_scale"] = contact_stiffness_scale;
  j["contact_damping_scale"] = contact_damping_scale;
  j["friction_scale"] = friction_scale;
  j["mass_scale"] = mass_scale;
  j["gravity_scale"] = gravity_scale;
  j["substep_multiplier"] = substep_multiplier;
  return j.dump(2);
}

std::string EvaluationReport::to_csv() const {
  std::ostringstream out;
  out << "commanded,mean_velocity,std_velocity,fall_rate,tracking_error_l1,"
         "mean_abs_yaw_momentum,torso,left_arm,right_arm,left_leg,right_leg,"
         "episodes\n";
  for (const auto& r : rows) {
    out << format_double(r.commanded) << ',' << format_double(r.mean_velocity)
        << ',' << format_double(r.std_velocity) << ','
        << format_double(r.fall_rate) << ','
        << format_double(r.tracking_error_l1) << ','
        << format_double(r.mean_abs_yaw_momentum);
    for (int g = 0; g < kinodyn::kNumGroups; ++g) {
      out << ',' << format_double(r.mean_group_momentum[g]);
    }
    out << ',' << r.episodes << "\n";
  }
  return out.str();
}

double EvaluationReport::highest_reached_velocity() const {
  double best = rows.empty() ? 0.0 : rows.front().commanded;
  for (const auto& r : rows) {
    if (r.fall_rate < 0.5 && r.commanded > best) best = r.commanded;
  }
  return best;
}

trainer::Checkpoint load_biped_checkpoint(const std::string& path) {
  trainer::Checkpoint ckpt = trainer::load_checkpoint(path);
  if (ckpt.policy.config.obs_dim != env::kStackedObsDim ||
      ckpt.policy.config.priv_dim != env::kStackedPrivDim ||
      ckpt.policy.config.action_dim != env::kNumJoints) {
    throw CheckpointError(
        "checkpoint dimensions do not match the biped observation space");
  }
  return ckpt;
}

EvaluationReport evaluate_checkpoint(const RunConfig& config,
                                     const trainer::Checkpoint& ckpt,
                                     const std::vector<double>& grid,
                                     int episodes_per_point, std::uint64_t seed,
                                     const std::optional<std::string>& out_dir,
                                     const PerturbationProfile& profile) {
  if (grid.empty()) throw InvalidInput("evaluate_checkpoint: empty grid");
  if (ckpt.policy.config.obs_dim != env::kStackedObsDim) {
    throw CheckpointError(
        "checkpoint observation dimensions do not match the environment");
  }

  // Nominal physics, no randomization: evaluation is deterministic.
  env::DomainRandomizationConfig dr;
  dr.enabled = false;
  dr.push_enabled = false;
  dr.noise_enabled = false;

  env::EnvOptions options = config.env_options;
  options.contact.stiffness *= profile.contact_stiffness_scale;
  options.contact.damping *= profile.contact_damping_scale;
  options.nominal_friction *= profile.friction_scale;
  options.nominal_mass_scale *= profile.mass_scale;
  options.gravity *= profile.gravity_scale;
  options.substeps *= profile.substep_multiplier;
  options.episode_length_s = config.eval.episode_length_s;

  curriculum::CurriculumState cur = ckpt.curriculum;
  cur.lateral_range = 0.0;
  cur.yaw_range = 0.0;

  const int warmup_steps =
      static_cast<int>(config.eval.warmup_s / options.control_dt);
  const int episode_steps =
      static_cast<int>(config.eval.episode_length_s / options.control_dt);

  std::ofstream traj;
  if (out_dir && config.eval.log_trajectories) {
    std::filesystem::create_directories(*out_dir);
    traj.open(*out_dir + "/trajectories.jsonl", std::ios::trunc);
    Json header;
    header["schema"] = "kinolab.trajectory.v1";
    header["control_dt"] = options.control_dt;
    header["grid"] = grid;
    traj << header.dump() << "\n";
  }

  EvaluationReport report;
  report.cycle_time = ckpt.curriculum.cycle_time;
  report.seed = seed;

  std::vector<double> obs(env::kStackedObsDim), norm_obs(env::kStackedObsDim);

  for (size_t point = 0; point < grid.size(); ++point) {
    EvalRow row;
    row.commanded = grid[point];
    row.episodes = episodes_per_point;

    std::vector<double> episode_velocity(episodes_per_point, 0.0);
    int falls = 0;
    double err_sum = 0.0;
    double yaw_momentum_sum = 0.0;
    std::array<double, kinodyn::kNumGroups> group_sum{};
    long momentum_samples = 0;

    for (int ep = 0; ep < episodes_per_point; ++ep) {
      Rng seeder(seed);
      const std::uint64_t env_seed =
          seeder.spawn(1000 * point + ep).integer(UINT64_MAX);
      env::Environment environment(config.robot, dr, config.reward_params,
                                   options, env_seed);
      environment.set_curriculum(cur);
      environment.reset();
      environment.set_command({grid[point], 0.0, 0.0});

      bool fell = false;
      double vel_sum = 0.0;
      double abs_err_sum = 0.0;
      int measured = 0;
      Rng unused(0);

      for (int step = 0; step < episode_steps; ++step) {
        environment.write_observation(obs.data());
        ckpt.obs_normalizer.normalize(obs.data(), norm_obs.data());
        const Eigen::Map<const Eigen::VectorXd> obs_vec(norm_obs.data(),
                                                        env::kStackedObsDim);
        const auto [action, logp] =
            ckpt.policy.act(obs_vec, unused, /*deterministic=*/true);
        const auto result = environment.step(action);
        const auto& record = environment.last_record();

        if (step >= warmup_steps) {
          vel_sum += record.heading_velocity;
          abs_err_sum += std::abs(record.heading_velocity - grid[point]);
          yaw_momentum_sum += std::abs(record.momentum.total.z());
          for (int g = 0; g < kinodyn::kNumGroups; ++g) {
            group_sum[g] += record.momentum.per_group[g].norm();
          }
          ++momentum_samples;
          ++measured;
        }
        if (traj.is_open()) {
          traj << trajectory_record_json(record, static_cast<int>(point), ep)
               << "\n";
        }
        if (result.done) {
          fell = result.termination == env::Termination::kFell ||
                 result.termination == env::Termination::kFault;
          break;
        }
      }

      if (fell) {
        // Fall-as-zero evaluation rule.
        episode_velocity[ep] = 0.0;
        err_sum += std::abs(grid[point]);
        ++falls;
      } else {
        episode_velocity[ep] = measured > 0 ? vel_sum / measured : 0.0;
        err_sum += measured > 0 ? abs_err_sum / measured : std::abs(grid[point]);
      }
    }

    double mean = 0.0;
    for (double v : episode_velocity) mean += v;
    mean /= episodes_per_point;
    double var = 0.0;
    for (double v : episode_velocity) var += (v - mean) * (v - mean);
    var /= episodes_per_point;

    row.mean_velocity = mean;
    row.std_velocity = std::sqrt(var);
    row.fall_rate = static_cast<double>(falls) / episodes_per_point;
    row.tracking_error_l1 = err_sum / episodes_per_point;
    row.mean_abs_yaw_momentum =
        momentum_samples > 0 ? yaw_momentum_sum / momentum_samples : 0.0;
    for (int g = 0; g < kinodyn::kNumGroups; ++g) {
      row.mean_group_momentum[g] =
          momentum_samples > 0 ? group_sum[g] / momentum_samples : 0.0;
    }
    report.rows.push_back(row);
  }

  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    write_file_atomic(*out_dir + "/report.csv", report.to_csv());
    plots::write_velocity_tracking(*out_dir + "/velocity_tracking.svg", report);
    plots::write_momentum_decomposition(
        *out_dir + "/momentum_decomposition.svg", report);
  }
  return report;
}

}  // namespace kinolab::evaluation
