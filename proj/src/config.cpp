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

#include "config.hpp"

#include <fstream>

#include "errors.hpp"
#include "json_util.hpp"
#include "spec_json.hpp"

namespace kinolab {

namespace {

void read_range(const Json& j, const char* key, std::array<double, 2>& out) {
  if (auto it = j.find(key); it != j.end()) {
    if (!it->is_array() || it->size() != 2) {
      throw ConfigError(std::string("expected [lo, hi] for '") + key + "'");
    }
    out[0] = (*it)[0].get<double>();
    out[1] = (*it)[1].get<double>();
  }
}

Json range_json(const std::array<double, 2>& r) {
  return Json::array({r[0], r[1]});
}

void parse_env(const Json& j, env::EnvOptions& e) {
  reject_unknown_keys(
      j, "env",
      {"control_dt", "substeps", "episode_length_s", "gravity", "contact",
       "fall_height_ratio", "fall_tilt", "scale_rewards_by_dt", "gait",
       "target_foot_height", "target_height_offset", "lock_arms",
       "nominal_friction", "nominal_mass_scale", "nominal_gain_scale"});
  read_field(j, "control_dt", e.control_dt);
  read_field(j, "substeps", e.substeps);
  read_field(j, "episode_length_s", e.episode_length_s);
  read_field(j, "gravity", e.gravity);
  if (auto it = j.find("contact"); it != j.end()) {
    reject_unknown_keys(*it, "env.contact",
                        {"stiffness", "damping", "tangential_damping"});
    read_field(*it, "stiffness", e.contact.stiffness);
    read_field(*it, "damping", e.contact.damping);
    read_field(*it, "tangential_damping", e.contact.tangential_damping);
  }
  read_field(j, "fall_height_ratio", e.fall_height_ratio);
  read_field(j, "fall_tilt", e.fall_tilt);
  read_field(j, "scale_rewards_by_dt", e.scale_rewards_by_dt);
  if (auto it = j.find("gait"); it != j.end()) {
    reject_unknown_keys(*it, "env.gait",
                        {"swing_ramp", "hip_swing_gain", "knee_swing_gain",
                         "arm_swing_gain", "cycle_ref"});
    read_field(*it, "swing_ramp", e.gait.swing_ramp);
    read_field(*it, "hip_swing_gain", e.gait.hip_swing_gain);
    read_field(*it, "knee_swing_gain", e.gait.knee_swing_gain);
    read_field(*it, "arm_swing_gain", e.gait.arm_swing_gain);
    read_field(*it, "cycle_ref", e.gait.cycle_ref);
  }
  read_field(j, "target_foot_height", e.target_foot_height);
  read_field(j, "target_height_offset", e.target_height_offset);
  read_field(j, "lock_arms", e.lock_arms);
  read_field(j, "nominal_friction", e.nominal_friction);
  read_field(j, "nominal_mass_scale", e.nominal_mass_scale);
  read_field(j, "nominal_gain_scale", e.nominal_gain_scale);
}

Json env_json(const env::EnvOptions& e) {
  Json j;
  j["control_dt"] = e.control_dt;
  j["substeps"] = e.substeps;
  j["episode_length_s"] = e.episode_length_s;
  j["gravity"] = e.gravity;
  j["contact"]["stiffness"] = e.contact.stiffness;
  j["contact"]["damping"] = e.contact.damping;
  j["contact"]["tangential_damping"] = e.contact.tangential_damping;
  j["fall_height_ratio"] = e.fall_height_ratio;
  j["fall_tilt"] = e.fall_tilt;
  j["scale_rewards_by_dt"] = e.scale_rewards_by_dt;
  j["gait"]["swing_ramp"] = e.gait.swing_ramp;
  j["gait"]["hip_swing_gain"] = e.gait.hip_swing_gain;
  j["gait"]["knee_swing_gain"] = e.gait.knee_swing_gain;
  j["gait"]["arm_swing_gain"] = e.gait.arm_swing_gain;
  j["gait"]["cycle_ref"] = e.gait.cycle_ref;
  j["target_foot_height"] = e.target_foot_height;
  j["target_height_offset"] = e.target_height_offset;
  j["lock_arms"] = e.lock_arms;
  j["nominal_friction"] = e.nominal_friction;
  j["nominal_mass_scale"] = e.nominal_mass_scale;
  j["nominal_gain_scale"] = e.nominal_gain_scale;
  return j;
}

void parse_dr(const Json& j, env::DomainRandomizationConfig& d) {
  reject_unknown_keys(
      j, "domain_randomization",
      {"enabled", "friction_range", "mass_scale_range", "gain_scale_range",
       "push_enabled", "push_interval_range", "push_velocity_max",
       "push_angular_max", "noise_enabled", "noise_joint_pos",
       "noise_joint_vel", "noise_ang_vel", "noise_euler", "reset_joint_noise",
       "reset_height_noise"});
  read_field(j, "enabled", d.enabled);
  read_range(j, "friction_range", d.friction_range);
  read_range(j, "mass_scale_range", d.mass_scale_range);
  read_range(j, "gain_scale_range", d.gain_scale_range);
  read_field(j, "push_enabled", d.push_enabled);
  read_range(j, "push_interval_range", d.push_interval_range);
  read_field(j, "push_velocity_max", d.push_velocity_max);
  read_field(j, "push_angular_max", d.push_angular_max);
  read_field(j, "noise_enabled", d.noise_enabled);
  read_field(j, "noise_joint_pos", d.noise_joint_pos);
  read_field(j, "noise_joint_vel", d.noise_joint_vel);
  read_field(j, "noise_ang_vel", d.noise_ang_vel);
  read_field(j, "noise_euler", d.noise_euler);
  read_field(j, "reset_joint_noise", d.reset_joint_noise);
  read_field(j, "reset_height_noise", d.reset_height_noise);
}

Json dr_json(const env::DomainRandomizationConfig& d) {
  Json j;
  j["enabled"] = d.enabled;
  j["friction_range"] = range_json(d.friction_range);
  j["mass_scale_range"] = range_json(d.mass_scale_range);
  j["gain_scale_range"] = range_json(d.gain_scale_range);
  j["push_enabled"] = d.push_enabled;
  j["push_interval_range"] = range_json(d.push_interval_range);
  j["push_velocity_max"] = d.push_velocity_max;
  j["push_angular_max"] = d.push_angular_max;
  j["noise_enabled"] = d.noise_enabled;
  j["noise_joint_pos"] = d.noise_joint_pos;
  j["noise_joint_vel"] = d.noise_joint_vel;
  j["noise_ang_vel"] = d.noise_ang_vel;
  j["noise_euler"] = d.noise_euler;
  j["reset_joint_noise"] = d.reset_joint_noise;
  j["reset_height_noise"] = d.reset_height_noise;
  return j;
}

void parse_rewards(const Json& j, rewards::RewardParams& p) {
  reject_unknown_keys(j, "rewards", {"weights", "constants"});
  if (auto w = j.find("weights"); w != j.end()) {
    reject_unknown_keys(*w, "rewards.weights",
                        {"alpha_a", "alpha_v", "alpha_c", "alpha_b", "alpha_f",
                         "alpha_p", "general"});
    read_field(*w, "alpha_a", p.weights.alpha_a);
    read_field(*w, "alpha_v", p.weights.alpha_v);
    read_field(*w, "alpha_c", p.weights.alpha_c);
    read_field(*w, "alpha_b", p.weights.alpha_b);
    read_field(*w, "alpha_f", p.weights.alpha_f);
    read_field(*w, "alpha_p", p.weights.alpha_p);
    if (auto g = w->find("general"); g != w->end()) {
      if (!g->is_object()) throw ConfigError("rewards.weights.general: object");
      // Known term names only; anything else is a config typo.
      reject_unknown_keys(*g, "rewards.weights.general",
                          {"action_rate", "alive", "orientation", "torque",
                           "velocity_tracking", "yaw_tracking"});
      for (const auto& [key, value] : g->items()) {
        p.weights.general_term_weights[key] = value.get<double>();
      }
    }
  }
  if (auto c = j.find("constants"); c != j.end()) {
    reject_unknown_keys(
        *c, "rewards.constants",
        {"momentum_clip", "momentum_yaw_only", "base_height_beta",
         "base_height_gamma", "joint_pos_beta", "joint_pos_gamma",
         "joint_pos_clip", "joint_vel_exponent_clamp",
         "feet_clearance_bounded", "tracking_sigma", "yaw_tracking_sigma",
         "penalty_floor", "fixed_velocity_ratio"});
    std::array<double, 2> clip{p.constants.momentum_clip_lo,
                               p.constants.momentum_clip_hi};
    read_range(*c, "momentum_clip", clip);
    p.constants.momentum_clip_lo = clip[0];
    p.constants.momentum_clip_hi = clip[1];
    read_field(*c, "momentum_yaw_only", p.constants.momentum_yaw_only);
    read_field(*c, "base_height_beta", p.constants.base_height_beta);
    read_field(*c, "base_height_gamma", p.constants.base_height_gamma);
    read_field(*c, "joint_pos_beta", p.constants.joint_pos_beta);
    read_field(*c, "joint_pos_gamma", p.constants.joint_pos_gamma);
    std::array<double, 2> jclip{p.constants.joint_pos_clip_lo,
                                p.constants.joint_pos_clip_hi};
    read_range(*c, "joint_pos_clip", jclip);
    p.constants.joint_pos_clip_lo = jclip[0];
    p.constants.joint_pos_clip_hi = jclip[1];
    read_field(*c, "joint_vel_exponent_clamp",
               p.constants.joint_vel_exponent_clamp);
    read_field(*c, "feet_clearance_bounded", p.constants.feet_clearance_bounded);
    read_field(*c, "tracking_sigma", p.constants.tracking_sigma);
    read_field(*c, "yaw_tracking_sigma", p.constants.yaw_tracking_sigma);
    read_field(*c, "penalty_floor", p.constants.penalty_floor);
    read_field(*c, "fixed_velocity_ratio", p.constants.fixed_velocity_ratio);
  }
}

Json rewards_json(const rewards::RewardParams& p) {
  Json j;
  j["weights"]["alpha_a"] = p.weights.alpha_a;
  j["weights"]["alpha_v"] = p.weights.alpha_v;
  j["weights"]["alpha_c"] = p.weights.alpha_c;
  j["weights"]["alpha_b"] = p.weights.alpha_b;
  j["weights"]["alpha_f"] = p.weights.alpha_f;
  j["weights"]["alpha_p"] = p.weights.alpha_p;
  Json general;
  for (const auto& [name, weight] : p.weights.general_term_weights) {
    general[name] = weight;
  }
  j["weights"]["general"] = general;
  j["constants"]["momentum_clip"] =
      Json::array({p.constants.momentum_clip_lo, p.constants.momentum_clip_hi});
  j["constants"]["momentum_yaw_only"] = p.constants.momentum_yaw_only;
  j["constants"]["base_height_beta"] = p.constants.base_height_beta;
  j["constants"]["base_height_gamma"] = p.constants.base_height_gamma;
  j["constants"]["joint_pos_beta"] = p.constants.joint_pos_beta;
  j["constants"]["joint_pos_gamma"] = p.constants.joint_pos_gamma;
  j["constants"]["joint_pos_clip"] = Json::array(
      {p.constants.joint_pos_clip_lo, p.constants.joint_pos_clip_hi});
  j["constants"]["joint_vel_exponent_clamp"] =
      p.constants.joint_vel_exponent_clamp;
  j["constants"]["feet_clearance_bounded"] = p.constants.feet_clearance_bounded;
  j["constants"]["tracking_sigma"] = p.constants.tracking_sigma;
  j["constants"]["yaw_tracking_sigma"] = p.constants.yaw_tracking_sigma;
  j["constants"]["penalty_floor"] = p.constants.penalty_floor;
  j["constants"]["fixed_velocity_ratio"] = p.constants.fixed_velocity_ratio;
  return j;
}

void parse_curriculum(const Json& j, curriculum::CurriculumState& c,
                      trainer::TrainerConfig& t) {
  reject_unknown_keys(j, "curriculum",
                      {"v_min", "v_max", "v_cap", "v_increment", "cycle_time",
                       "cycle_shrink", "cycle_floor", "lambda_threshold",
                       "lateral_range", "yaw_range", "velocity_enabled",
                       "cycle_enabled"});
  read_field(j, "v_min", c.v_min);
  read_field(j, "v_max", c.v_max);
  read_field(j, "v_cap", c.v_cap);
  read_field(j, "v_increment", c.v_increment);
  read_field(j, "cycle_time", c.cycle_time);
  read_field(j, "cycle_shrink", c.cycle_shrink);
  read_field(j, "cycle_floor", c.cycle_floor);
  read_field(j, "lambda_threshold", c.lambda_threshold);
  read_field(j, "lateral_range", c.lateral_range);
  read_field(j, "yaw_range", c.yaw_range);
  read_field(j, "velocity_enabled", t.velocity_curriculum);
  read_field(j, "cycle_enabled", t.cycle_time_curriculum);
}

Json curriculum_json(const curriculum::CurriculumState& c,
                     const trainer::TrainerConfig& t) {
  Json j;
  j["v_min"] = c.v_min;
  j["v_max"] = c.v_max;
  j["v_cap"] = c.v_cap;
  j["v_increment"] = c.v_increment;
  j["cycle_time"] = c.cycle_time;
  j["cycle_shrink"] = c.cycle_shrink;
  j["cycle_floor"] = c.cycle_floor;
  j["lambda_threshold"] = c.lambda_threshold;
  j["lateral_range"] = c.lateral_range;
  j["yaw_range"] = c.yaw_range;
  j["velocity_enabled"] = t.velocity_curriculum;
  j["cycle_enabled"] = t.cycle_time_curriculum;
  return j;
}

void parse_trainer(const Json& j, trainer::TrainerConfig& t) {
  reject_unknown_keys(
      j, "trainer",
      {"num_envs", "horizon", "minibatch_size", "epochs", "max_iterations",
       "discount", "gae_lambda", "entropy_coeff", "learning_rate",
       "clip_ratio", "value_coeff", "max_grad_norm", "seed",
       "normalize_advantages", "normalize_observations", "checkpoint_interval",
       "actor_hidden", "critic_hidden", "init_log_std", "min_log_std"});
  read_field(j, "num_envs", t.num_envs);
  read_field(j, "horizon", t.horizon);
  read_field(j, "minibatch_size", t.minibatch_size);
  read_field(j, "epochs", t.epochs);
  read_field(j, "max_iterations", t.max_iterations);
  read_field(j, "discount", t.discount);
  read_field(j, "gae_lambda", t.gae_lambda);
  read_field(j, "entropy_coeff", t.entropy_coeff);
  read_field(j, "learning_rate", t.learning_rate);
  read_field(j, "clip_ratio", t.clip_ratio);
  read_field(j, "value_coeff", t.value_coeff);
  read_field(j, "max_grad_norm", t.max_grad_norm);
  read_field(j, "seed", t.seed);
  read_field(j, "normalize_advantages", t.normalize_advantages);
  read_field(j, "normalize_observations", t.normalize_observations);
  read_field(j, "checkpoint_interval", t.checkpoint_interval);
  read_field(j, "actor_hidden", t.actor_hidden);
  read_field(j, "critic_hidden", t.critic_hidden);
  read_field(j, "init_log_std", t.init_log_std);
  read_field(j, "min_log_std", t.min_log_std);
}

Json trainer_json(const trainer::TrainerConfig& t) {
  Json j;
  j["num_envs"] = t.num_envs;
  j["horizon"] = t.horizon;
  j["minibatch_size"] = t.minibatch_size;
  j["epochs"] = t.epochs;
  j["max_iterations"] = t.max_iterations;
  j["discount"] = t.discount;
  j["gae_lambda"] = t.gae_lambda;
  j["entropy_coeff"] = t.entropy_coeff;
  j["learning_rate"] = t.learning_rate;
  j["clip_ratio"] = t.clip_ratio;
  j["value_coeff"] = t.value_coeff;
  j["max_grad_norm"] = t.max_grad_norm;
  j["seed"] = t.seed;
  j["normalize_advantages"] = t.normalize_advantages;
  j["normalize_observations"] = t.normalize_observations;
  j["checkpoint_interval"] = t.checkpoint_interval;
  j["actor_hidden"] = t.actor_hidden;
  j["critic_hidden"] = t.critic_hidden;
  j["init_log_std"] = t.init_log_std;
  j["min_log_std"] = t.min_log_std;
  return j;
}

void parse_eval(const Json& j, EvalConfig& e) {
  reject_unknown_keys(j, "evaluation",
                      {"grid", "episodes_per_point", "episode_length_s",
                       "warmup_s", "log_trajectories"});
  read_field(j, "grid", e.grid);
  read_field(j, "episodes_per_point", e.episodes_per_point);
  read_field(j, "episode_length_s", e.episode_length_s);
  read_field(j, "warmup_s", e.warmup_s);
  read_field(j, "log_trajectories", e.log_trajectories);
}

Json eval_json(const EvalConfig& e) {
  Json j;
  j["grid"] = e.grid;
  j["episodes_per_point"] = e.episodes_per_point;
  j["episode_length_s"] = e.episode_length_s;
  j["warmup_s"] = e.warmup_s;
  j["log_trajectories"] = e.log_trajectories;
  return j;
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  reject_unknown_keys(j, "config",
                      {"run_name", "output_root", "seeds", "robot", "env",
                       "domain_randomization", "rewards", "curriculum",
                       "trainer", "evaluation"});
  RunConfig cfg;
  read_field(j, "run_name", cfg.run_name);
  read_field(j, "output_root", cfg.output_root);
  read_field(j, "seeds", cfg.seeds);
  if (auto it = j.find("robot"); it != j.end()) {
    if (it->is_string()) {
      cfg.robot = env::RobotSpec::from_json_file(it->get<std::string>());
    } else {
      cfg.robot = env::robot_spec_from_json(*it);
    }
  }
  if (auto it = j.find("env"); it != j.end()) parse_env(*it, cfg.env_options);
  if (auto it = j.find("domain_randomization"); it != j.end()) {
    parse_dr(*it, cfg.domain_randomization);
  }
  if (auto it = j.find("rewards"); it != j.end()) {
    parse_rewards(*it, cfg.reward_params);
  }
  if (auto it = j.find("curriculum"); it != j.end()) {
    parse_curriculum(*it, cfg.curriculum, cfg.trainer_config);
  }
  if (auto it = j.find("trainer"); it != j.end()) {
    parse_trainer(*it, cfg.trainer_config);
  }
  if (auto it = j.find("evaluation"); it != j.end()) parse_eval(*it, cfg.eval);
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_json_text(text);
}

std::string RunConfig::to_json_text() const {
  Json j;
  j["run_name"] = run_name;
  j["output_root"] = output_root;
  j["seeds"] = seeds;
  j["robot"] = env::robot_spec_to_json(robot);
  j["env"] = env_json(env_options);
  j["domain_randomization"] = dr_json(domain_randomization);
  j["rewards"] = rewards_json(reward_params);
  j["curriculum"] = curriculum_json(curriculum, trainer_config);
  j["trainer"] = trainer_json(trainer_config);
  j["evaluation"] = eval_json(eval);
  return j.dump(2);
}

void RunConfig::validate() const {
  if (run_name.empty()) throw ConfigError("config: run_name must not be empty");
  if (seeds.empty()) throw ConfigError("config: seeds must not be empty");
  robot.validate();
  domain_randomization.validate();
  curriculum::validate(curriculum);
  trainer_config.validate();
  if (eval.grid.empty()) throw ConfigError("config: evaluation.grid is empty");
  if (eval.episodes_per_point < 1) {
    throw ConfigError("config: evaluation.episodes_per_point must be >= 1");
  }
  if (!(env_options.control_dt > 0.0) || env_options.substeps < 1) {
    throw ConfigError("config: env.control_dt and env.substeps must be positive");
  }
  if (reward_params.constants.momentum_clip_lo >
      reward_params.constants.momentum_clip_hi) {
    throw ConfigError("config: rewards momentum_clip bounds are inverted");
  }
}

}  // namespace kinolab
