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

#include "kinolab/kinolab.h"

#include <cstring>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "curriculum.hpp"
#include "errors.hpp"
#include "kinodyn.hpp"
#include "rewards.hpp"

namespace {

thread_local std::string g_last_error = "";

kinolab_status fail(kinolab_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Maps C++ exceptions onto status codes at the library boundary.
template <typename Fn>
kinolab_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const kinolab::InvalidInput& e) {
    return fail(KINOLAB_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const kinolab::ConfigError& e) {
    return fail(KINOLAB_ERROR_CONFIG, e.what());
  } catch (const kinolab::CheckpointError& e) {
    return fail(KINOLAB_ERROR_CHECKPOINT, e.what());
  } catch (const kinolab::IoError& e) {
    return fail(KINOLAB_ERROR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(KINOLAB_ERROR_RUNTIME, e.what());
  } catch (...) {
    return fail(KINOLAB_ERROR_RUNTIME, "unknown error");
  }
}

void copy_out(const std::string& text, char* buffer, size_t size) {
  if (buffer == nullptr || size == 0) return;
  const size_t n = std::min(text.size(), size - 1);
  std::memcpy(buffer, text.data(), n);
  buffer[n] = '\0';
}

}  // namespace

struct kinolab_lab {
  kinolab::RunConfig config;
};

extern "C" {

const char* kinolab_status_name(kinolab_status status) {
  switch (status) {
    case KINOLAB_OK: return "ok";
    case KINOLAB_ERROR_INVALID_ARGUMENT: return "invalid_argument";
    case KINOLAB_ERROR_CONFIG: return "config_error";
    case KINOLAB_ERROR_IO: return "io_error";
    case KINOLAB_ERROR_CHECKPOINT: return "checkpoint_error";
    case KINOLAB_ERROR_RUNTIME: return "runtime_error";
  }
  return "unknown";
}

const char* kinolab_last_error(void) { return g_last_error.c_str(); }

const char* kinolab_version(void) { return "1.0.0"; }

kinolab_status kinolab_lab_create(const char* config_path, kinolab_lab** out) {
  return guarded([&]() {
    if (out == nullptr) {
      return fail(KINOLAB_ERROR_INVALID_ARGUMENT, "out handle is null");
    }
    auto lab = new kinolab_lab;
    if (config_path != nullptr && config_path[0] != '\0') {
      lab->config = kinolab::RunConfig::from_file(config_path);
    }
    *out = lab;
    return KINOLAB_OK;
  });
}

kinolab_status kinolab_lab_create_from_json(const char* json_text,
                                            kinolab_lab** out) {
  return guarded([&]() {
    if (out == nullptr || json_text == nullptr) {
      return fail(KINOLAB_ERROR_INVALID_ARGUMENT, "null argument");
    }
    auto lab = new kinolab_lab;
    lab->config = kinolab::RunConfig::from_json_text(json_text);
    *out = lab;
    return KINOLAB_OK;
  });
}

void kinolab_lab_destroy(kinolab_lab* lab) { delete lab; }

kinolab_status kinolab_lab_config_json(const kinolab_lab* lab, char* buffer,
                                       size_t buffer_size, size_t* required) {
  return guarded([&]() {
    if (lab == nullptr) {
      return fail(KINOLAB_ERROR_INVALID_ARGUMENT, "lab handle is null");
    }
    const std::string text = lab->config.to_json_text();
    if (required != nullptr) *required = text.size() + 1;
    copy_out(text, buffer, buffer_size);
    return KINOLAB_OK;
  });
}

kinolab_status kinolab_lab_set_output_root(kinolab_lab* lab, const char* dir) {
  return guarded([&]() {
    if (lab == nullptr || dir == nullptr) {
      return fail(KINOLAB_ERROR_INVALID_ARGUMENT, "null argument");
    }
    lab->config.output_root = dir;
    return KINOLAB_OK;
  });
}

kinolab_status kinolab_train(kinolab_lab* lab, long long seed_override,
                             char* run_root, size_t run_root_size) {
  return guarded([&]() {
    if (lab == nullptr) {
      return fail(KINOLAB_ERROR_INVALID_ARGUMENT, "lab handle is null");
    }
    std::optional<std::uint64_t> seed;
    if (seed_override >= 0) seed = static_cast<std::uint64_t>(seed_override);
    const auto outcome = kinolab::commands::cmd_train(lab->config, seed);
    copy_out(outcome.root, run_root, run_root_size);
    return KINOLAB_OK;
  });
}

kinolab_status kinolab_eval(kinolab_lab* lab, const char* checkpoint_path,
                            const double* grid, size_t grid_len,
                            int episodes_per_point, uint64_t seed,
                            const char* out_dir) {
  return guarded([&]() {
    if (lab == nullptr || checkpoint_path == nullptr || out_dir == nullptr) {
      return fail(KINOLAB_ERROR_INVALID_ARGUMENT, "null argument");
    }
    std::vector<double> grid_vec;
    if (grid != nullptr && grid_len > 0) {
      grid_vec.assign(grid, grid + grid_len);
    } else {
      grid_vec = lab->config.eval.grid;
    }
    const int episodes = episodes_per_point > 0
                             ? episodes_per_point
                             : lab->config.eval.episodes_per_point;
    kinolab::commands::cmd_eval(lab->config, checkpoint_path, grid_vec,
                                episodes, seed, out_dir);
    return KINOLAB_OK;
  });
}

kinolab_status kinolab_ablate(kinolab_lab* lab, const char* const* toggles,
                              size_t num_toggles, const char* out_dir) {
  return guarded([&]() {
    if (lab == nullptr || out_dir == nullptr ||
        (toggles == nullptr && num_toggles > 0)) {
      return fail(KINOLAB_ERROR_INVALID_ARGUMENT, "null argument");
    }
    std::vector<std::string> toggle_vec;
    for (size_t i = 0; i < num_toggles; ++i) {
      if (toggles[i] == nullptr) {
        return fail(KINOLAB_ERROR_INVALID_ARGUMENT, "null toggle name");
      }
      toggle_vec.emplace_back(toggles[i]);
    }
    kinolab::commands::cmd_ablate(lab->config, toggle_vec, out_dir);
    return KINOLAB_OK;
  });
}

kinolab_status kinolab_sim2sim(kinolab_lab* lab, const char* checkpoint_path,
                               const char* profile_path, const char* out_dir) {
  return guarded([&]() {
    if (lab == nullptr || checkpoint_path == nullptr || out_dir == nullptr) {
      return fail(KINOLAB_ERROR_INVALID_ARGUMENT, "null argument");
    }
    kinolab::commands::cmd_sim2sim(
        lab->config, checkpoint_path,
        profile_path == nullptr ? "" : profile_path, out_dir);
    return KINOLAB_OK;
  });
}

kinolab_status kinolab_plot(const char* run_dir) {
  return guarded([&]() {
    if (run_dir == nullptr) {
      return fail(KINOLAB_ERROR_INVALID_ARGUMENT, "run_dir is null");
    }
    kinolab::commands::cmd_plot(run_dir);
    return KINOLAB_OK;
  });
}

kinolab_status kinolab_angular_momentum(const double* masses,
                                        const double* inertias,
                                        const double* positions,
                                        const double* velocities,
                                        const double* angular_velocities,
                                        const int* groups, size_t n,
                                        kinolab_momentum_report* out) {
  return guarded([&]() {
    if (masses == nullptr || inertias == nullptr || positions == nullptr ||
        velocities == nullptr || angular_velocities == nullptr ||
        groups == nullptr || out == nullptr) {
      return fail(KINOLAB_ERROR_INVALID_ARGUMENT, "null argument");
    }
    if (n == 0) {
      return fail(KINOLAB_ERROR_INVALID_ARGUMENT, "empty snapshot");
    }
    kinolab::kinodyn::BodySnapshot snap;
    snap.links.resize(n);
    for (size_t i = 0; i < n; ++i) {
      auto& link = snap.links[i];
      link.mass = masses[i];
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          link.inertia(r, c) = inertias[9 * i + 3 * r + c];
        }
      }
      link.com_position = Eigen::Vector3d(positions + 3 * i);
      link.com_velocity = Eigen::Vector3d(velocities + 3 * i);
      link.angular_velocity = Eigen::Vector3d(angular_velocities + 3 * i);
      if (groups[i] < 0 || groups[i] >= kinolab::kinodyn::kNumGroups) {
        return fail(KINOLAB_ERROR_INVALID_ARGUMENT, "unknown link group tag");
      }
      link.group = static_cast<kinolab::kinodyn::LinkGroup>(groups[i]);
    }
    kinolab::kinodyn::validate_snapshot(snap);
    const auto report = kinolab::kinodyn::total_angular_momentum(snap);
    for (int k = 0; k < 3; ++k) {
      out->total[k] = report.total[k];
      out->com_position[k] = report.com_position[k];
      out->com_velocity[k] = report.com_velocity[k];
      for (int g = 0; g < kinolab::kinodyn::kNumGroups; ++g) {
        out->per_group[g][k] = report.per_group[g][k];
      }
    }
    return KINOLAB_OK;
  });
}

kinolab_status kinolab_reward_total(const kinolab_lab* lab,
                                    const kinolab_reward_context* context,
                                    kinolab_reward_breakdown* out) {
  return guarded([&]() {
    if (lab == nullptr || context == nullptr || out == nullptr) {
      return fail(KINOLAB_ERROR_INVALID_ARGUMENT, "null argument");
    }
    kinolab::rewards::RewardContext ctx;
    for (int k = 0; k < 3; ++k) {
      ctx.momentum.total[k] = context->momentum.total[k];
      ctx.momentum.com_position[k] = context->momentum.com_position[k];
      ctx.momentum.com_velocity[k] = context->momentum.com_velocity[k];
      for (int g = 0; g < kinolab::kinodyn::kNumGroups; ++g) {
        ctx.momentum.per_group[g][k] = context->momentum.per_group[g][k];
      }
      ctx.commanded_velocity[k] = context->commanded_velocity[k];
      ctx.actual_base_velocity[k] = context->actual_base_velocity[k];
    }
    ctx.base_height = context->base_height;
    ctx.nominal_base_height = context->nominal_base_height;
    ctx.target_height_offset = context->target_height_offset;
    ctx.foot_heights = {context->foot_heights[0], context->foot_heights[1]};
    ctx.target_foot_height = context->target_foot_height;
    ctx.swing_mask = {context->swing_mask[0], context->swing_mask[1]};
    ctx.joint_positions = Eigen::Map<const Eigen::VectorXd>(
        context->joint_positions, 16);
    ctx.joint_targets =
        Eigen::Map<const Eigen::VectorXd>(context->joint_targets, 16);
    ctx.joint_velocities =
        Eigen::Map<const Eigen::VectorXd>(context->joint_velocities, 16);
    ctx.curriculum_v_max = context->curriculum_v_max;
    ctx.phase = context->phase;
    ctx.base_roll = context->base_roll;
    ctx.base_pitch = context->base_pitch;
    ctx.applied_torques =
        Eigen::Map<const Eigen::VectorXd>(context->applied_torques, 16);
    ctx.action = Eigen::Map<const Eigen::VectorXd>(context->action, 16);
    ctx.prev_action =
        Eigen::Map<const Eigen::VectorXd>(context->prev_action, 16);

    const auto breakdown =
        kinolab::rewards::compose_total(ctx, lab->config.reward_params);
    out->total = breakdown.total;
    out->angular_momentum_raw = breakdown.angular_momentum.raw;
    out->angular_momentum_weighted = breakdown.angular_momentum.weighted;
    out->base_height_raw = breakdown.base_height.raw;
    out->base_height_weighted = breakdown.base_height.weighted;
    out->feet_clearance_raw = breakdown.feet_clearance.raw;
    out->feet_clearance_weighted = breakdown.feet_clearance.weighted;
    out->joint_position_raw = breakdown.joint_position.raw;
    out->joint_position_weighted = breakdown.joint_position.weighted;
    out->velocity_tracking_raw = breakdown.velocity_tracking_raw;
    double general = 0.0;
    for (const auto& [name, term] : breakdown.general) general += term.weighted;
    out->general_weighted_sum = general;
    return KINOLAB_OK;
  });
}

kinolab_status kinolab_curriculum_update(kinolab_curriculum_state* state,
                                         double tracking_reward,
                                         double tracking_reward_max) {
  return guarded([&]() {
    if (state == nullptr) {
      return fail(KINOLAB_ERROR_INVALID_ARGUMENT, "state is null");
    }
    kinolab::curriculum::CurriculumState s;
    s.v_min = state->v_min;
    s.v_max = state->v_max;
    s.v_cap = state->v_cap;
    s.v_increment = state->v_increment;
    s.cycle_time = state->cycle_time;
    s.cycle_shrink = state->cycle_shrink;
    s.cycle_floor = state->cycle_floor;
    s.lambda_threshold = state->lambda_threshold;
    kinolab::curriculum::validate(s);
    s = kinolab::curriculum::update(s, tracking_reward, tracking_reward_max);
    state->v_min = s.v_min;
    state->v_max = s.v_max;
    state->cycle_time = s.cycle_time;
    return KINOLAB_OK;
  });
}

}  // extern "C"
