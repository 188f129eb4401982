/* Copyright 2026 The Kinolab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the kinolab shared library: a desk-scale training and
 * evaluation lab for momentum-regularized humanoid velocity tracking on a
 * reduced-order simulated biped.
 *
 * Every function returns a kinolab_status; on failure,
 * kinolab_last_error() describes the problem for the calling thread.
 * A kinolab_lab is an opaque handle holding one loaded run configuration.
 */

#ifndef KINOLAB_KINOLAB_H_
#define KINOLAB_KINOLAB_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kinolab_status {
  KINOLAB_OK = 0,
  KINOLAB_ERROR_INVALID_ARGUMENT = 1,
  KINOLAB_ERROR_CONFIG = 2,
  KINOLAB_ERROR_IO = 3,
  KINOLAB_ERROR_CHECKPOINT = 4,
  KINOLAB_ERROR_RUNTIME = 5,
} kinolab_status;

const char* kinolab_status_name(kinolab_status status);

/* Message for the most recent failure on this thread; never NULL. */
const char* kinolab_last_error(void);

const char* kinolab_version(void);

/* ---- configuration handles ---------------------------------------- */

typedef struct kinolab_lab kinolab_lab;

/* config_path may be NULL for the built-in defaults. */
kinolab_status kinolab_lab_create(const char* config_path, kinolab_lab** out);
kinolab_status kinolab_lab_create_from_json(const char* json_text,
                                            kinolab_lab** out);
void kinolab_lab_destroy(kinolab_lab* lab);

/* Serializes the fully materialized configuration. Writes up to buffer_size
 * bytes (including the terminator); *required is set to the full size. */
kinolab_status kinolab_lab_config_json(const kinolab_lab* lab, char* buffer,
                                       size_t buffer_size, size_t* required);

kinolab_status kinolab_lab_set_output_root(kinolab_lab* lab, const char* dir);

/* ---- commands ------------------------------------------------------ */

/* Trains every seed in the configuration, or only `seed_override` when it is
 * >= 0. Writes the run root path into run_root (when non-NULL). */
kinolab_status kinolab_train(kinolab_lab* lab, long long seed_override,
                             char* run_root, size_t run_root_size);

/* Deterministic-policy evaluation of a checkpoint over a commanded-velocity
 * grid; writes report.csv, plot files and trajectories into out_dir. Falls
 * report 0 m/s. */
kinolab_status kinolab_eval(kinolab_lab* lab, const char* checkpoint_path,
                            const double* grid, size_t grid_len,
                            int episodes_per_point, uint64_t seed,
                            const char* out_dir);

/* Trains baseline and toggled variants on shared seeds and emits a
 * side-by-side report. Valid toggles: no_momentum_reward,
 * no_velocity_scaled_rewards, arms_locked, fixed_cycle_time. */
kinolab_status kinolab_ablate(kinolab_lab* lab, const char* const* toggles,
                              size_t num_toggles, const char* out_dir);

/* Evaluates one checkpoint under nominal and perturbed physics; profile_path
 * may be NULL or empty for the identity profile. */
kinolab_status kinolab_sim2sim(kinolab_lab* lab, const char* checkpoint_path,
                               const char* profile_path, const char* out_dir);

/* Renders plots and backing data tables from a run directory. */
kinolab_status kinolab_plot(const char* run_dir);

/* ---- computation kernels ------------------------------------------- */

/* Link groups for the momentum decomposition. */
typedef enum kinolab_link_group {
  KINOLAB_GROUP_TORSO = 0,
  KINOLAB_GROUP_LEFT_ARM = 1,
  KINOLAB_GROUP_RIGHT_ARM = 2,
  KINOLAB_GROUP_LEFT_LEG = 3,
  KINOLAB_GROUP_RIGHT_LEG = 4,
} kinolab_link_group;

typedef struct kinolab_momentum_report {
  double total[3];         /* kg m^2/s, about the whole-body CoM */
  double per_group[5][3];  /* indexed by kinolab_link_group */
  double com_position[3];
  double com_velocity[3];
} kinolab_momentum_report;

/* Whole-body angular momentum of n rigid links about their common CoM.
 * inertia: n row-major 3x3 world-frame tensors about each link's own CoM.
 * positions/velocities/angular_velocities: n world-frame 3-vectors.
 * groups: n values from kinolab_link_group. */
kinolab_status kinolab_angular_momentum(const double* masses,
                                        const double* inertias,
                                        const double* positions,
                                        const double* velocities,
                                        const double* angular_velocities,
                                        const int* groups, size_t n,
                                        kinolab_momentum_report* out);

/* Reward evaluation against the lab's configured weights and constants. */
typedef struct kinolab_reward_context {
  kinolab_momentum_report momentum;
  double base_height;
  double nominal_base_height;
  double target_height_offset;
  double foot_heights[2];
  double target_foot_height;
  double swing_mask[2];
  double joint_positions[16];
  double joint_targets[16];
  double joint_velocities[16];
  double commanded_velocity[3]; /* vx, vy, yaw rate */
  double actual_base_velocity[3];
  double curriculum_v_max;
  double phase;
  double base_roll;
  double base_pitch;
  double applied_torques[16];
  double action[16];
  double prev_action[16];
} kinolab_reward_context;

typedef struct kinolab_reward_breakdown {
  double total;
  double angular_momentum_raw, angular_momentum_weighted;
  double base_height_raw, base_height_weighted;
  double feet_clearance_raw, feet_clearance_weighted;
  double joint_position_raw, joint_position_weighted;
  double velocity_tracking_raw;
  double general_weighted_sum;
} kinolab_reward_breakdown;

kinolab_status kinolab_reward_total(const kinolab_lab* lab,
                                    const kinolab_reward_context* context,
                                    kinolab_reward_breakdown* out);

/* Reward-gated curricula: one gate evaluation, both rules applied. */
typedef struct kinolab_curriculum_state {
  double v_min, v_max, v_cap, v_increment;
  double cycle_time, cycle_shrink, cycle_floor;
  double lambda_threshold;
} kinolab_curriculum_state;

kinolab_status kinolab_curriculum_update(kinolab_curriculum_state* state,
                                         double tracking_reward,
                                         double tracking_reward_max);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* KINOLAB_KINOLAB_H_ */
