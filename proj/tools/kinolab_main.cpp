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

// Command-line front end; talks to the core exclusively through the C API.

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kinolab/kinolab.h"

namespace {

int fail(const char* what, kinolab_status status) {
  std::fprintf(stderr, "error: %s: [%s] %s\n", what,
               kinolab_status_name(status), kinolab_last_error());
  return 1;
}

struct LabHandle {
  kinolab_lab* lab = nullptr;
  ~LabHandle() { kinolab_lab_destroy(lab); }
};

int open_lab(const std::string& config_path, const std::string& out_root,
             LabHandle& handle) {
  const kinolab_status status = kinolab_lab_create(
      config_path.empty() ? nullptr : config_path.c_str(), &handle.lab);
  if (status != KINOLAB_OK) return fail("loading configuration", status);

  std::string root = out_root;
  if (root.empty()) {
    if (const char* env_root = std::getenv("KINOLAB_OUT_ROOT")) {
      root = env_root;
    }
  }
  if (!root.empty()) {
    const kinolab_status set =
        kinolab_lab_set_output_root(handle.lab, root.c_str());
    if (set != KINOLAB_OK) return fail("setting output root", set);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinolab: momentum-regularized locomotion training lab"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_root;
  app.add_option("--config", config_path, "Run configuration JSON")
      ->envname("KINOLAB_CONFIG");
  app.add_option("--out", out_root,
                 "Output root (default: config value or KINOLAB_OUT_ROOT)");

  // train
  auto* train = app.add_subcommand("train", "Train policies for every seed");
  long long train_seed = -1;
  train->add_option("--seed", train_seed, "Train only this seed");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a grid");
  std::string ckpt_path, eval_out;
  std::vector<double> grid;
  int episodes = 0;
  std::uint64_t eval_seed = 1;
  eval->add_option("--checkpoint", ckpt_path, "Checkpoint file")->required();
  eval->add_option("--grid", grid, "Commanded velocities [m/s]");
  eval->add_option("--episodes", episodes, "Episodes per grid point");
  eval->add_option("--seed", eval_seed, "Evaluation seed");
  eval->add_option("--eval-out", eval_out, "Report directory")->required();

  // ablate
  auto* ablate = app.add_subcommand("ablate", "Baseline-vs-variant study");
  std::vector<std::string> toggles;
  std::string ablate_out;
  ablate->add_option("--toggles", toggles,
                     "Any of: no_momentum_reward, no_velocity_scaled_rewards, "
                     "arms_locked, fixed_cycle_time");
  ablate->add_option("--ablate-out", ablate_out, "Output directory")
      ->required();

  // sim2sim
  auto* sim2sim =
      app.add_subcommand("sim2sim", "Nominal vs perturbed-physics evaluation");
  std::string s2s_ckpt, profile_path, s2s_out;
  sim2sim->add_option("--checkpoint", s2s_ckpt, "Checkpoint file")->required();
  sim2sim->add_option("--profile", profile_path,
                      "Perturbation profile JSON (empty = identity)");
  sim2sim->add_option("--sim2sim-out", s2s_out, "Output directory")->required();

  // plot
  auto* plot = app.add_subcommand("plot", "Render plots from a run directory");
  std::string run_dir;
  plot->add_option("--run", run_dir, "Run directory with metrics.csv")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (plot->parsed()) {
    const kinolab_status status = kinolab_plot(run_dir.c_str());
    if (status != KINOLAB_OK) return fail("plot", status);
    std::printf("plots written under %s/plots\n", run_dir.c_str());
    return 0;
  }

  LabHandle handle;
  if (int rc = open_lab(config_path, out_root, handle); rc != 0) return rc;

  if (train->parsed()) {
    char run_root[4096] = {0};
    const kinolab_status status =
        kinolab_train(handle.lab, train_seed, run_root, sizeof(run_root));
    if (status != KINOLAB_OK) return fail("train", status);
    std::printf("training complete: %s\n", run_root);
    return 0;
  }

  if (eval->parsed()) {
    const kinolab_status status = kinolab_eval(
        handle.lab, ckpt_path.c_str(), grid.empty() ? nullptr : grid.data(),
        grid.size(), episodes, eval_seed, eval_out.c_str());
    if (status != KINOLAB_OK) return fail("eval", status);
    std::printf("evaluation report: %s/report.csv\n", eval_out.c_str());
    return 0;
  }

  if (ablate->parsed()) {
    std::vector<const char*> raw;
    raw.reserve(toggles.size());
    for (const auto& t : toggles) raw.push_back(t.c_str());
    const kinolab_status status = kinolab_ablate(
        handle.lab, raw.empty() ? nullptr : raw.data(), raw.size(),
        ablate_out.c_str());
    if (status != KINOLAB_OK) return fail("ablate", status);
    std::printf("ablation report: %s/ablation_report.csv\n",
                ablate_out.c_str());
    return 0;
  }

  if (sim2sim->parsed()) {
    const kinolab_status status =
        kinolab_sim2sim(handle.lab, s2s_ckpt.c_str(),
                        profile_path.empty() ? nullptr : profile_path.c_str(),
                        s2s_out.c_str());
    if (status != KINOLAB_OK) return fail("sim2sim", status);
    std::printf("paired report: %s/sim2sim_report.csv\n", s2s_out.c_str());
    return 0;
  }
  return 1;
}
