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

#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "metrics.hpp"
#include "plots.hpp"
#include "vecenv.hpp"

namespace kinolab::commands {

namespace fs = std::filesystem;

RunConfig apply_toggles(RunConfig config,
                        const std::vector<std::string>& toggles) {
  for (const auto& toggle : toggles) {
    if (toggle == "no_momentum_reward") {
      config.reward_params.weights.alpha_a = 0.0;
    } else if (toggle == "no_velocity_scaled_rewards") {
      config.reward_params.constants.fixed_velocity_ratio = true;
    } else if (toggle == "arms_locked") {
      config.env_options.lock_arms = true;
    } else if (toggle == "fixed_cycle_time") {
      config.trainer_config.cycle_time_curriculum = false;
    } else {
      std::string valid;
      for (const auto& name : valid_toggles()) {
        valid += valid.empty() ? name : ", " + name;
      }
      throw ConfigError("unknown toggle '" + toggle + "'; valid toggles: " +
                        valid);
    }
  }
  return config;
}

TrainOutcome cmd_train(const RunConfig& config,
                       std::optional<std::uint64_t> seed_override,
                       std::optional<std::string> out_override) {
  config.validate();
  TrainOutcome outcome;
  outcome.root = out_override.value_or(config.output_root + "/" + config.run_name);

  std::vector<std::uint64_t> seeds = config.seeds;
  if (seed_override) seeds = {*seed_override};

  for (std::uint64_t seed : seeds) {
    const std::string run_dir = outcome.root + "/seed_" + std::to_string(seed);
    fs::create_directories(run_dir);

    RunConfig snapshot = config;
    snapshot.trainer_config.seed = seed;
    const std::string config_text = snapshot.to_json_text();
    write_file_atomic(run_dir + "/config.json", config_text);

    trainer::BipedVectorEnv envs(config.robot, config.domain_randomization,
                                 config.reward_params, config.env_options,
                                 config.trainer_config.num_envs, seed);
    trainer::TrainerConfig tcfg = config.trainer_config;
    tcfg.seed = seed;
    train_loop(tcfg, envs, config.curriculum, run_dir, config_text);
    outcome.run_dirs.push_back(run_dir);
  }
  return outcome;
}

evaluation::EvaluationReport cmd_eval(const RunConfig& config,
                                      const std::string& checkpoint_path,
                                      const std::vector<double>& grid,
                                      int episodes_per_point,
                                      std::uint64_t seed,
                                      const std::string& out_dir) {
  if (grid.empty()) throw InvalidInput("eval: velocity grid must not be empty");
  const trainer::Checkpoint ckpt =
      evaluation::load_biped_checkpoint(checkpoint_path);
  evaluation::EvaluationReport report = evaluation::evaluate_checkpoint(
      config, ckpt, grid, episodes_per_point, seed, out_dir);
  report.checkpoint_path = checkpoint_path;
  return report;
}

namespace {

std::string ablation_table(
    const std::vector<std::pair<std::string, std::vector<std::pair<
                                                 std::uint64_t,
                                                 evaluation::EvaluationReport>>>>&
        variants) {
  std::ostringstream out;
  out << "variant,seed,commanded,mean_velocity,std_velocity,fall_rate,"
         "tracking_error_l1,mean_abs_yaw_momentum,torso,left_arm,right_arm,"
         "left_leg,right_leg\n";
  for (const auto& [name, runs] : variants) {
    for (const auto& [seed, report] : runs) {
      for (const auto& r : report.rows) {
        out << name << ',' << seed << ',' << format_double(r.commanded) << ','
            << format_double(r.mean_velocity) << ','
            << format_double(r.std_velocity) << ','
            << format_double(r.fall_rate) << ','
            << format_double(r.tracking_error_l1) << ','
            << format_double(r.mean_abs_yaw_momentum);
        for (int g = 0; g < kinodyn::kNumGroups; ++g) {
          out << ',' << format_double(r.mean_group_momentum[g]);
        }
        out << "\n";
      }
    }
  }
  return out.str();
}

}  // namespace

AblationOutcome cmd_ablate(const RunConfig& config,
                           const std::vector<std::string>& toggles,
                           const std::string& out_dir) {
  // Validates the toggle list before any training starts.
  const RunConfig toggled = apply_toggles(config, toggles);

  AblationOutcome outcome;
  outcome.out_dir = out_dir;
  fs::create_directories(out_dir);

  std::vector<std::pair<std::string,
                        std::vector<std::pair<std::uint64_t,
                                              evaluation::EvaluationReport>>>>
      variants;

  std::vector<std::pair<std::string, RunConfig>> plans;
  plans.push_back({"baseline", config});
  if (!toggles.empty()) {
    std::string name;
    for (const auto& t : toggles) name += name.empty() ? t : "+" + t;
    plans.push_back({name, toggled});
  }

  for (auto& [name, plan] : plans) {
    RunConfig variant = plan;
    variant.run_name = name;
    variant.output_root = out_dir;
    const TrainOutcome trained = cmd_train(variant);

    std::vector<std::pair<std::uint64_t, evaluation::EvaluationReport>> runs;
    for (size_t i = 0; i < trained.run_dirs.size(); ++i) {
      const std::string ckpt_path =
          trained.run_dirs[i] + "/checkpoints/final.ckpt";
      const trainer::Checkpoint ckpt =
          evaluation::load_biped_checkpoint(ckpt_path);
      const std::string eval_dir = trained.run_dirs[i] + "/eval";
      auto report = evaluation::evaluate_checkpoint(
          variant, ckpt, variant.eval.grid, variant.eval.episodes_per_point,
          variant.seeds[i], eval_dir);
      report.checkpoint_path = ckpt_path;
      runs.push_back({variant.seeds[i], std::move(report)});
    }
    variants.push_back({name, std::move(runs)});
  }

  outcome.table_path = out_dir + "/ablation_report.csv";
  write_file_atomic(outcome.table_path, ablation_table(variants));
  return outcome;
}

Sim2SimOutcome cmd_sim2sim(const RunConfig& config,
                           const std::string& checkpoint_path,
                           const std::string& profile_path,
                           const std::string& out_dir) {
  const trainer::Checkpoint ckpt =
      evaluation::load_biped_checkpoint(checkpoint_path);
  const evaluation::PerturbationProfile profile =
      profile_path.empty()
          ? evaluation::PerturbationProfile::identity()
          : evaluation::PerturbationProfile::from_file(profile_path);

  Sim2SimOutcome outcome;
  const std::uint64_t seed = config.trainer_config.seed;
  outcome.nominal = evaluation::evaluate_checkpoint(
      config, ckpt, config.eval.grid, config.eval.episodes_per_point, seed,
      out_dir + "/nominal");
  outcome.perturbed = evaluation::evaluate_checkpoint(
      config, ckpt, config.eval.grid, config.eval.episodes_per_point, seed,
      out_dir + "/perturbed", profile);

  std::ostringstream out;
  out << "commanded,nominal_mean_velocity,perturbed_mean_velocity,"
         "delta_mean_velocity,nominal_fall_rate,perturbed_fall_rate,"
         "delta_fall_rate,nominal_abs_yaw_momentum,perturbed_abs_yaw_momentum,"
         "delta_abs_yaw_momentum\n";
  for (size_t i = 0; i < outcome.nominal.rows.size(); ++i) {
    const auto& a = outcome.nominal.rows[i];
    const auto& b = outcome.perturbed.rows[i];
    out << format_double(a.commanded) << ',' << format_double(a.mean_velocity)
        << ',' << format_double(b.mean_velocity) << ','
        << format_double(b.mean_velocity - a.mean_velocity) << ','
        << format_double(a.fall_rate) << ',' << format_double(b.fall_rate)
        << ',' << format_double(b.fall_rate - a.fall_rate) << ','
        << format_double(a.mean_abs_yaw_momentum) << ','
        << format_double(b.mean_abs_yaw_momentum) << ','
        << format_double(b.mean_abs_yaw_momentum - a.mean_abs_yaw_momentum)
        << "\n";
  }
  fs::create_directories(out_dir);
  outcome.paired_table_path = out_dir + "/sim2sim_report.csv";
  write_file_atomic(outcome.paired_table_path, out.str());
  write_file_atomic(out_dir + "/profile.json", profile.to_json_text());
  return outcome;
}

namespace {

// Minimal CSV reader for the files this project writes (no quoting).
std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("missing input file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty input file: " + path);
  std::vector<std::string> header;
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) header.push_back(cell);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
      }
    }
    rows.push_back(std::move(row));
  }
  return {header, rows};
}

int column_index(const std::vector<std::string>& header,
                 const std::string& name, const std::string& path) {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  throw IoError("column '" + name + "' missing in " + path);
}

}  // namespace

std::vector<std::string> cmd_plot(const std::string& run_dir) {
  std::vector<std::string> outputs;
  const std::string metrics_path = run_dir + "/metrics.csv";
  const std::string plots_dir = run_dir + "/plots";

  if (!fs::exists(metrics_path)) {
    throw IoError("missing input file: " + metrics_path);
  }
  const auto [header, rows] = read_csv(metrics_path);
  if (rows.empty()) throw IoError("no data rows in " + metrics_path);
  fs::create_directories(plots_dir);

  auto column = [&](const std::string& name) {
    const int idx = column_index(header, name, metrics_path);
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(r[idx]);
    return v;
  };
  const std::vector<double> iteration = column("iteration");

  // Backing data tables are copied verbatim from the metrics rows.
  {
    std::ostringstream data;
    data << "iteration,mean_tracking,mean_return\n";
    const auto tracking = column("mean_tracking");
    const auto ret = column("mean_return");
    for (size_t i = 0; i < rows.size(); ++i) {
      data << format_double(iteration[i]) << ',' << format_double(tracking[i])
           << ',' << format_double(ret[i]) << "\n";
    }
    write_file_atomic(plots_dir + "/learning_curve.csv", data.str());
    plots::write_line_chart(
        plots_dir + "/learning_curve.svg", "Learning curve", "iteration",
        "mean tracking reward",
        {{"mean tracking", iteration, tracking}});
    outputs.push_back(plots_dir + "/learning_curve.svg");
    outputs.push_back(plots_dir + "/learning_curve.csv");
  }
  {
    std::ostringstream data;
    data << "iteration,v_max,cycle_time\n";
    const auto vmax = column("v_max");
    const auto cycle = column("cycle_time");
    for (size_t i = 0; i < rows.size(); ++i) {
      data << format_double(iteration[i]) << ',' << format_double(vmax[i])
           << ',' << format_double(cycle[i]) << "\n";
    }
    write_file_atomic(plots_dir + "/curriculum_trace.csv", data.str());
    plots::write_line_chart(plots_dir + "/curriculum_trace.svg",
                            "Curriculum trace", "iteration", "value",
                            {{"v_max [m/s]", iteration, vmax},
                             {"cycle time [s]", iteration, cycle}});
    outputs.push_back(plots_dir + "/curriculum_trace.svg");
    outputs.push_back(plots_dir + "/curriculum_trace.csv");
  }

  // Evaluation plots when an eval report is present.
  const std::string eval_report = run_dir + "/eval/report.csv";
  if (fs::exists(eval_report)) {
    const auto [eheader, erows] = read_csv(eval_report);
    const int c_cmd = column_index(eheader, "commanded", eval_report);
    const int c_vel = column_index(eheader, "mean_velocity", eval_report);
    const int c_lz = column_index(eheader, "mean_abs_yaw_momentum", eval_report);
    std::vector<double> cmd, vel, lz;
    for (const auto& r : erows) {
      cmd.push_back(r[c_cmd]);
      vel.push_back(r[c_vel]);
      lz.push_back(r[c_lz]);
    }
    plots::write_line_chart(plots_dir + "/velocity_tracking.svg",
                            "Velocity tracking", "commanded velocity [m/s]",
                            "mean achieved velocity [m/s]",
                            {{"achieved", cmd, vel}, {"commanded", cmd, cmd}});
    plots::write_line_chart(plots_dir + "/yaw_momentum.svg",
                            "Yaw angular momentum", "commanded velocity [m/s]",
                            "mean |L_z| [kg m^2/s]", {{"|L_z|", cmd, lz}});
    outputs.push_back(plots_dir + "/velocity_tracking.svg");
    outputs.push_back(plots_dir + "/yaw_momentum.svg");
  }
  return outputs;
}

}  // namespace kinolab::commands
