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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "config.hpp"
#include "errors.hpp"

using kinolab::ConfigError;
using kinolab::RunConfig;

TEST_CASE("defaults carry the published constants") {
  const RunConfig cfg;
  CHECK(cfg.reward_params.weights.alpha_a == 0.05);
  CHECK(cfg.reward_params.weights.alpha_v == 0.1);
  CHECK(cfg.reward_params.weights.alpha_b == 0.2);
  CHECK(cfg.reward_params.weights.alpha_f == 1.0);
  CHECK(cfg.reward_params.weights.alpha_p == 1.6);
  CHECK(cfg.reward_params.constants.base_height_beta == 100.0);
  CHECK(cfg.reward_params.constants.base_height_gamma == 0.05);
  CHECK(cfg.reward_params.constants.joint_pos_beta == -2.0);
  CHECK(cfg.reward_params.constants.joint_pos_gamma == 0.2);
  CHECK(cfg.reward_params.constants.joint_pos_clip_lo == 0.0);
  CHECK(cfg.reward_params.constants.joint_pos_clip_hi == 0.5);
  CHECK(cfg.curriculum.v_cap == 3.5);
  CHECK(cfg.curriculum.v_increment == 0.5);
  CHECK(cfg.curriculum.cycle_shrink == 0.95);
  CHECK(cfg.curriculum.cycle_floor == 0.48);
  CHECK(cfg.curriculum.lambda_threshold == 0.8);
  CHECK(cfg.trainer_config.discount == 0.994);
  CHECK(cfg.trainer_config.gae_lambda == 0.9);
  CHECK(cfg.trainer_config.entropy_coeff == 0.001);
  CHECK(cfg.trainer_config.learning_rate == 1e-5);
  CHECK(cfg.seeds.size() == 5);
}

TEST_CASE("round-trip: parse, serialize, parse is the identity") {
  RunConfig cfg;
  cfg.run_name = "roundtrip";
  cfg.seeds = {7, 8};
  cfg.reward_params.weights.alpha_a = 0.0;
  cfg.trainer_config.num_envs = 12;
  cfg.trainer_config.horizon = 10;
  cfg.trainer_config.minibatch_size = 30;
  cfg.curriculum.v_max = 1.5;
  cfg.eval.grid = {0.0, 1.0};

  const std::string text1 = cfg.to_json_text();
  const RunConfig parsed = RunConfig::from_json_text(text1);
  const std::string text2 = parsed.to_json_text();
  CHECK(text1 == text2);

  const RunConfig parsed2 = RunConfig::from_json_text(text2);
  CHECK(parsed2.to_json_text() == text2);
  CHECK(parsed2.run_name == "roundtrip");
  CHECK(parsed2.seeds == std::vector<std::uint64_t>{7, 8});
  CHECK(parsed2.trainer_config.num_envs == 12);
  CHECK(parsed2.reward_params.weights.alpha_a == 0.0);
}

TEST_CASE("unknown keys are rejected with the offending name") {
  CHECK_THROWS_WITH_AS(RunConfig::from_json_text("{\"run_nam\": \"x\"}"),
                       doctest::Contains("run_nam"), ConfigError);

  CHECK_THROWS_WITH_AS(
      RunConfig::from_json_text("{\"trainer\": {\"learning_rat\": 1e-4}}"),
      doctest::Contains("learning_rat"), ConfigError);

  CHECK_THROWS_WITH_AS(
      RunConfig::from_json_text(
          "{\"rewards\": {\"weights\": {\"alpha_q\": 1.0}}}"),
      doctest::Contains("alpha_q"), ConfigError);

  CHECK_THROWS_WITH_AS(
      RunConfig::from_json_text("{\"robot\": {\"links\": {\"head\": {}}}}"),
      doctest::Contains("head"), ConfigError);

  CHECK_THROWS_AS(RunConfig::from_json_text("not json"), ConfigError);
}

TEST_CASE("partial configs inherit defaults") {
  const RunConfig cfg = RunConfig::from_json_text(
      "{\"trainer\": {\"num_envs\": 8, \"horizon\": 30, "
      "\"minibatch_size\": 60}}");
  CHECK(cfg.trainer_config.num_envs == 8);
  CHECK(cfg.trainer_config.discount == 0.994);  // untouched default
  CHECK(cfg.reward_params.weights.alpha_a == 0.05);
}

TEST_CASE("invariant violations are rejected") {
  CHECK_THROWS_AS(
      RunConfig::from_json_text("{\"trainer\": {\"discount\": 1.5}}"),
      ConfigError);
  CHECK_THROWS_AS(
      RunConfig::from_json_text(
          "{\"trainer\": {\"num_envs\": 7, \"horizon\": 11, "
          "\"minibatch_size\": 60}}"),
      ConfigError);  // minibatch does not divide the batch
  CHECK_THROWS_AS(
      RunConfig::from_json_text("{\"curriculum\": {\"v_max\": 9.0}}"),
      ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text(
                      "{\"domain_randomization\": {\"friction_range\": "
                      "[1.0, 0.2]}}"),
                  ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json_text("{\"seeds\": []}"), ConfigError);
}

TEST_CASE("robot spec can come from a file") {
  const std::string dir = "build_test_config";
  std::filesystem::create_directories(dir);
  const std::string spec_path = dir + "/robot.json";
  {
    std::ofstream out(spec_path);
    out << "{\"name\": \"file_biped\", \"links\": {\"torso\": {\"mass\": "
           "21.0}}}";
  }
  const RunConfig cfg = RunConfig::from_json_text(
      "{\"robot\": \"" + spec_path + "\"}");
  CHECK(cfg.robot.name == "file_biped");
  CHECK(cfg.robot.torso.mass == 21.0);
  // Everything else fell back to the built-in defaults.
  CHECK(cfg.robot.thigh.mass == 4.0);

  CHECK_THROWS_AS(RunConfig::from_json_text("{\"robot\": \"missing.json\"}"),
                  kinolab::IoError);
}

TEST_CASE("robot spec json round-trips through the config") {
  RunConfig cfg;
  cfg.robot.torso.mass = 19.5;
  cfg.robot.finalize();
  const RunConfig parsed = RunConfig::from_json_text(cfg.to_json_text());
  CHECK(parsed.robot.torso.mass == 19.5);
  CHECK(parsed.robot.nominal_base_height ==
        doctest::Approx(cfg.robot.nominal_base_height));
}
