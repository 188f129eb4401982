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

#include "checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "errors.hpp"
#include "json_util.hpp"

namespace kinolab::trainer {

namespace {

constexpr char kMagic[8] = {'K', 'L', 'A', 'B', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kFormatVersion = 1;

struct TensorRef {
  std::string name;
  const double* data;
  std::int64_t rows, cols;
};

// Stable tensor enumeration; load order must match save order.
std::vector<TensorRef> enumerate_tensors(Checkpoint& ckpt) {
  std::vector<TensorRef> refs;
  auto add = [&refs](const std::string& name, const Eigen::MatrixXd& m) {
    refs.push_back({name, m.data(), m.rows(), m.cols()});
  };
  auto add_row = [&refs](const std::string& name, const Eigen::RowVectorXd& v) {
    refs.push_back({name, v.data(), 1, v.size()});
  };
  auto add_vec = [&refs](const std::string& name, const Eigen::VectorXd& v) {
    refs.push_back({name, v.data(), v.size(), 1});
  };
  Policy& p = ckpt.policy;
  for (int l = 0; l < p.actor.num_layers(); ++l) {
    add("actor.w" + std::to_string(l), p.actor.weights()[l]);
    add_row("actor.b" + std::to_string(l), p.actor.biases()[l]);
  }
  for (int l = 0; l < p.critic.num_layers(); ++l) {
    add("critic.w" + std::to_string(l), p.critic.weights()[l]);
    add_row("critic.b" + std::to_string(l), p.critic.biases()[l]);
  }
  add_row("log_std", p.log_std);
  add_vec("obs_norm.mean", ckpt.obs_normalizer.mean_);
  add_vec("obs_norm.m2", ckpt.obs_normalizer.m2_);
  add_vec("priv_norm.mean", ckpt.priv_normalizer.mean_);
  add_vec("priv_norm.m2", ckpt.priv_normalizer.m2_);
  return refs;
}

Json curriculum_json(const curriculum::CurriculumState& c) {
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
  return j;
}

curriculum::CurriculumState curriculum_from_json(const Json& j) {
  curriculum::CurriculumState c;
  reject_unknown_keys(j, "checkpoint curriculum",
                      {"v_min", "v_max", "v_cap", "v_increment", "cycle_time",
                       "cycle_shrink", "cycle_floor", "lambda_threshold",
                       "lateral_range", "yaw_range"});
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
  return c;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt_in, const std::string& path) {
  Checkpoint& ckpt = const_cast<Checkpoint&>(ckpt_in);  // read-only access
  const auto tensors = enumerate_tensors(ckpt);

  Json header;
  header["format_version"] = kFormatVersion;
  header["obs_dim"] = ckpt.policy.config.obs_dim;
  header["priv_dim"] = ckpt.policy.config.priv_dim;
  header["action_dim"] = ckpt.policy.config.action_dim;
  header["actor_hidden"] = ckpt.policy.config.actor_hidden;
  header["critic_hidden"] = ckpt.policy.config.critic_hidden;
  header["init_log_std"] = ckpt.policy.config.init_log_std;
  header["min_log_std"] = ckpt.policy.config.min_log_std;
  header["actor_final_scale"] = ckpt.policy.config.actor_final_scale;
  header["obs_norm_count"] = ckpt.obs_normalizer.count_;
  header["priv_norm_count"] = ckpt.priv_normalizer.count_;
  header["obs_norm_enabled"] = ckpt.obs_normalizer.enabled_;
  header["priv_norm_enabled"] = ckpt.priv_normalizer.enabled_;
  header["iteration"] = ckpt.iteration;
  header["total_steps"] = ckpt.total_steps;
  header["curriculum"] = curriculum_json(ckpt.curriculum);
  header["config_json"] = ckpt.config_json;
  Json tensor_table = Json::array();
  std::uint64_t payload_doubles = 0;
  for (const auto& t : tensors) {
    Json row;
    row["name"] = t.name;
    row["rows"] = t.rows;
    row["cols"] = t.cols;
    tensor_table.push_back(row);
    payload_doubles += static_cast<std::uint64_t>(t.rows * t.cols);
  }
  header["tensors"] = tensor_table;
  header["layout"] = "col_major";
  const std::string header_str = header.dump();

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint: " + path);
    out.write(kMagic, sizeof(kMagic));
    const std::uint32_t version = kFormatVersion;
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    const std::uint64_t header_len = header_str.size();
    out.write(reinterpret_cast<const char*>(&header_len), sizeof(header_len));
    out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));
    const std::uint64_t payload_bytes = payload_doubles * sizeof(double);
    out.write(reinterpret_cast<const char*>(&payload_bytes), sizeof(payload_bytes));
    for (const auto& t : tensors) {
      out.write(reinterpret_cast<const char*>(t.data),
                static_cast<std::streamsize>(t.rows * t.cols * sizeof(double)));
    }
    if (!out) throw IoError("short write on checkpoint: " + path);
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint: " + path);

  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError("bad checkpoint magic: " + path);
  }
  std::uint32_t version = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  if (!in || version != kFormatVersion) {
    throw CheckpointError("unsupported checkpoint format version");
  }
  std::uint64_t header_len = 0;
  in.read(reinterpret_cast<char*>(&header_len), sizeof(header_len));
  if (!in || header_len > (1ull << 30)) {
    throw CheckpointError("corrupt checkpoint header length");
  }
  std::string header_str(header_len, '\0');
  in.read(header_str.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw CheckpointError("truncated checkpoint header");

  Json header;
  try {
    header = Json::parse(header_str);
  } catch (const std::exception& e) {
    throw CheckpointError(std::string("corrupt checkpoint header: ") + e.what());
  }
  if (header.at("format_version").get<std::uint32_t>() != kFormatVersion) {
    throw CheckpointError("checkpoint header version mismatch");
  }

  Checkpoint ckpt;
  PolicyConfig cfg;
  cfg.obs_dim = header.at("obs_dim").get<int>();
  cfg.priv_dim = header.at("priv_dim").get<int>();
  cfg.action_dim = header.at("action_dim").get<int>();
  cfg.actor_hidden = header.at("actor_hidden").get<std::vector<int>>();
  cfg.critic_hidden = header.at("critic_hidden").get<std::vector<int>>();
  cfg.init_log_std = header.at("init_log_std").get<double>();
  cfg.min_log_std = header.at("min_log_std").get<double>();
  cfg.actor_final_scale = header.at("actor_final_scale").get<double>();
  Rng dummy(0);
  ckpt.policy = Policy(cfg, dummy);
  ckpt.obs_normalizer = RunningNormalizer(
      cfg.obs_dim, header.at("obs_norm_enabled").get<bool>());
  ckpt.priv_normalizer = RunningNormalizer(
      cfg.priv_dim, header.at("priv_norm_enabled").get<bool>());
  ckpt.obs_normalizer.count_ = header.at("obs_norm_count").get<double>();
  ckpt.priv_normalizer.count_ = header.at("priv_norm_count").get<double>();
  ckpt.iteration = header.at("iteration").get<long>();
  ckpt.total_steps = header.at("total_steps").get<long long>();
  ckpt.curriculum = curriculum_from_json(header.at("curriculum"));
  ckpt.config_json = header.at("config_json").get<std::string>();

  std::uint64_t payload_bytes = 0;
  in.read(reinterpret_cast<char*>(&payload_bytes), sizeof(payload_bytes));
  if (!in) throw CheckpointError("truncated checkpoint payload header");

  const auto tensors = enumerate_tensors(ckpt);
  const auto& table = header.at("tensors");
  if (table.size() != tensors.size()) {
    throw CheckpointError("checkpoint tensor table size mismatch");
  }
  std::uint64_t expected_bytes = 0;
  for (size_t i = 0; i < tensors.size(); ++i) {
    const auto& row = table[i];
    if (row.at("name").get<std::string>() != tensors[i].name ||
        row.at("rows").get<std::int64_t>() != tensors[i].rows ||
        row.at("cols").get<std::int64_t>() != tensors[i].cols) {
      throw CheckpointError("checkpoint shape mismatch for tensor '" +
                            tensors[i].name + "'");
    }
    expected_bytes += tensors[i].rows * tensors[i].cols * sizeof(double);
  }
  if (payload_bytes != expected_bytes) {
    throw CheckpointError("checkpoint payload size mismatch");
  }
  for (const auto& t : tensors) {
    in.read(reinterpret_cast<char*>(const_cast<double*>(t.data)),
            static_cast<std::streamsize>(t.rows * t.cols * sizeof(double)));
    if (!in) throw CheckpointError("truncated checkpoint payload");
  }
  // No trailing garbage.
  char extra;
  in.read(&extra, 1);
  if (!in.eof()) throw CheckpointError("trailing bytes after checkpoint payload");
  return ckpt;
}

}  // namespace kinolab::trainer
