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

#include "robot_spec.hpp"

#include <cmath>
#include <fstream>

#include "errors.hpp"
#include "fk.hpp"
#include "json_util.hpp"
#include "spec_json.hpp"

namespace kinolab::env {

namespace {

// One template per joint type; the 16-joint array is built by mirroring.
struct JointTemplate {
  const char* name;
  int axis;
  double default_angle;
  double lower, upper;
  double velocity_limit;
  double torque_limit;
  double kp, kd;
  double damping;
  double reflected_inertia;
};

constexpr int kNumJointTypes = 8;

const JointTemplate kDefaultJointTypes[kNumJointTypes] = {
    // name              axis  default  lower  upper  vlim  tlim  kp    kd   damp  inertia
    {"hip_roll",          0,   0.0,    -0.6,   0.6,   30,   80,   90.0, 5.0, 0.8,  0.90},
    {"hip_yaw",           2,   0.0,    -0.6,   0.6,   30,   60,   60.0, 4.0, 0.8,  0.35},
    {"hip_pitch",         1,  -0.2,    -1.3,   1.3,   30,   90,  100.0, 6.0, 0.8,  1.00},
    {"knee_pitch",        1,   0.4,    -0.05,  2.0,   30,   90,  100.0, 6.0, 0.8,  0.45},
    {"ankle_pitch",       1,  -0.2,    -1.0,   1.0,   30,   40,   35.0, 2.0, 0.4,  0.08},
    {"ankle_roll",        0,   0.0,    -0.5,   0.5,   30,   30,   30.0, 1.5, 0.4,  0.05},
    {"shoulder_pitch",    1,   0.0,    -2.5,   2.5,   30,   30,   30.0, 2.0, 0.4,  0.30},
    {"elbow_pitch",       1,  -0.3,    -2.0,   2.0,   30,   20,   15.0, 1.0, 0.3,  0.08},
};

// Joint index -> (type, side); side 0 left, 1 right.
struct JointSlot {
  int type;
  int side;
};

const JointSlot kJointLayout[kNumJoints] = {
    {0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0},  // left leg
    {0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1},  // right leg
    {6, 0}, {7, 0},                                  // left arm
    {6, 1}, {7, 1},                                  // right arm
};

JointSpec instantiate(const JointTemplate& t, int side) {
  JointSpec j;
  j.axis = t.axis;
  j.velocity_limit = t.velocity_limit;
  j.torque_limit = t.torque_limit;
  j.kp = t.kp;
  j.kd = t.kd;
  j.damping = t.damping;
  j.reflected_inertia = t.reflected_inertia;
  const bool lateral = t.axis != 1;  // roll/yaw joints flip on the right side
  if (side == 1 && lateral) {
    j.default_angle = -t.default_angle;
    j.lower_limit = -t.upper;
    j.upper_limit = -t.lower;
  } else {
    j.default_angle = t.default_angle;
    j.lower_limit = t.lower;
    j.upper_limit = t.upper;
  }
  j.name = std::string(side == 0 ? "left_" : "right_") + t.name;
  return j;
}

}  // namespace

double RobotSpec::total_mass() const {
  return torso.mass + 2.0 * (thigh.mass + shank.mass + foot.mass) +
         2.0 * (upper_arm.mass + forearm.mass);
}

Eigen::VectorXd RobotSpec::default_angles() const {
  Eigen::VectorXd q(kNumJoints);
  for (int i = 0; i < kNumJoints; ++i) q[i] = joints[i].default_angle;
  return q;
}

void RobotSpec::finalize() {
  const Eigen::VectorXd q = default_angles();
  const Eigen::VectorXd dq = Eigen::VectorXd::Zero(kNumJoints);
  const auto kin = forward_kinematics(*this, Eigen::Vector3d::Zero(),
                                      Eigen::Matrix3d::Identity(),
                                      Eigen::Vector3d::Zero(),
                                      Eigen::Vector3d::Zero(), q, dq);
  // Stand the base so the lowest contact point touches the ground.
  double lowest = 0.0;
  for (const auto& p : kin.contact_points) lowest = std::min(lowest, p.z());
  nominal_base_height = -lowest;
}

void RobotSpec::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("robot spec: ") + what + " must be positive");
    }
  };
  for (const auto* link : {&torso, &thigh, &shank, &foot, &upper_arm, &forearm}) {
    positive(link->mass, "link mass");
    if (!(link->inertia.minCoeff() >= 0.0)) {
      throw ConfigError("robot spec: link inertia must be non-negative");
    }
  }
  positive(thigh_length, "thigh_length");
  positive(shank_length, "shank_length");
  positive(upper_arm_length, "upper_arm_length");
  positive(forearm_length, "forearm_length");
  positive(action_scale, "action_scale");
  positive(action_clip, "action_clip");
  positive(nominal_base_height, "nominal_base_height");

  for (int i = 0; i < kNumJoints; ++i) {
    const JointSpec& j = joints[i];
    if (!(j.lower_limit < j.upper_limit)) {
      throw ConfigError("robot spec: joint '" + j.name + "' has empty limits");
    }
    if (!(j.default_angle >= j.lower_limit && j.default_angle <= j.upper_limit)) {
      throw ConfigError("robot spec: joint '" + j.name +
                        "' default outside limits");
    }
    positive(j.torque_limit, "torque_limit");
    positive(j.reflected_inertia, "reflected_inertia");
    positive(j.velocity_limit, "velocity_limit");
    if (j.kp < 0 || j.kd < 0 || j.damping < 0) {
      throw ConfigError("robot spec: negative gain or damping");
    }
  }

  // Left/right mirror invariant.
  for (int i = 0; i < kNumJoints; ++i) {
    const auto slot = kJointLayout[i];
    if (slot.side != 0) continue;
    int mirror_index = -1;
    for (int k = 0; k < kNumJoints; ++k) {
      if (kJointLayout[k].type == slot.type && kJointLayout[k].side == 1) {
        mirror_index = k;
        break;
      }
    }
    const JointSpec& l = joints[i];
    const JointSpec& r = joints[mirror_index];
    const bool lateral = l.axis != 1;
    const double sign = lateral ? -1.0 : 1.0;
    const bool mirrored =
        l.axis == r.axis && l.torque_limit == r.torque_limit && l.kp == r.kp &&
        l.kd == r.kd && l.damping == r.damping &&
        l.reflected_inertia == r.reflected_inertia &&
        r.default_angle == sign * l.default_angle &&
        (lateral ? (r.lower_limit == -l.upper_limit &&
                    r.upper_limit == -l.lower_limit)
                 : (r.lower_limit == l.lower_limit &&
                    r.upper_limit == l.upper_limit));
    if (!mirrored) {
      throw ConfigError("robot spec: joint '" + l.name +
                        "' is not mirrored on the right side");
    }
  }
}

RobotSpec RobotSpec::reduced_biped() {
  RobotSpec spec;
  spec.torso = {18.0, {0.35, 0.30, 0.12}};
  spec.thigh = {4.0, {0.032, 0.032, 0.004}};
  spec.shank = {2.5, {0.020, 0.020, 0.002}};
  spec.foot = {0.8, {0.001, 0.003, 0.003}};
  spec.upper_arm = {1.2, {0.007, 0.007, 0.001}};
  spec.forearm = {0.8, {0.004, 0.004, 0.0006}};
  for (int i = 0; i < kNumJoints; ++i) {
    spec.joints[i] =
        instantiate(kDefaultJointTypes[kJointLayout[i].type], kJointLayout[i].side);
  }
  spec.finalize();
  spec.validate();
  return spec;
}

RobotSpec RobotSpec::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open robot spec file: " + path);
  }
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("robot spec '" + path + "': " + e.what());
  }
  return robot_spec_from_json(j);
}

std::string RobotSpec::to_json() const {
  return robot_spec_to_json(*this).dump(2);
}

RobotSpec robot_spec_from_json(const Json& j) {
  RobotSpec spec = RobotSpec::reduced_biped();
  reject_unknown_keys(j, "robot spec",
                      {"name", "links", "geometry", "joints", "action_scale",
                       "action_clip"});
  read_field(j, "name", spec.name);
  read_field(j, "action_scale", spec.action_scale);
  read_field(j, "action_clip", spec.action_clip);

  if (auto links = j.find("links"); links != j.end()) {
    reject_unknown_keys(*links, "robot spec links",
                        {"torso", "thigh", "shank", "foot", "upper_arm",
                         "forearm"});
    auto read_link = [&](const char* key, LinkParams& out) {
      if (auto it = links->find(key); it != links->end()) {
        reject_unknown_keys(*it, std::string("robot spec link ") + key,
                            {"mass", "inertia"});
        read_field(*it, "mass", out.mass);
        read_vec3(*it, "inertia", out.inertia);
      }
    };
    read_link("torso", spec.torso);
    read_link("thigh", spec.thigh);
    read_link("shank", spec.shank);
    read_link("foot", spec.foot);
    read_link("upper_arm", spec.upper_arm);
    read_link("forearm", spec.forearm);
  }

  if (auto geo = j.find("geometry"); geo != j.end()) {
    reject_unknown_keys(*geo, "robot spec geometry",
                        {"hip_offset", "shoulder_offset", "thigh_length",
                         "shank_length", "upper_arm_length", "forearm_length",
                         "torso_com", "foot_com", "toe_offset", "heel_offset"});
    read_vec3(*geo, "hip_offset", spec.hip_offset);
    read_vec3(*geo, "shoulder_offset", spec.shoulder_offset);
    read_field(*geo, "thigh_length", spec.thigh_length);
    read_field(*geo, "shank_length", spec.shank_length);
    read_field(*geo, "upper_arm_length", spec.upper_arm_length);
    read_field(*geo, "forearm_length", spec.forearm_length);
    read_vec3(*geo, "torso_com", spec.torso_com);
    read_vec3(*geo, "foot_com", spec.foot_com);
    read_vec3(*geo, "toe_offset", spec.toe_offset);
    read_vec3(*geo, "heel_offset", spec.heel_offset);
  }

  if (auto joints = j.find("joints"); joints != j.end()) {
    reject_unknown_keys(*joints, "robot spec joints",
                        {"hip_roll", "hip_yaw", "hip_pitch", "knee_pitch",
                         "ankle_pitch", "ankle_roll", "shoulder_pitch",
                         "elbow_pitch"});
    for (int type = 0; type < kNumJointTypes; ++type) {
      JointTemplate t = kDefaultJointTypes[type];
      if (auto it = joints->find(t.name); it != joints->end()) {
        reject_unknown_keys(*it, std::string("robot spec joint ") + t.name,
                            {"default_angle", "limits", "velocity_limit",
                             "torque_limit", "kp", "kd", "damping",
                             "reflected_inertia"});
        read_field(*it, "default_angle", t.default_angle);
        if (auto lim = it->find("limits"); lim != it->end()) {
          if (!lim->is_array() || lim->size() != 2) {
            throw ConfigError("robot spec: 'limits' must be [lower, upper]");
          }
          t.lower = (*lim)[0].get<double>();
          t.upper = (*lim)[1].get<double>();
        }
        read_field(*it, "velocity_limit", t.velocity_limit);
        read_field(*it, "torque_limit", t.torque_limit);
        read_field(*it, "kp", t.kp);
        read_field(*it, "kd", t.kd);
        read_field(*it, "damping", t.damping);
        read_field(*it, "reflected_inertia", t.reflected_inertia);
      }
      for (int i = 0; i < kNumJoints; ++i) {
        if (kJointLayout[i].type == type) {
          spec.joints[i] = instantiate(t, kJointLayout[i].side);
        }
      }
    }
  }

  spec.finalize();
  spec.validate();
  return spec;
}

Json robot_spec_to_json(const RobotSpec& spec) {
  Json j;
  j["name"] = spec.name;

  auto link_json = [](const LinkParams& p) {
    Json l;
    l["mass"] = p.mass;
    l["inertia"] = vec3_json(p.inertia);
    return l;
  };
  j["links"]["torso"] = link_json(spec.torso);
  j["links"]["thigh"] = link_json(spec.thigh);
  j["links"]["shank"] = link_json(spec.shank);
  j["links"]["foot"] = link_json(spec.foot);
  j["links"]["upper_arm"] = link_json(spec.upper_arm);
  j["links"]["forearm"] = link_json(spec.forearm);

  Json geo;
  geo["hip_offset"] = vec3_json(spec.hip_offset);
  geo["shoulder_offset"] = vec3_json(spec.shoulder_offset);
  geo["thigh_length"] = spec.thigh_length;
  geo["shank_length"] = spec.shank_length;
  geo["upper_arm_length"] = spec.upper_arm_length;
  geo["forearm_length"] = spec.forearm_length;
  geo["torso_com"] = vec3_json(spec.torso_com);
  geo["foot_com"] = vec3_json(spec.foot_com);
  geo["toe_offset"] = vec3_json(spec.toe_offset);
  geo["heel_offset"] = vec3_json(spec.heel_offset);
  j["geometry"] = geo;

  // Left-side templates; the right side is always the mirror image.
  Json joints;
  for (int type = 0; type < kNumJointTypes; ++type) {
    int index = -1;
    for (int i = 0; i < kNumJoints; ++i) {
      if (kJointLayout[i].type == type && kJointLayout[i].side == 0) {
        index = i;
        break;
      }
    }
    const JointSpec& js = spec.joints[index];
    Json node;
    node["default_angle"] = js.default_angle;
    node["limits"] = Json::array({js.lower_limit, js.upper_limit});
    node["velocity_limit"] = js.velocity_limit;
    node["torque_limit"] = js.torque_limit;
    node["kp"] = js.kp;
    node["kd"] = js.kd;
    node["damping"] = js.damping;
    node["reflected_inertia"] = js.reflected_inertia;
    joints[kDefaultJointTypes[type].name] = node;
  }
  j["joints"] = joints;

  j["action_scale"] = spec.action_scale;
  j["action_clip"] = spec.action_clip;
  return j;
}

}  // namespace kinolab::env
