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
#include <initializer_list>
#include <json.hpp>
#include <string>

#include "errors.hpp"

namespace kinolab {

using Json = nlohmann::ordered_json;

// Strict parsing: every key in `j` must be in the allowed list.
inline void reject_unknown_keys(const Json& j, const std::string& context,
                                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) {
    throw ConfigError(context + ": expected an object");
  }
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* name : allowed) {
      if (key == name) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError(context + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
void read_field(const Json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) {
    out = it->get<T>();
  }
}

inline void read_vec3(const Json& j, const char* key, Eigen::Vector3d& out) {
  if (auto it = j.find(key); it != j.end()) {
    if (!it->is_array() || it->size() != 3) {
      throw ConfigError(std::string("expected a 3-element array for '") + key + "'");
    }
    out = Eigen::Vector3d((*it)[0].get<double>(), (*it)[1].get<double>(),
                          (*it)[2].get<double>());
  }
}

inline Json vec3_json(const Eigen::Vector3d& v) {
  return Json::array({v.x(), v.y(), v.z()});
}

}  // namespace kinolab
