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

#include <fstream>
#include <string>
#include <vector>

namespace kinolab {

// Shortest round-trip decimal form; identical runs produce identical bytes.
std::string format_double(double v);

// Append-only CSV with a fixed header written on open.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void flush();
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  size_t columns_;
  std::ofstream out_;
};

// Whole-file atomic write (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace kinolab
