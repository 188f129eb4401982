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

#include "metrics.hpp"

#include <charconv>
#include <filesystem>

#include "errors.hpp"

namespace kinolab {

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw IoError("format_double failed");
  return std::string(buf, ptr);
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& columns)
    : path_(path), columns_(columns.size()) {
  std::filesystem::create_directories(
      std::filesystem::path(path).parent_path());
  out_.open(path, std::ios::trunc);
  if (!out_) throw IoError("cannot open metrics file: " + path);
  for (size_t i = 0; i < columns.size(); ++i) {
    out_ << (i == 0 ? "" : ",") << columns[i];
  }
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) {
    throw InvalidInput("csv row width does not match the header");
  }
  for (size_t i = 0; i < values.size(); ++i) {
    out_ << (i == 0 ? "" : ",") << format_double(values[i]);
  }
  out_ << "\n";
  out_.flush();
}

void CsvWriter::flush() { out_.flush(); }

void write_file_atomic(const std::string& path, const std::string& contents) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + path);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("short write: " + path);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace kinolab
