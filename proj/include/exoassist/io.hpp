// Copyright 2026 The exoassist Authors
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

#include <filesystem>
#include <string>
#include <vector>

#include "exoassist/plant.hpp"

namespace exoassist {

// Fixed 9-significant-digit rendering used by every text output.
std::string format_number(double v);

// Throws IoError.
std::string read_text_file(const std::filesystem::path& path);

// Writes through a sibling temp file and renames it into place, so readers
// never observe a partial file. Creates parent directories. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Minimal numeric CSV: one header line, comma-separated numbers.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string to_string() const;
  // Index of a header column; throws IoError if absent.
  std::size_t column(const std::string& name) const;
};

// Throws IoError on malformed input.
CsvTable parse_csv(const std::string& text);

// Header k,t,theta1,theta2,omega1,omega2,p1,p2,pref1,pref2. The terminal
// state row has no control; its pref columns repeat the last control.
std::string trajectory_csv(const Trajectory& traj);

}  // namespace exoassist
