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

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "exoassist/errors.hpp"

namespace exoassist::detail {

inline nlohmann::json vec_json(const Eigen::VectorXd& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

// Row-major nested arrays.
inline nlohmann::json mat_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vec_json(m.row(r).transpose()));
  return rows;
}

inline Eigen::VectorXd json_vec(const nlohmann::json& j, Eigen::Index n, const std::string& what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n) {
    throw IoError(what + " has wrong length");
  }
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = j.at(i).get<double>();
  return v;
}

inline Eigen::MatrixXd json_mat(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols,
                                const std::string& what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw IoError(what + " has wrong row count");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) m.row(r) = json_vec(j.at(r), cols, what).transpose();
  return m;
}

}  // namespace exoassist::detail
