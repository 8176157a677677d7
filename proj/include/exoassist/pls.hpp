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

#include <Eigen/Dense>
#include <json.hpp>

namespace exoassist {

inline constexpr int kPlsSchemaVersion = 1;

// Single-response PLS on z-scored features. Scores are mu = W' z with
// z = (psi - x_mean) / x_scale; the label is y_mean + y_scale * (c0 + c' mu).
struct PlsModel {
  Eigen::MatrixXd W;             // p x j, unit-norm columns
  Eigen::VectorXd coefficients;  // c, j
  double intercept = 0.0;        // c0, standardized label units
  Eigen::VectorXd x_mean;
  Eigen::VectorXd x_scale;       // 1 for zero-variance channels
  double y_mean = 0.0;
  double y_scale = 1.0;
  Eigen::MatrixXd training_scores;  // n x j
  double training_rmse = 0.0;       // label units
  double training_r2 = 0.0;

  int components() const { return static_cast<int>(W.cols()); }
  int features() const { return static_cast<int>(W.rows()); }
};

// NIPALS extraction of j directions, each maximizing the squared covariance
// between the deflated features and the deflated label. Samples are rows.
// Throws DegenerateLabels (fewer than 2 samples or constant labels) and
// RankDeficient (no covariance left for a requested direction).
PlsModel pls_fit(const Eigen::MatrixXd& samples, const Eigen::VectorXd& labels, int components);

Eigen::VectorXd pls_project(const PlsModel& model, const Eigen::VectorXd& psi);
double predict_goal(const PlsModel& model, const Eigen::VectorXd& psi);

nlohmann::json pls_to_json(const PlsModel& model);
// Throws IoError.
PlsModel pls_from_json(const nlohmann::json& doc);
void save_pls(const std::filesystem::path& path, const PlsModel& model);
PlsModel load_pls(const std::filesystem::path& path);

}  // namespace exoassist
