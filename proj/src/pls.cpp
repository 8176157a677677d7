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

#include "exoassist/pls.hpp"

#include <cmath>
#include <string>

#include "exoassist/errors.hpp"
#include "exoassist/io.hpp"
#include "json_util.hpp"

namespace exoassist {

using nlohmann::json;
using detail::json_mat;
using detail::json_vec;
using detail::mat_json;
using detail::vec_json;

PlsModel pls_fit(const Eigen::MatrixXd& samples, const Eigen::VectorXd& labels, int components) {
  const Eigen::Index n = samples.rows();
  const Eigen::Index p = samples.cols();
  if (labels.size() != n) throw ConfigError("pls: sample and label counts differ");
  if (n < 2) throw DegenerateLabels("pls needs at least 2 samples");
  if (components < 1 || components > p) {
    throw ConfigError("pls: component count must be in [1, " + std::to_string(p) + "]");
  }
  if (!samples.allFinite() || !labels.allFinite()) throw ConfigError("pls: non-finite data");

  PlsModel m;
  m.y_mean = labels.mean();
  m.y_scale = std::sqrt((labels.array() - m.y_mean).square().sum() / static_cast<double>(n - 1));
  if (!(m.y_scale > 0.0)) throw DegenerateLabels("pls labels are constant");

  m.x_mean = samples.colwise().mean().transpose();
  m.x_scale.resize(p);
  for (Eigen::Index c = 0; c < p; ++c) {
    const double var =
        (samples.col(c).array() - m.x_mean(c)).square().sum() / static_cast<double>(n - 1);
    m.x_scale(c) = var > 0.0 ? std::sqrt(var) : 1.0;
  }

  const Eigen::MatrixXd Z =
      (samples.rowwise() - m.x_mean.transpose()).array().rowwise() / m.x_scale.transpose().array();
  const Eigen::VectorXd y = (labels.array() - m.y_mean) / m.y_scale;

  Eigen::MatrixXd X = Z;
  Eigen::VectorXd r = y;
  m.W.resize(p, components);
  for (int a = 0; a < components; ++a) {
    Eigen::VectorXd w = X.transpose() * r;
    const double norm = w.norm();
    if (!(norm > 1e-12 * std::sqrt(static_cast<double>(n)))) {
      throw RankDeficient("pls: no covariance left for component " + std::to_string(a + 1));
    }
    w /= norm;
    const Eigen::VectorXd t = X * w;
    const double tt = t.squaredNorm();
    X -= t * (X.transpose() * t / tt).transpose();
    r -= (r.dot(t) / tt) * t;
    m.W.col(a) = w;
  }

  m.training_scores = Z * m.W;
  Eigen::MatrixXd design(n, components + 1);
  design.col(0).setOnes();
  design.rightCols(components) = m.training_scores;
  const auto qr = design.colPivHouseholderQr();
  if (qr.rank() < components + 1) throw RankDeficient("pls: score regression is rank deficient");
  const Eigen::VectorXd beta = qr.solve(y);
  m.intercept = beta(0);
  m.coefficients = beta.tail(components);

  const Eigen::VectorXd fitted = (design * beta).array() * m.y_scale + m.y_mean;
  const double sse = (fitted - labels).squaredNorm();
  const double sst = (labels.array() - m.y_mean).square().sum();
  m.training_rmse = std::sqrt(sse / static_cast<double>(n));
  m.training_r2 = 1.0 - sse / sst;
  return m;
}

Eigen::VectorXd pls_project(const PlsModel& model, const Eigen::VectorXd& psi) {
  if (psi.size() != model.features()) throw ConfigError("pls: feature dimension mismatch");
  const Eigen::VectorXd z = (psi - model.x_mean).cwiseQuotient(model.x_scale);
  return model.W.transpose() * z;
}

double predict_goal(const PlsModel& model, const Eigen::VectorXd& psi) {
  const Eigen::VectorXd mu = pls_project(model, psi);
  return model.y_mean + model.y_scale * (model.intercept + model.coefficients.dot(mu));
}

json pls_to_json(const PlsModel& m) {
  json doc;
  doc["schema"] = "exoassist.pls";
  doc["version"] = kPlsSchemaVersion;
  doc["features"] = m.features();
  doc["components"] = m.components();
  doc["samples"] = m.training_scores.rows();
  doc["W"] = mat_json(m.W);
  doc["coefficients"] = vec_json(m.coefficients);
  doc["intercept"] = m.intercept;
  doc["x_mean"] = vec_json(m.x_mean);
  doc["x_scale"] = vec_json(m.x_scale);
  doc["y_mean"] = m.y_mean;
  doc["y_scale"] = m.y_scale;
  doc["training_scores"] = mat_json(m.training_scores);
  doc["training_rmse"] = m.training_rmse;
  doc["training_r2"] = m.training_r2;
  return doc;
}

PlsModel pls_from_json(const json& doc) {
  try {
    if (doc.at("schema") != "exoassist.pls") throw IoError("pls model: wrong schema tag");
    if (doc.at("version").get<int>() != kPlsSchemaVersion) {
      throw IoError("pls model: unsupported schema version");
    }
    const int p = doc.at("features").get<int>();
    const int j = doc.at("components").get<int>();
    const int n = doc.at("samples").get<int>();
    if (p < 1 || j < 1 || j > p || n < 2) throw IoError("pls model: bad dimensions");
    PlsModel m;
    m.W = json_mat(doc.at("W"), p, j, "pls model: W");
    m.coefficients = json_vec(doc.at("coefficients"), j, "pls model: coefficients");
    m.intercept = doc.at("intercept").get<double>();
    m.x_mean = json_vec(doc.at("x_mean"), p, "pls model: x_mean");
    m.x_scale = json_vec(doc.at("x_scale"), p, "pls model: x_scale");
    m.y_mean = doc.at("y_mean").get<double>();
    m.y_scale = doc.at("y_scale").get<double>();
    m.training_scores = json_mat(doc.at("training_scores"), n, j, "pls model: training_scores");
    m.training_rmse = doc.at("training_rmse").get<double>();
    m.training_r2 = doc.at("training_r2").get<double>();
    if (!(m.x_scale.array() > 0.0).all() || !(m.y_scale > 0.0)) {
      throw IoError("pls model: scales must be positive");
    }
    return m;
  } catch (const json::exception& e) {
    throw IoError(std::string("pls model: ") + e.what());
  }
}

void save_pls(const std::filesystem::path& path, const PlsModel& model) {
  write_file_atomic(path, pls_to_json(model).dump(1) + "\n");
}

PlsModel load_pls(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return pls_from_json(doc);
}

}  // namespace exoassist
