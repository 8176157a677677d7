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

#include "exoassist/blend.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "exoassist/errors.hpp"
#include "exoassist/io.hpp"

namespace exoassist {

BlendSet::BlendSet(std::vector<AffinePolicy> policies, std::vector<double> weights,
                   double value_scale)
    : policies_(std::move(policies)), weights_(std::move(weights)), value_scale_(value_scale) {
  if (policies_.empty()) throw IncompatiblePolicies("blend set needs at least one policy");
  if (weights_.size() != policies_.size()) {
    throw ConfigError("blend set: " + std::to_string(weights_.size()) + " weights for " +
                      std::to_string(policies_.size()) + " policies");
  }
  if (!(std::isfinite(value_scale_) && value_scale_ >= 0.0)) {
    throw ConfigError("blend set: value scale must be finite and >= 0");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(std::isfinite(w) && w >= 0.0)) throw ConfigError("blend weights must be >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw AllWeightsZero("blend weights sum to zero");

  const AffinePolicy& ref = policies_.front();
  for (const auto& p : policies_) {
    if (p.horizon() != ref.horizon() || p.dt() != ref.dt() ||
        p.state_dim() != ref.state_dim() || p.control_dim() != ref.control_dim()) {
      throw IncompatiblePolicies("blend set policies differ in horizon, dt or dimensions");
    }
    if (!p.cost.same_running_cost(ref.cost)) {
      throw IncompatiblePolicies("blend set policies differ in running cost");
    }
  }
}

Eigen::VectorXd mixing_coefficients(const std::vector<double>& weights,
                                    const Eigen::VectorXd& values) {
  const Eigen::Index n = values.size();
  Eigen::VectorXd logits = Eigen::VectorXd::Constant(n, -std::numeric_limits<double>::infinity());
  double top = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (weights[i] > 0.0) {
      logits(i) = std::log(weights[i]) - values(i);
      top = std::max(top, logits(i));
    }
  }
  if (!std::isfinite(top)) throw AllWeightsZero("no policy has positive weight");

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (weights[i] > 0.0) {
      alpha(i) = std::exp(logits(i) - top);
      sum += alpha(i);
    }
  }
  return alpha / sum;
}

BlendCoefficients coefficients(const BlendSet& set, const Eigen::VectorXd& x, int k) {
  Eigen::VectorXd values(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    values(i) = set.weights()[i] > 0.0 ? set.value_scale() * set.policies()[i].value(x, k) : 0.0;
  }
  return {mixing_coefficients(set.weights(), values)};
}

BlendCoefficients coefficients(const BlendSet& set, const PlantState& x, int k) {
  return coefficients(set, x.vec(), k);
}

Eigen::VectorXd blended_control_unclamped(const BlendSet& set, const Eigen::VectorXd& x, int k) {
  const Eigen::VectorXd alpha = coefficients(set, x, k).alpha;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(set.policies().front().control_dim());
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (alpha(i) == 0.0) continue;
    u += alpha(i) * set.policies()[i].control(x, k);
  }
  return u;
}

ControlInput blended_control(const BlendSet& set, const PlantState& x, int k) {
  const Eigen::VectorXd u = blended_control_unclamped(set, x.vec(), k);
  return ControlInput::from_vec(u.cwiseMax(0.0).cwiseMin(kMaxPressure));
}

BlendedRollout blended_rollout(const BlendSet& set, const PlantState& x0, const ArmModel& model) {
  BlendedRollout out;
  out.trajectory.dt = model.dt;
  out.trajectory.states.push_back(x0);
  const int N = set.horizon();
  for (int k = 0; k < N; ++k) {
    const PlantState& x = out.trajectory.states.back();
    out.coefficients.push_back(coefficients(set, x, k));
    const ControlInput u = blended_control(set, x, k);
    out.trajectory.controls.push_back(u);
    try {
      out.trajectory.states.push_back(dynamics_step(x, u, model));
    } catch (const NonFiniteState&) {
      throw NonFiniteState("blended rollout diverged at step " + std::to_string(k), k);
    }
  }
  return out;
}

std::string coefficients_csv(const std::vector<BlendCoefficients>& series) {
  CsvTable t;
  t.header.push_back("k");
  const Eigen::Index n = series.empty() ? 0 : series.front().alpha.size();
  for (Eigen::Index i = 0; i < n; ++i) t.header.push_back("alpha_" + std::to_string(i + 1));
  for (std::size_t k = 0; k < series.size(); ++k) {
    std::vector<double> row{static_cast<double>(k)};
    for (Eigen::Index i = 0; i < n; ++i) row.push_back(series[k].alpha(i));
    t.rows.push_back(std::move(row));
  }
  return t.to_string();
}

}  // namespace exoassist
