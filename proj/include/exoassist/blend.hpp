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

#include <Eigen/Dense>
#include <vector>

#include "exoassist/ilqr.hpp"
#include "exoassist/plant.hpp"

namespace exoassist {

// Policies solved for problems that differ only in their terminal cost,
// mixed with intent weights w. Immutable once built.
class BlendSet {
 public:
  // Throws IncompatiblePolicies (horizon, dt or running cost differ, or
  // empty set) and AllWeightsZero / ConfigError for bad weights.
  // `value_scale` multiplies every value function before exponentiation.
  BlendSet(std::vector<AffinePolicy> policies, std::vector<double> weights,
           double value_scale = 1e-3);

  std::size_t size() const { return policies_.size(); }
  int horizon() const { return policies_.front().horizon(); }
  double dt() const { return policies_.front().dt(); }
  double value_scale() const { return value_scale_; }
  const std::vector<AffinePolicy>& policies() const { return policies_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<AffinePolicy> policies_;
  std::vector<double> weights_;
  double value_scale_;
};

// alpha_i = w_i z_i / sum_j w_j z_j with z_i = exp(-scale * v_i(x, k)),
// evaluated as a softmax over log w_i - scale * v_i for the w_i > 0.
struct BlendCoefficients {
  Eigen::VectorXd alpha;
};

BlendCoefficients coefficients(const BlendSet& set, const Eigen::VectorXd& x, int k);
BlendCoefficients coefficients(const BlendSet& set, const PlantState& x, int k);

// Same softmax from explicit value-function values; entries with zero weight
// receive alpha = 0 exactly. Throws AllWeightsZero.
Eigen::VectorXd mixing_coefficients(const std::vector<double>& weights,
                                    const Eigen::VectorXd& values);

// sum_i alpha_i (u_bar_i + l_i + L_i (x - x_bar_i)) before clamping; terms
// with alpha_i == 0 are skipped.
Eigen::VectorXd blended_control_unclamped(const BlendSet& set, const Eigen::VectorXd& x, int k);

// Clamped to [0, kMaxPressure].
ControlInput blended_control(const BlendSet& set, const PlantState& x, int k);

struct BlendedRollout {
  Trajectory trajectory;
  std::vector<BlendCoefficients> coefficients;  // one per control step
};

BlendedRollout blended_rollout(const BlendSet& set, const PlantState& x0, const ArmModel& model);

// Header k,alpha_1..alpha_n.
std::string coefficients_csv(const std::vector<BlendCoefficients>& series);

}  // namespace exoassist
