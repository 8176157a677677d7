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

#include "exoassist/plant.hpp"

namespace exoassist {

// Release-point terminal cost plus pressure / pressure-rate running cost:
//   g = C_a |theta(T) - theta*|^2 + C_v |omega(T) - omega*|^2
//   l = C_p |P_ref(k)|^2 + C_pd |(P_ref(k) - P_ref(k-1)) / dt|^2
struct CostSpec {
  Vector2 theta_target = Vector2::Zero();
  Vector2 omega_target = Vector2::Zero();
  double c_a = 500.0;
  double c_v = 50.0;
  double c_p = 1e-2;
  double c_pd = 1e-4;
  int horizon = 60;
  double dt = 0.01;

  // Throws ConfigError.
  void validate() const;
};

// General quadratic trajectory cost over n states and m controls:
//   (x_N - r)' Qf (x_N - r)
//   + sum_k (x_k - r)' Q (x_k - r) + u_k' R u_k + du_k' Rd du_k
// with du_k = (u_k - u_{k-1}) / dt and du_0 = 0. No 1/2 factors.
struct QuadraticCost {
  Eigen::VectorXd target;
  Eigen::MatrixXd terminal_weight;
  Eigen::MatrixXd state_weight;
  Eigen::MatrixXd control_weight;
  Eigen::MatrixXd rate_weight;
  int horizon = 0;
  double dt = 0.01;

  static QuadraticCost from_spec(const CostSpec& spec);

  int state_dim() const { return static_cast<int>(target.size()); }
  int control_dim() const { return static_cast<int>(control_weight.rows()); }

  double terminal(const Eigen::VectorXd& x) const;
  // Stage cost at k; `u_prev` is ignored for k == 0.
  double running(int k, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                 const Eigen::VectorXd& u_prev) const;
  // Throws HorizonMismatch unless xs has horizon+1 and us horizon entries.
  double total(const std::vector<Eigen::VectorXd>& xs,
               const std::vector<Eigen::VectorXd>& us) const;

  // True when both costs share everything except the terminal term.
  bool same_running_cost(const QuadraticCost& other) const;
};

// Total cost of a plant trajectory. Throws HorizonMismatch.
double total_cost(const Trajectory& traj, const CostSpec& spec);

}  // namespace exoassist
