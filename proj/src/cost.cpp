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

#include "exoassist/cost.hpp"

#include <cmath>
#include <string>

#include "exoassist/errors.hpp"

namespace exoassist {

void CostSpec::validate() const {
  for (double w : {c_a, c_v, c_p, c_pd}) {
    if (!(std::isfinite(w) && w >= 0.0)) throw ConfigError("cost weights must be >= 0");
  }
  if (c_a <= 0.0 && c_v <= 0.0) throw ConfigError("one of c_a, c_v must be positive");
  if (horizon < 1) throw ConfigError("cost horizon must be >= 1");
  if (!(dt > 0.0)) throw ConfigError("cost dt must be > 0");
  if (!theta_target.allFinite() || !omega_target.allFinite()) {
    throw ConfigError("cost targets must be finite");
  }
}

QuadraticCost QuadraticCost::from_spec(const CostSpec& spec) {
  QuadraticCost c;
  c.target = Eigen::VectorXd::Zero(6);
  c.target << spec.theta_target(0), spec.theta_target(1), spec.omega_target(0),
      spec.omega_target(1), 0.0, 0.0;
  Eigen::VectorXd qf(6);
  qf << spec.c_a, spec.c_a, spec.c_v, spec.c_v, 0.0, 0.0;
  c.terminal_weight = qf.asDiagonal();
  c.state_weight = Eigen::MatrixXd::Zero(6, 6);
  c.control_weight = spec.c_p * Eigen::MatrixXd::Identity(2, 2);
  c.rate_weight = spec.c_pd * Eigen::MatrixXd::Identity(2, 2);
  c.horizon = spec.horizon;
  c.dt = spec.dt;
  return c;
}

double QuadraticCost::terminal(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd e = x - target;
  return e.dot(terminal_weight * e);
}

double QuadraticCost::running(int k, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& u_prev) const {
  const Eigen::VectorXd e = x - target;
  double c = e.dot(state_weight * e) + u.dot(control_weight * u);
  if (k > 0) {
    const Eigen::VectorXd du = (u - u_prev) / dt;
    c += du.dot(rate_weight * du);
  }
  return c;
}

double QuadraticCost::total(const std::vector<Eigen::VectorXd>& xs,
                            const std::vector<Eigen::VectorXd>& us) const {
  if (static_cast<int>(us.size()) != horizon || xs.size() != us.size() + 1) {
    throw HorizonMismatch("trajectory has " + std::to_string(us.size()) +
                          " controls, cost expects " + std::to_string(horizon));
  }
  double c = 0.0;
  for (int k = 0; k < horizon; ++k) {
    c += running(k, xs[k], us[k], k > 0 ? us[k - 1] : us[k]);
  }
  return c + terminal(xs.back());
}

bool QuadraticCost::same_running_cost(const QuadraticCost& other) const {
  return horizon == other.horizon && dt == other.dt && state_weight == other.state_weight &&
         control_weight == other.control_weight && rate_weight == other.rate_weight &&
         (state_weight.isZero(0.0) || target == other.target);
}

double total_cost(const Trajectory& traj, const CostSpec& spec) {
  if (traj.horizon() != spec.horizon || traj.states.size() != traj.controls.size() + 1) {
    throw HorizonMismatch("trajectory horizon " + std::to_string(traj.horizon()) +
                          " does not match cost horizon " + std::to_string(spec.horizon));
  }
  std::vector<Eigen::VectorXd> xs;
  std::vector<Eigen::VectorXd> us;
  for (const auto& s : traj.states) xs.emplace_back(s.vec());
  for (const auto& u : traj.controls) us.emplace_back(u.vec());
  return QuadraticCost::from_spec(spec).total(xs, us);
}

}  // namespace exoassist
