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

#include "exoassist/dynamics.hpp"

#include <limits>

#include "exoassist/errors.hpp"

namespace exoassist {

Eigen::VectorXd Dynamics::control_lower() const {
  return Eigen::VectorXd::Constant(control_dim(), -std::numeric_limits<double>::infinity());
}

Eigen::VectorXd Dynamics::control_upper() const {
  return Eigen::VectorXd::Constant(control_dim(), std::numeric_limits<double>::infinity());
}

Eigen::VectorXd Dynamics::clamp_control(const Eigen::VectorXd& u) const {
  return u.cwiseMax(control_lower()).cwiseMin(control_upper());
}

Eigen::VectorXd ArmDynamics::step(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
  const PlantState s = PlantState::from_vec(x);
  return dynamics_step(s, ControlInput::from_vec(u), model_).vec();
}

void ArmDynamics::linearize(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                            Eigen::MatrixXd& A, Eigen::MatrixXd& B) const {
  const PlantJacobians J =
      exoassist::linearize(PlantState::from_vec(x), ControlInput::from_vec(u), model_);
  A = J.A;
  B = J.B;
}

Eigen::VectorXd ArmDynamics::control_lower() const { return Eigen::VectorXd::Zero(2); }

Eigen::VectorXd ArmDynamics::control_upper() const {
  return Eigen::VectorXd::Constant(2, kMaxPressure);
}

LinearDynamics::LinearDynamics(Eigen::MatrixXd A, Eigen::MatrixXd B, double dt)
    : A_(std::move(A)), B_(std::move(B)), dt_(dt) {
  if (A_.rows() != A_.cols() || B_.rows() != A_.rows()) {
    throw ConfigError("LinearDynamics: inconsistent A/B shapes");
  }
}

Eigen::VectorXd LinearDynamics::step(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
  return A_ * x + B_ * u;
}

void LinearDynamics::linearize(const Eigen::VectorXd&, const Eigen::VectorXd&,
                               Eigen::MatrixXd& A, Eigen::MatrixXd& B) const {
  A = A_;
  B = B_;
}

}  // namespace exoassist
