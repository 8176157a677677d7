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

#include "exoassist/plant.hpp"

namespace exoassist {

// Discrete-time system x(k+1) = f(x(k), u(k)) as seen by the optimizer.
class Dynamics {
 public:
  virtual ~Dynamics() = default;

  virtual int state_dim() const = 0;
  virtual int control_dim() const = 0;
  virtual double dt() const = 0;

  virtual Eigen::VectorXd step(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const = 0;

  // Jacobians of step() with respect to x (A) and u (B).
  virtual void linearize(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                         Eigen::MatrixXd& A, Eigen::MatrixXd& B) const = 0;

  // Box on the admissible controls; infinite when unbounded.
  virtual Eigen::VectorXd control_lower() const;
  virtual Eigen::VectorXd control_upper() const;

  Eigen::VectorXd clamp_control(const Eigen::VectorXd& u) const;
};

// The PAM-driven arm; controls are clamped to [0, kMaxPressure].
class ArmDynamics final : public Dynamics {
 public:
  explicit ArmDynamics(ArmModel model) : model_(std::move(model)) {}

  int state_dim() const override { return 6; }
  int control_dim() const override { return 2; }
  double dt() const override { return model_.dt; }

  Eigen::VectorXd step(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const override;
  void linearize(const Eigen::VectorXd& x, const Eigen::VectorXd& u, Eigen::MatrixXd& A,
                 Eigen::MatrixXd& B) const override;
  Eigen::VectorXd control_lower() const override;
  Eigen::VectorXd control_upper() const override;

  const ArmModel& model() const { return model_; }

 private:
  ArmModel model_;
};

// x(k+1) = A x(k) + B u(k), unbounded controls.
class LinearDynamics final : public Dynamics {
 public:
  LinearDynamics(Eigen::MatrixXd A, Eigen::MatrixXd B, double dt = 1.0);

  int state_dim() const override { return static_cast<int>(A_.rows()); }
  int control_dim() const override { return static_cast<int>(B_.cols()); }
  double dt() const override { return dt_; }

  Eigen::VectorXd step(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const override;
  void linearize(const Eigen::VectorXd& x, const Eigen::VectorXd& u, Eigen::MatrixXd& A,
                 Eigen::MatrixXd& B) const override;

 private:
  Eigen::MatrixXd A_;
  Eigen::MatrixXd B_;
  double dt_;
};

}  // namespace exoassist
