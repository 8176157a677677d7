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
#include <string>
#include <vector>

#include "exoassist/cost.hpp"
#include "exoassist/dynamics.hpp"
#include "exoassist/plant.hpp"

namespace exoassist {

// Time-varying affine policy about a nominal trajectory,
//   u(x, k) = u_bar(k) + l(k) + L(k) (x - x_bar(k)),
// together with the local quadratic value model
//   v(x, k) = s0(k) + s(k)' dx + 1/2 dx' S(k) dx,  dx = x - x_bar(k).
struct AffinePolicy {
  std::vector<Eigen::VectorXd> nominal_states;    // N + 1
  std::vector<Eigen::VectorXd> nominal_controls;  // N
  std::vector<Eigen::VectorXd> feedforward;       // l(k), N
  std::vector<Eigen::MatrixXd> feedback;          // L(k), N
  std::vector<double> value_offset;               // s0(k), N + 1
  std::vector<Eigen::VectorXd> value_gradient;    // s(k), N + 1
  std::vector<Eigen::MatrixXd> value_hessian;     // S(k), N + 1
  QuadraticCost cost;
  bool converged = false;
  double total_cost = 0.0;

  int horizon() const { return static_cast<int>(nominal_controls.size()); }
  double dt() const { return cost.dt; }
  int state_dim() const { return cost.state_dim(); }
  int control_dim() const { return cost.control_dim(); }

  // Unclamped control; throws IndexOutOfHorizon unless 0 <= k < N.
  Eigen::VectorXd control(const Eigen::VectorXd& x, int k) const;
  // Throws IndexOutOfHorizon unless 0 <= k <= N.
  double value(const Eigen::VectorXd& x, int k) const;
};

double value_at(const AffinePolicy& policy, const PlantState& x, int k);

// Plant trajectory of the policy's nominal.
Trajectory nominal_trajectory(const AffinePolicy& policy);

struct SolverOptions {
  double tol_cost = 1e-7;
  int max_iter = 200;
  double reg_init = 1e-6;
  double reg_max = 1e6;
  double reg_increase = 10.0;
  double reg_decrease = 2.0;
  // Smallest regularization used when escalating from zero.
  double reg_floor = 1e-6;
  int max_line_search = 30;

  void validate() const;
};

enum class Convergence {
  kCostTolerance,         // |delta cost| < tol_cost after an accepted step
  kExpectedImprovement,   // the model predicts less than tol_cost of decrease
  kMaxIterations,
  kNoProgress,            // no step improved the cost at maximum regularization
};

std::string to_string(Convergence c);

struct SolveReport {
  int iterations = 0;
  std::vector<double> cost_trace;  // cost of every accepted nominal, initial first
  std::vector<double> step_trace;  // line-search step of each accepted iterate
  std::vector<double> reg_trace;   // regularization used for each accepted iterate
  Convergence reason = Convergence::kMaxIterations;
};

// Dynamics Jacobians along the policy's nominal trajectory, with the
// control box (empty bounds mean unbounded).
struct Linearization {
  std::vector<Eigen::MatrixXd> A;
  std::vector<Eigen::MatrixXd> B;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

Linearization linearize_nominal(const AffinePolicy& policy, const Dynamics& dynamics);

// Riccati-like sweep from k = N down to 0 about the policy's nominal.
// Overwrites l, L and the value terms. The control Hessian is shifted by
// reg * I; throws NonPositiveDefinite if it is still not positive definite.
// Controls resting on a bound that the step would push outward get zero
// feedforward and feedback. Neighbouring controls in the rate penalty are
// held at the nominal. Returns the model-predicted decrease of a full step.
double backward_pass(AffinePolicy& policy, const Linearization& lin, double reg);
double backward_pass(AffinePolicy& policy, const Dynamics& dynamics, double reg);

struct Rollout {
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> controls;
  double cost = 0.0;
};

// u(k) = clamp(u_bar(k) + step * l(k) + L(k) (x(k) - x_bar(k))).
Rollout forward_pass(const AffinePolicy& policy, const Dynamics& dynamics, double step);

// Simulates the dynamics under open-loop controls and scores them.
Rollout simulate(const Eigen::VectorXd& x0, const std::vector<Eigen::VectorXd>& controls,
                 const Dynamics& dynamics, const QuadraticCost& cost);

struct SolveResult {
  AffinePolicy policy;
  SolveReport report;
};

// Alternates backward passes and backtracking forward passes with a
// Levenberg schedule on the control-Hessian shift. Iterations expand the
// rate penalty exactly by carrying the previous control in the state; the
// returned gains and value model come from backward_pass about the final
// nominal. Never throws on lack of
// progress: the best nominal found is returned with converged == false.
SolveResult solve(const Eigen::VectorXd& x0, const std::vector<Eigen::VectorXd>& init_controls,
                  const Dynamics& dynamics, const QuadraticCost& cost,
                  const SolverOptions& options = {});

SolveResult solve(const PlantState& x0, const std::vector<ControlInput>& init_controls,
                  const ArmModel& model, const CostSpec& spec,
                  const SolverOptions& options = {});

}  // namespace exoassist
