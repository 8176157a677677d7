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
#include <array>
#include <vector>

namespace exoassist {

using Vector2 = Eigen::Vector2d;
using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Matrix62 = Eigen::Matrix<double, 6, 2>;

// Safety limit on PAM inner pressure [MPa].
inline constexpr double kMaxPressure = 0.8;

// x = [theta1, theta2, omega1, omega2, p1, p2]. Index 1 is the shoulder
// (flexion/extension), index 2 the elbow. Angles are measured from the arm
// hanging straight down, positive in flexion; theta2 is relative to link 1.
struct PlantState {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;

  Vector6 vec() const;
  static PlantState from_vec(const Vector6& x);

  Vector2 theta() const { return {theta1, theta2}; }
  Vector2 omega() const { return {omega1, omega2}; }
  Vector2 pressure() const { return {p1, p2}; }

  // Finite fields and pressures inside [0, kMaxPressure].
  bool valid() const;

  bool operator==(const PlantState&) const = default;
};

// Desired PAM pressures [MPa].
struct ControlInput {
  double pref1 = 0.0;
  double pref2 = 0.0;

  Vector2 vec() const { return {pref1, pref2}; }
  static ControlInput from_vec(const Vector2& u) { return {u(0), u(1)}; }

  bool operator==(const ControlInput&) const = default;
};

struct LinkParams {
  double mass = 1.0;     // kg
  double length = 0.3;   // m
  double com = 0.15;     // m, from the proximal joint
  double inertia = 0.0;  // kg m^2 about the center of mass
};

struct JointParams {
  double pulley_radius = 0.05;  // m
  double force_gain = 1000.0;   // N/MPa
  double force_offset = 50.0;   // N
  double friction = 0.1;        // N m s/rad
};

// Combined human + robot two-link arm with one flexor PAM per joint.
struct ArmModel {
  std::array<LinkParams, 2> links;
  std::array<JointParams, 2> joints;
  double gravity = 9.81;
  double dt = 0.01;
  double tc_rise = 0.08;
  double tc_fall = 0.4;

  // Representative upper arm / forearm+hand values (not measured data).
  static ArmModel defaults();

  // Throws ConfigError when a parameter is out of range.
  void validate() const;
};

struct Trajectory {
  double dt = 0.01;
  std::vector<PlantState> states;      // N + 1
  std::vector<ControlInput> controls;  // N

  int horizon() const { return static_cast<int>(controls.size()); }
  double time(int k) const { return k * dt; }
};

// tau_j = r_j * max(0, a_j * P_j - b_j).
Vector2 pam_torque(const PlantState& state, const ArmModel& model);

// Pressure-lag time constant selected from the sign of (pref - p).
double lag_time_constant(double p, double pref, const ArmModel& model);

// One exact exponential step of dP/dt = (pref - P) / tc, clamped to
// [0, kMaxPressure].
double pressure_step(double p, double pref, double dt, const ArmModel& model);

// Mass matrix, Coriolis/centrifugal vector and gravity vector.
struct RigidBodyTerms {
  Eigen::Matrix2d mass;
  Vector2 coriolis;
  Vector2 gravity;
};
RigidBodyTerms rigid_body_terms(const Vector2& theta, const Vector2& omega,
                                const ArmModel& model);

// Kinetic plus gravitational potential energy of the links [J].
double mechanical_energy(const PlantState& state, const ArmModel& model);

// Advances one dt: RK4 on the rigid body with the analytic pressure profile
// inside the step. Throws NonFiniteState.
PlantState dynamics_step(const PlantState& state, const ControlInput& u,
                         const ArmModel& model);

struct PlantJacobians {
  Matrix6 A;
  Matrix62 B;
};

// Central differences (step 1e-6) of dynamics_step, one-sided where the
// stencil would leave the valid pressure range.
PlantJacobians linearize(const PlantState& state, const ControlInput& u,
                         const ArmModel& model);

// Throws NonFiniteState carrying the failing step index.
Trajectory rollout(const PlantState& x0, const std::vector<ControlInput>& controls,
                   const ArmModel& model);

// Pressures whose PAM torques balance gravity at rest in the given posture,
// found by bisection on the static torque residual. Pressures are clamped to
// [0, kMaxPressure] when no balance exists inside the range.
ControlInput gravity_hold_pressure(const Vector2& theta, const ArmModel& model);

// At-rest state in `theta` with pressures at the gravity-hold values.
PlantState hold_state(const Vector2& theta, const ArmModel& model);

}  // namespace exoassist
