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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "exoassist/cost.hpp"
#include "exoassist/plant.hpp"

namespace exoassist {

// A throw at a hoop. Heights are relative to the shoulder joint; the hoop
// sits `distance` meters horizontally beyond the nominal release point.
struct ThrowTask {
  double distance = 2.0;     // m
  double hoop_height = 0.0;  // m
  double radius = 0.23;      // m
  Vector2 release_theta{0.6, 0.3};
  double t_rel = 0.6;        // s, end of the horizon
  double ball_mass = 0.6;    // kg, reporting only

  // Throws ConfigError.
  void validate() const;
};

struct Hoop {
  double origin_x = 0.0;  // horizontal reference the distance is measured from
  double distance = 2.0;
  double height = 0.0;
  double radius = 0.23;
};

Hoop hoop_for(const ThrowTask& task, const ArmModel& model);

struct ShotResult {
  double landing_distance = 0.0;  // from the hoop origin, at hoop height
  double margin = 0.0;            // landing_distance - distance
  bool hit = false;
  Vector2 release_position = Vector2::Zero();
  Vector2 release_velocity = Vector2::Zero();
};

// Hand position in the sagittal plane, shoulder at the origin, y up.
Vector2 forward_kinematics(const Vector2& theta, const ArmModel& model);
Eigen::Matrix2d hand_jacobian(const Vector2& theta, const ArmModel& model);
Vector2 hand_velocity(const Vector2& theta, const Vector2& omega, const ArmModel& model);

// Release speed of a 45 degree launch that passes through the hoop center.
// Throws UnreachableHoop.
double required_release_speed(const ThrowTask& task, const ArmModel& model);

struct TargetState {
  Vector2 theta;
  Vector2 omega;
  Vector2 release_velocity;
};

// Throws SingularJacobian or UnreachableHoop.
TargetState target_state(const ThrowTask& task, const ArmModel& model);

// Horizon is t_rel / dt; throws ConfigError if that is not an integer.
CostSpec cost_spec_for(const ThrowTask& task, const ArmModel& model, const CostSpec& weights);

// Frictionless flight to the descending crossing of the hoop height.
// Throws NeverReachesHoopHeight.
ShotResult ballistic_flight(const Vector2& position, const Vector2& velocity, const Hoop& hoop,
                            double gravity = 9.81);

ShotResult shot_from_state(const PlantState& release, const ThrowTask& task,
                           const ArmModel& model);

using Controller = std::function<ControlInput(const PlantState&, int)>;

struct ShotRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  ShotResult shot;
  bool flew = true;  // false when the ball never reached hoop height
};

struct ScoreResult {
  double hit_rate = 0.0;
  std::vector<ShotRecord> shots;
};

// Closed-loop rollouts of `horizon` steps from x0 with N(0, scale) noise on
// the initial angles and velocities; trial i draws from seed + i.
ScoreResult score_policy(const Controller& controller, const PlantState& x0, int horizon,
                         const ThrowTask& task, const ArmModel& model, int trials,
                         double perturbation, std::uint64_t seed);

// Header trial,seed,landing,margin,hit.
std::string shots_csv(const std::vector<ShotRecord>& shots);

}  // namespace exoassist
