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

#include "exoassist/task.hpp"

#include <cmath>
#include <random>

#include "exoassist/errors.hpp"
#include "exoassist/io.hpp"

namespace exoassist {

void ThrowTask::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!(finite(distance) && distance > 0.0)) throw ConfigError("task: distance must be > 0");
  if (!(finite(radius) && radius > 0.0)) throw ConfigError("task: radius must be > 0");
  if (!finite(hoop_height)) throw ConfigError("task: hoop_height must be finite");
  if (!release_theta.allFinite()) throw ConfigError("task: release_theta must be finite");
  if (!(finite(t_rel) && t_rel > 0.0)) throw ConfigError("task: t_rel must be > 0");
  if (!(finite(ball_mass) && ball_mass > 0.0)) throw ConfigError("task: ball_mass must be > 0");
}

Hoop hoop_for(const ThrowTask& task, const ArmModel& model) {
  const Vector2 release = forward_kinematics(task.release_theta, model);
  return {release.x(), task.distance, task.hoop_height, task.radius};
}

Vector2 forward_kinematics(const Vector2& theta, const ArmModel& model) {
  const double l1 = model.links[0].length;
  const double l2 = model.links[1].length;
  const double t12 = theta(0) + theta(1);
  return {l1 * std::sin(theta(0)) + l2 * std::sin(t12),
          -l1 * std::cos(theta(0)) - l2 * std::cos(t12)};
}

Eigen::Matrix2d hand_jacobian(const Vector2& theta, const ArmModel& model) {
  const double l1 = model.links[0].length;
  const double l2 = model.links[1].length;
  const double t12 = theta(0) + theta(1);
  Eigen::Matrix2d J;
  J << l1 * std::cos(theta(0)) + l2 * std::cos(t12), l2 * std::cos(t12),
      l1 * std::sin(theta(0)) + l2 * std::sin(t12), l2 * std::sin(t12);
  return J;
}

Vector2 hand_velocity(const Vector2& theta, const Vector2& omega, const ArmModel& model) {
  return hand_jacobian(theta, model) * omega;
}

double required_release_speed(const ThrowTask& task, const ArmModel& model) {
  // 45 degrees: x = v t / sqrt2, y = v t / sqrt2 - g t^2 / 2, so passing
  // through (D, dh) needs v^2 = g D^2 / (D - dh).
  const Vector2 release = forward_kinematics(task.release_theta, model);
  const double dh = task.hoop_height - release.y();
  const double D = task.distance;
  if (!(D > dh)) {
    throw UnreachableHoop("hoop is too high for a 45 degree launch (D = " + format_number(D) +
                          ", rise = " + format_number(dh) + ")");
  }
  return std::sqrt(model.gravity * D * D / (D - dh));
}

TargetState target_state(const ThrowTask& task, const ArmModel& model) {
  const double v = required_release_speed(task, model);
  const Vector2 vel = Vector2::Constant(v / std::sqrt(2.0));
  const Eigen::Matrix2d J = hand_jacobian(task.release_theta, model);
  const double scale = J.cwiseAbs().maxCoeff();
  if (std::abs(J.determinant()) <= 1e-9 * scale * scale) {
    throw SingularJacobian("release posture is at a kinematic singularity");
  }
  return {task.release_theta, J.partialPivLu().solve(vel), vel};
}

CostSpec cost_spec_for(const ThrowTask& task, const ArmModel& model, const CostSpec& weights) {
  const double steps = task.t_rel / model.dt;
  const long n = std::lround(steps);
  if (n < 1 || std::abs(steps - static_cast<double>(n)) > 1e-9 * steps) {
    throw ConfigError("task: t_rel must be a positive multiple of dt");
  }
  const TargetState target = target_state(task, model);
  CostSpec spec = weights;
  spec.theta_target = target.theta;
  spec.omega_target = target.omega;
  spec.horizon = static_cast<int>(n);
  spec.dt = model.dt;
  return spec;
}

ShotResult ballistic_flight(const Vector2& position, const Vector2& velocity, const Hoop& hoop,
                            double gravity) {
  // g/2 t^2 - vy t + c = 0; the descending crossing is the larger root.
  const double vy = velocity.y();
  const double c = hoop.height - position.y();
  const double disc = vy * vy - 2.0 * gravity * c;
  if (disc < 0.0) throw NeverReachesHoopHeight("ball apex stays below the hoop");
  const double s = std::sqrt(disc);
  const double t = vy >= 0.0 ? (vy + s) / gravity : -2.0 * c / (s - vy);
  if (!(t > 0.0)) throw NeverReachesHoopHeight("ball is already below the hoop and falling");

  ShotResult r;
  r.release_position = position;
  r.release_velocity = velocity;
  r.landing_distance = position.x() + velocity.x() * t - hoop.origin_x;
  r.margin = r.landing_distance - hoop.distance;
  r.hit = std::abs(r.margin) <= hoop.radius;
  return r;
}

ShotResult shot_from_state(const PlantState& release, const ThrowTask& task,
                           const ArmModel& model) {
  return ballistic_flight(forward_kinematics(release.theta(), model),
                          hand_velocity(release.theta(), release.omega(), model),
                          hoop_for(task, model), model.gravity);
}

ScoreResult score_policy(const Controller& controller, const PlantState& x0, int horizon,
                         const ThrowTask& task, const ArmModel& model, int trials,
                         double perturbation, std::uint64_t seed) {
  if (trials < 1) throw ConfigError("score: trials must be >= 1");
  if (!(perturbation >= 0.0)) throw ConfigError("score: perturbation must be >= 0");
  ScoreResult out;
  int hits = 0;
  for (int i = 0; i < trials; ++i) {
    ShotRecord rec;
    rec.trial = i;
    rec.seed = seed + static_cast<std::uint64_t>(i);
    PlantState x = x0;
    if (perturbation > 0.0) {
      std::mt19937_64 rng(rec.seed);
      std::normal_distribution<double> noise(0.0, perturbation);
      x.theta1 += noise(rng);
      x.theta2 += noise(rng);
      x.omega1 += noise(rng);
      x.omega2 += noise(rng);
    }
    for (int k = 0; k < horizon; ++k) x = dynamics_step(x, controller(x, k), model);
    try {
      rec.shot = shot_from_state(x, task, model);
    } catch (const NeverReachesHoopHeight&) {
      rec.flew = false;
      rec.shot.release_position = forward_kinematics(x.theta(), model);
      rec.shot.release_velocity = hand_velocity(x.theta(), x.omega(), model);
      rec.shot.landing_distance = std::nan("");
      rec.shot.margin = std::nan("");
    }
    hits += rec.shot.hit ? 1 : 0;
    out.shots.push_back(rec);
  }
  out.hit_rate = static_cast<double>(hits) / trials;
  return out;
}

std::string shots_csv(const std::vector<ShotRecord>& shots) {
  std::string out = "trial,seed,landing,margin,hit\n";
  for (const auto& s : shots) {
    out += std::to_string(s.trial) + ',' + std::to_string(s.seed) + ',' +
           format_number(s.shot.landing_distance) + ',' + format_number(s.shot.margin) + ',' +
           (s.shot.hit ? "1" : "0") + '\n';
  }
  return out;
}

}  // namespace exoassist
