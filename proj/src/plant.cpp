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

#include "exoassist/plant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "exoassist/errors.hpp"

namespace exoassist {

Vector6 PlantState::vec() const {
  Vector6 x;
  x << theta1, theta2, omega1, omega2, p1, p2;
  return x;
}

PlantState PlantState::from_vec(const Vector6& x) {
  return {x(0), x(1), x(2), x(3), x(4), x(5)};
}

bool PlantState::valid() const {
  if (!vec().allFinite()) return false;
  return p1 >= 0.0 && p1 <= kMaxPressure && p2 >= 0.0 && p2 <= kMaxPressure;
}

ArmModel ArmModel::defaults() {
  ArmModel m;
  m.links[0] = {2.0, 0.30, 0.15, 2.0 * 0.30 * 0.30 / 12.0};
  m.links[1] = {1.7, 0.35, 0.175, 1.7 * 0.35 * 0.35 / 12.0};
  m.joints[0] = {0.05, 1500.0, 100.0, 0.1};
  m.joints[1] = {0.05, 1000.0, 50.0, 0.1};
  return m;
}

void ArmModel::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(std::isfinite(v) && v > 0.0)) {
      throw ConfigError(std::string("arm model: ") + what + " must be > 0");
    }
  };
  auto nonnegative = [](double v, const char* what) {
    if (!(std::isfinite(v) && v >= 0.0)) {
      throw ConfigError(std::string("arm model: ") + what + " must be >= 0");
    }
  };
  for (const auto& link : links) {
    positive(link.mass, "link mass");
    positive(link.length, "link length");
    positive(link.inertia, "link inertia");
    nonnegative(link.com, "link com");
  }
  for (const auto& joint : joints) {
    positive(joint.pulley_radius, "pulley radius");
    nonnegative(joint.force_gain, "force gain");
    nonnegative(joint.force_offset, "force offset");
    nonnegative(joint.friction, "friction");
  }
  nonnegative(gravity, "gravity");
  positive(dt, "dt");
  positive(tc_rise, "tc_rise");
  positive(tc_fall, "tc_fall");
}

Vector2 pam_torque(const PlantState& state, const ArmModel& model) {
  const Vector2 p = state.pressure();
  Vector2 tau;
  for (int j = 0; j < 2; ++j) {
    const auto& jp = model.joints[j];
    const double force = std::max(0.0, jp.force_gain * p(j) - jp.force_offset);
    tau(j) = jp.pulley_radius * force;
  }
  return tau;
}

double lag_time_constant(double p, double pref, const ArmModel& model) {
  // With an affine force model the torque rate has the sign of dP/dt.
  return pref > p ? model.tc_rise : model.tc_fall;
}

namespace {

double clamp_pressure(double p) { return std::clamp(p, 0.0, kMaxPressure); }

// Pressure at time s into a step that started at p0 with time constant tc.
double pressure_at(double p0, double pref, double tc, double s) {
  return clamp_pressure(pref + (p0 - pref) * std::exp(-s / tc));
}

}  // namespace

double pressure_step(double p, double pref, double dt, const ArmModel& model) {
  return pressure_at(p, pref, lag_time_constant(p, pref, model), dt);
}

RigidBodyTerms rigid_body_terms(const Vector2& theta, const Vector2& omega,
                                const ArmModel& model) {
  const auto& l1 = model.links[0];
  const auto& l2 = model.links[1];
  const double c2 = std::cos(theta(1));
  const double s2 = std::sin(theta(1));
  const double s1 = std::sin(theta(0));
  const double s12 = std::sin(theta(0) + theta(1));

  const double m2_l1_lc2 = l2.mass * l1.length * l2.com;
  RigidBodyTerms t;
  t.mass(0, 0) = l1.inertia + l2.inertia + l1.mass * l1.com * l1.com +
                 l2.mass * (l1.length * l1.length + l2.com * l2.com) +
                 2.0 * m2_l1_lc2 * c2;
  t.mass(0, 1) = l2.inertia + l2.mass * l2.com * l2.com + m2_l1_lc2 * c2;
  t.mass(1, 0) = t.mass(0, 1);
  t.mass(1, 1) = l2.inertia + l2.mass * l2.com * l2.com;

  const double h = m2_l1_lc2 * s2;
  t.coriolis(0) = -h * (2.0 * omega(0) * omega(1) + omega(1) * omega(1));
  t.coriolis(1) = h * omega(0) * omega(0);

  const double g = model.gravity;
  t.gravity(0) = (l1.mass * l1.com + l2.mass * l1.length) * g * s1 + l2.mass * l2.com * g * s12;
  t.gravity(1) = l2.mass * l2.com * g * s12;
  return t;
}

double mechanical_energy(const PlantState& state, const ArmModel& model) {
  const auto& l1 = model.links[0];
  const auto& l2 = model.links[1];
  const Vector2 w = state.omega();
  const RigidBodyTerms t = rigid_body_terms(state.theta(), w, model);
  const double kinetic = 0.5 * w.dot(t.mass * w);
  const double potential =
      -(l1.mass * l1.com + l2.mass * l1.length) * model.gravity * std::cos(state.theta1) -
      l2.mass * l2.com * model.gravity * std::cos(state.theta1 + state.theta2);
  return kinetic + potential;
}

namespace {

Vector2 joint_acceleration(const Vector2& theta, const Vector2& omega, const Vector2& pressure,
                           const ArmModel& model) {
  const RigidBodyTerms t = rigid_body_terms(theta, omega, model);
  PlantState s;
  s.p1 = pressure(0);
  s.p2 = pressure(1);
  Vector2 friction(model.joints[0].friction * omega(0), model.joints[1].friction * omega(1));
  const Vector2 rhs = pam_torque(s, model) - t.coriolis - t.gravity - friction;
  return t.mass.ldlt().solve(rhs);
}

}  // namespace

PlantState dynamics_step(const PlantState& state, const ControlInput& u,
                         const ArmModel& model) {
  const double dt = model.dt;
  const Vector2 p0 = state.pressure();
  const Vector2 pref = u.vec();
  const Vector2 tc(lag_time_constant(p0(0), pref(0), model),
                   lag_time_constant(p0(1), pref(1), model));
  auto pressure = [&](double s) {
    return Vector2(pressure_at(p0(0), pref(0), tc(0), s), pressure_at(p0(1), pref(1), tc(1), s));
  };

  const Vector2 q = state.theta();
  const Vector2 w = state.omega();
  const Vector2 p_mid = pressure(0.5 * dt);

  const Vector2 k1q = w;
  const Vector2 k1w = joint_acceleration(q, w, p0, model);
  const Vector2 k2q = w + 0.5 * dt * k1w;
  const Vector2 k2w = joint_acceleration(q + 0.5 * dt * k1q, k2q, p_mid, model);
  const Vector2 k3q = w + 0.5 * dt * k2w;
  const Vector2 k3w = joint_acceleration(q + 0.5 * dt * k2q, k3q, p_mid, model);
  const Vector2 k4q = w + dt * k3w;
  const Vector2 k4w = joint_acceleration(q + dt * k3q, k4q, pressure(dt), model);

  const Vector2 q_next = q + dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
  const Vector2 w_next = w + dt / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
  const Vector2 p_next(pressure_step(p0(0), pref(0), dt, model),
                       pressure_step(p0(1), pref(1), dt, model));

  PlantState next{q_next(0), q_next(1), w_next(0), w_next(1), p_next(0), p_next(1)};
  if (!next.vec().allFinite()) {
    throw NonFiniteState("dynamics_step produced a non-finite state");
  }
  return next;
}

namespace {

constexpr double kFdStep = 1e-6;

// Perturbation offsets (minus, plus) for a coordinate; pressure-like
// coordinates stay inside [0, kMaxPressure].
std::pair<double, double> stencil(double value, bool bounded) {
  if (bounded) {
    if (value - kFdStep < 0.0) return {0.0, kFdStep};
    if (value + kFdStep > kMaxPressure) return {-kFdStep, 0.0};
  }
  return {-kFdStep, kFdStep};
}

}  // namespace

PlantJacobians linearize(const PlantState& state, const ControlInput& u,
                         const ArmModel& model) {
  PlantJacobians J;
  const Vector6 x = state.vec();
  for (int i = 0; i < 6; ++i) {
    const auto [lo, hi] = stencil(x(i), i >= 4);
    Vector6 xm = x;
    Vector6 xp = x;
    xm(i) += lo;
    xp(i) += hi;
    const Vector6 fm = dynamics_step(PlantState::from_vec(xm), u, model).vec();
    const Vector6 fp = dynamics_step(PlantState::from_vec(xp), u, model).vec();
    J.A.col(i) = (fp - fm) / (hi - lo);
  }
  const Vector2 uv = u.vec();
  for (int i = 0; i < 2; ++i) {
    const auto [lo, hi] = stencil(uv(i), true);
    Vector2 um = uv;
    Vector2 up = uv;
    um(i) += lo;
    up(i) += hi;
    const Vector6 fm = dynamics_step(state, ControlInput::from_vec(um), model).vec();
    const Vector6 fp = dynamics_step(state, ControlInput::from_vec(up), model).vec();
    J.B.col(i) = (fp - fm) / (hi - lo);
  }
  return J;
}

Trajectory rollout(const PlantState& x0, const std::vector<ControlInput>& controls,
                   const ArmModel& model) {
  Trajectory traj;
  traj.dt = model.dt;
  traj.controls = controls;
  traj.states.reserve(controls.size() + 1);
  traj.states.push_back(x0);
  for (std::size_t k = 0; k < controls.size(); ++k) {
    try {
      traj.states.push_back(dynamics_step(traj.states.back(), controls[k], model));
    } catch (const NonFiniteState&) {
      throw NonFiniteState("rollout diverged at step " + std::to_string(k),
                           static_cast<int>(k));
    }
  }
  return traj;
}

ControlInput gravity_hold_pressure(const Vector2& theta, const ArmModel& model) {
  const RigidBodyTerms t = rigid_body_terms(theta, Vector2::Zero(), model);
  Vector2 hold;
  for (int j = 0; j < 2; ++j) {
    const auto& jp = model.joints[j];
    auto residual = [&](double p) {
      const double force = std::max(0.0, jp.force_gain * p - jp.force_offset);
      return jp.pulley_radius * force - t.gravity(j);
    };
    double lo = 0.0;
    double hi = kMaxPressure;
    if (residual(hi) <= 0.0) {
      hold(j) = hi;
      continue;
    }
    if (residual(lo) >= 0.0) {
      hold(j) = lo;
      continue;
    }
    // The residual is nondecreasing in p; bisect to machine precision.
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (residual(mid) < 0.0 ? lo : hi) = mid;
    }
    hold(j) = std::abs(residual(lo)) <= std::abs(residual(hi)) ? lo : hi;
  }
  return ControlInput::from_vec(hold);
}

PlantState hold_state(const Vector2& theta, const ArmModel& model) {
  const ControlInput hold = gravity_hold_pressure(theta, model);
  return {theta(0), theta(1), 0.0, 0.0, hold.pref1, hold.pref2};
}

}  // namespace exoassist
