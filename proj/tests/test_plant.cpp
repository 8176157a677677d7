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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "exoassist/errors.hpp"
#include "exoassist/plant.hpp"

namespace exoassist {
namespace {

ArmModel unactuated_frictionless() {
  ArmModel m = ArmModel::defaults();
  for (auto& j : m.joints) j.friction = 0.0;
  return m;
}

// Gravity torques written out directly from the link geometry.
Vector2 gravity_torque(const Vector2& theta, const ArmModel& m) {
  const auto& a = m.links[0];
  const auto& b = m.links[1];
  const double s1 = std::sin(theta(0));
  const double s12 = std::sin(theta(0) + theta(1));
  return {(a.mass * a.com + b.mass * a.length) * m.gravity * s1 + b.mass * b.com * m.gravity * s12,
          b.mass * b.com * m.gravity * s12};
}

TEST(PamTorque, MatchesHandComputedValues) {
  ArmModel m = ArmModel::defaults();
  m.joints[0] = {0.05, 1000.0, 0.0, 0.0};
  m.joints[1] = {0.05, 1000.0, 0.0, 0.0};
  PlantState s;
  s.p1 = 0.4;
  s.p2 = 0.2;
  const Vector2 tau = pam_torque(s, m);
  EXPECT_NEAR(tau(0), 20.0, 1e-12);
  EXPECT_NEAR(tau(1), 10.0, 1e-12);
}

TEST(PamTorque, SlackMuscleCannotPush) {
  ArmModel m = ArmModel::defaults();
  PlantState s;
  s.p1 = 0.0;
  s.p2 = 0.01;
  const Vector2 tau = pam_torque(s, m);
  EXPECT_EQ(tau(0), 0.0);
  EXPECT_EQ(tau(1), 0.0);
}

TEST(PressureStep, RisingStepFollowsExponential) {
  ArmModel m = ArmModel::defaults();
  EXPECT_NEAR(pressure_step(0.0, 0.8, 0.08, m), 0.8 * (1.0 - std::exp(-1.0)), 1e-12);
}

TEST(PressureStep, FallingStepUsesSlowConstant) {
  ArmModel m = ArmModel::defaults();
  EXPECT_NEAR(pressure_step(0.5, 0.0, 0.4, m), 0.5 * std::exp(-1.0), 1e-12);
  EXPECT_DOUBLE_EQ(lag_time_constant(0.5, 0.0, m), m.tc_fall);
  EXPECT_DOUBLE_EQ(lag_time_constant(0.0, 0.5, m), m.tc_rise);
}

TEST(PressureStep, FixedPointAndClamp) {
  ArmModel m = ArmModel::defaults();
  EXPECT_EQ(pressure_step(0.3, 0.3, 0.01, m), 0.3);
  EXPECT_LE(pressure_step(0.79, 5.0, 10.0, m), kMaxPressure);
  EXPECT_GE(pressure_step(0.01, -5.0, 10.0, m), 0.0);
}

TEST(Plant, GravityHoldBalancesIndependentTorques) {
  ArmModel m = ArmModel::defaults();
  for (const Vector2& theta : {Vector2(0.0, 1.5707963267948966), Vector2(0.3, 0.8),
                              Vector2(0.6, 0.3)}) {
    const PlantState s = hold_state(theta, m);
    const Vector2 tau = pam_torque(s, m);
    const Vector2 g = gravity_torque(theta, m);
    EXPECT_NEAR(tau(0), g(0), 1e-9);
    EXPECT_NEAR(tau(1), g(1), 1e-9);
  }
}

TEST(Plant, HoldStateStaysPutForOneSecond) {
  ArmModel m = ArmModel::defaults();
  const PlantState x0 = hold_state({0.0, 1.5707963267948966}, m);
  const ControlInput u{x0.p1, x0.p2};
  const Trajectory t = rollout(x0, std::vector<ControlInput>(100, u), m);
  const PlantState& xn = t.states.back();
  EXPECT_NEAR(xn.theta1, x0.theta1, 1e-6);
  EXPECT_NEAR(xn.theta2, x0.theta2, 1e-6);
  EXPECT_NEAR(xn.omega1, 0.0, 1e-6);
  EXPECT_NEAR(xn.omega2, 0.0, 1e-6);
}

TEST(Plant, HangingArmWithoutInputIsAnEquilibrium) {
  ArmModel m = ArmModel::defaults();
  const PlantState x0;
  const PlantState x1 = dynamics_step(x0, {}, m);
  EXPECT_EQ(x1, x0);
}

TEST(Plant, FreeRotationWithoutGravity) {
  ArmModel m = unactuated_frictionless();
  m.gravity = 0.0;
  PlantState x0;
  x0.omega1 = 0.1;
  const PlantState x1 = dynamics_step(x0, {}, m);
  EXPECT_NEAR(x1.theta1, 0.1 * m.dt, 1e-6);
}

TEST(Plant, EnergyConservedWithoutFrictionOrActuation) {
  const ArmModel m = unactuated_frictionless();
  PlantState x0;
  x0.theta1 = 0.5;
  x0.theta2 = 0.3;
  const Trajectory t = rollout(x0, std::vector<ControlInput>(100), m);
  const double e0 = mechanical_energy(x0, m);
  double drift = 0.0;
  for (const auto& s : t.states) drift = std::max(drift, std::abs(mechanical_energy(s, m) - e0));
  EXPECT_LT(drift, 1e-6);
}

TEST(Plant, IntegratorIsFourthOrder) {
  ArmModel m = unactuated_frictionless();
  PlantState x0;
  x0.theta1 = 0.4;
  x0.theta2 = 0.3;
  x0.omega1 = 0.5;
  auto endpoint = [&](double dt) {
    ArmModel mm = m;
    mm.dt = dt;
    const int n = static_cast<int>(std::lround(1.0 / dt));
    return rollout(x0, std::vector<ControlInput>(n), mm).states.back().vec();
  };
  const Vector6 ref = endpoint(1.0 / 6400.0);
  const double e1 = (endpoint(0.005) - ref).norm();
  const double e2 = (endpoint(0.0025) - ref).norm();
  const double ratio = e1 / e2;
  EXPECT_GT(ratio, 12.0);
  EXPECT_LT(ratio, 20.0);
}

TEST(Plant, LinearizationMatchesFourthOrderStencil) {
  const ArmModel m = ArmModel::defaults();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(-0.5, 1.5);
  std::uniform_real_distribution<double> rate(-3.0, 3.0);
  std::uniform_real_distribution<double> pres(0.05, 0.75);
  for (int trial = 0; trial < 100; ++trial) {
    PlantState s{angle(rng), angle(rng), rate(rng), rate(rng), pres(rng), pres(rng)};
    ControlInput u{pres(rng), pres(rng)};
    if (std::abs(u.pref1 - s.p1) < 0.02 || std::abs(u.pref2 - s.p2) < 0.02) continue;
    const PlantJacobians J = linearize(s, u, m);
    Eigen::Matrix<double, 6, 8> fd;
    const double h = 1e-4;
    for (int i = 0; i < 8; ++i) {
      auto eval = [&](double d) {
        Vector6 x = s.vec();
        Vector2 v = u.vec();
        if (i < 6) x(i) += d; else v(i - 6) += d;
        return dynamics_step(PlantState::from_vec(x), ControlInput::from_vec(v), m).vec();
      };
      fd.col(i) = (8.0 * (eval(h) - eval(-h)) - (eval(2 * h) - eval(-2 * h))) / (12.0 * h);
    }
    Eigen::Matrix<double, 6, 8> analytic;
    analytic << J.A, J.B;
    const double scale = 1.0 + fd.cwiseAbs().maxCoeff();
    EXPECT_LT((analytic - fd).cwiseAbs().maxCoeff() / scale, 1e-4) << "trial " << trial;
  }
}

TEST(Plant, PressureRowsOfJacobianAreExact) {
  const ArmModel m = ArmModel::defaults();
  const PlantState s{0.2, 1.0, 0.0, 0.0, 0.2, 0.6};
  const ControlInput u{0.5, 0.1};
  const PlantJacobians J = linearize(s, u, m);
  const double rise = std::exp(-m.dt / m.tc_rise);
  const double fall = std::exp(-m.dt / m.tc_fall);
  EXPECT_NEAR(J.A(4, 4), rise, 1e-7);
  EXPECT_NEAR(J.B(4, 0), 1.0 - rise, 1e-7);
  EXPECT_NEAR(J.A(5, 5), fall, 1e-7);
  EXPECT_NEAR(J.B(5, 1), 1.0 - fall, 1e-7);
  EXPECT_NEAR(J.B(4, 1), 0.0, 1e-12);
}

TEST(Plant, PressuresStayInRangeUnderAdversarialCommands) {
  const ArmModel m = ArmModel::defaults();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> cmd(-5.0, 5.0);
  std::vector<ControlInput> us(300);
  for (auto& u : us) u = {cmd(rng), cmd(rng)};
  const Trajectory t = rollout(hold_state({0.0, 1.5707963267948966}, m), us, m);
  for (const auto& s : t.states) {
    EXPECT_GE(s.p1, 0.0);
    EXPECT_LE(s.p1, kMaxPressure);
    EXPECT_GE(s.p2, 0.0);
    EXPECT_LE(s.p2, kMaxPressure);
  }
}

TEST(Plant, RolloutIsDeterministic) {
  const ArmModel m = ArmModel::defaults();
  std::vector<ControlInput> us(60, {0.5, 0.2});
  const PlantState x0 = hold_state({0.0, 1.0}, m);
  const Trajectory a = rollout(x0, us, m);
  const Trajectory b = rollout(x0, us, m);
  ASSERT_EQ(a.states.size(), b.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) EXPECT_EQ(a.states[i], b.states[i]);
}

TEST(Plant, EmptyRolloutReturnsInitialState) {
  const ArmModel m = ArmModel::defaults();
  const PlantState x0{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  const Trajectory t = rollout(x0, {}, m);
  ASSERT_EQ(t.states.size(), 1u);
  EXPECT_EQ(t.states[0], x0);
  EXPECT_EQ(t.horizon(), 0);
}

TEST(Plant, BlowUpReportsStepIndex) {
  ArmModel m = ArmModel::defaults();
  m.dt = 1e3;
  PlantState x0;
  x0.omega1 = 1e200;
  try {
    rollout(x0, std::vector<ControlInput>(5), m);
    FAIL() << "expected NonFiniteState";
  } catch (const NonFiniteState& e) {
    EXPECT_GE(e.index(), 0);
    EXPECT_LT(e.index(), 5);
  }
}

TEST(Plant, RejectsInvalidParameters) {
  ArmModel m = ArmModel::defaults();
  m.links[0].mass = -1.0;
  EXPECT_THROW(m.validate(), ConfigError);
  m = ArmModel::defaults();
  m.tc_rise = 0.0;
  EXPECT_THROW(m.validate(), ConfigError);
}

}  // namespace
}  // namespace exoassist
