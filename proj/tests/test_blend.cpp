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
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "exoassist/blend.hpp"
#include "exoassist/dynamics.hpp"
#include "exoassist/errors.hpp"
#include "throw_fixture.hpp"

namespace exoassist {
namespace {

using Eigen::VectorXd;

struct Pair {
  AffinePolicy near;
  AffinePolicy far;
  PlantState x0;
};

const Pair& policies() {
  static const Pair p = [] {
    const testing::SolvedThrow a = testing::solve_throw(1.0);
    const testing::SolvedThrow b = testing::solve_throw(3.0);
    return Pair{a.result.policy, b.result.policy, a.x0};
  }();
  return p;
}

VectorXd values(std::initializer_list<double> v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

TEST(Mixing, WeightsAndValuesCombine) {
  const VectorXd a = mixing_coefficients({1.0, 1.0, 1.0}, values({0.0, std::log(2.0), std::log(2.0)}));
  EXPECT_NEAR(a(0), 0.5, 1e-12);
  EXPECT_NEAR(a(1), 0.25, 1e-12);
  EXPECT_NEAR(a(2), 0.25, 1e-12);
}

TEST(Mixing, EqualValuesReturnNormalizedWeights) {
  const VectorXd a = mixing_coefficients({0.2, 0.6}, values({7.0, 7.0}));
  EXPECT_NEAR(a(0), 0.25, 1e-12);
  EXPECT_NEAR(a(1), 0.75, 1e-12);
}

TEST(Mixing, ZeroWeightGetsExactlyZero) {
  const VectorXd a = mixing_coefficients({1.0, 0.0}, values({100.0, -100.0}));
  EXPECT_EQ(a(0), 1.0);
  EXPECT_EQ(a(1), 0.0);
}

TEST(Mixing, AllZeroWeightsThrow) {
  EXPECT_THROW(mixing_coefficients({0.0, 0.0}, values({1.0, 2.0})), AllWeightsZero);
}

TEST(Mixing, HugeValuesDoNotOverflow) {
  for (double v : {1e6, -1e6, 1e300}) {
    const VectorXd a = mixing_coefficients({0.5, 0.5}, values({v, 0.0}));
    EXPECT_TRUE(a.allFinite());
    EXPECT_NEAR(a.sum(), 1.0, 1e-12);
  }
  const VectorXd a = mixing_coefficients({0.5, 0.5}, values({1e6, 0.0}));
  EXPECT_EQ(a(0), 0.0);
  EXPECT_EQ(a(1), 1.0);
}

TEST(Mixing, ShiftInvariance) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> v(-5.0, 5.0);
  std::uniform_real_distribution<double> w(0.01, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> weights{w(rng), w(rng), w(rng)};
    const VectorXd vals = values({v(rng), v(rng), v(rng)});
    const VectorXd shifted = (vals.array() + v(rng) * 100.0).matrix();
    EXPECT_LT((mixing_coefficients(weights, vals) - mixing_coefficients(weights, shifted))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-10);
  }
}

TEST(BlendSet, ValidatesInputs) {
  const Pair& p = policies();
  EXPECT_THROW(BlendSet({}, {}), IncompatiblePolicies);
  EXPECT_THROW(BlendSet({p.near, p.far}, {0.0, 0.0}), AllWeightsZero);
  EXPECT_THROW(BlendSet({p.near, p.far}, {-0.1, 1.0}), ConfigError);
  EXPECT_THROW(BlendSet({p.near, p.far}, {0.5}), ConfigError);
  EXPECT_THROW(BlendSet({p.near, p.far}, {0.5, 0.5}, -1e-3), ConfigError);
}

TEST(BlendSet, RejectsMismatchedProblems) {
  const Pair& p = policies();
  AffinePolicy other = p.far;
  other.cost.control_weight *= 2.0;
  EXPECT_THROW(BlendSet({p.near, other}, {0.5, 0.5}), IncompatiblePolicies);
  AffinePolicy shorter = p.far;
  shorter.nominal_controls.pop_back();
  shorter.cost.horizon -= 1;
  EXPECT_THROW(BlendSet({p.near, shorter}, {0.5, 0.5}), IncompatiblePolicies);
}

TEST(Blend, CoefficientsStayOnSimplex) {
  const Pair& p = policies();
  const BlendSet set({p.near, p.far}, {0.3, 0.7});
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 0.3);
  std::uniform_int_distribution<int> step(0, set.horizon() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = step(rng);
    VectorXd x = p.near.nominal_states[k];
    for (int i = 0; i < 4; ++i) x(i) += g(rng);
    const VectorXd a = coefficients(set, x, k).alpha;
    EXPECT_GE(a.minCoeff(), 0.0);
    EXPECT_LE(a.maxCoeff(), 1.0);
    EXPECT_NEAR(a.sum(), 1.0, 1e-12);
  }
}

TEST(Blend, ValueOffsetShiftLeavesCoefficientsUnchanged) {
  const Pair& p = policies();
  AffinePolicy a = p.near, b = p.far;
  for (auto& s : a.value_offset) s += 1234.5;
  for (auto& s : b.value_offset) s += 1234.5;
  const BlendSet base({p.near, p.far}, {0.4, 0.6});
  const BlendSet shifted({a, b}, {0.4, 0.6});
  for (int k = 0; k < base.horizon(); k += 7) {
    const VectorXd x = p.far.nominal_states[k];
    EXPECT_LT((coefficients(base, x, k).alpha - coefficients(shifted, x, k).alpha)
                  .cwiseAbs()
                  .maxCoeff(),
              1e-10);
  }
}

TEST(Blend, IdenticalPoliciesSplitEvenly) {
  const Pair& p = policies();
  const BlendSet set({p.far, p.far}, {0.5, 0.5});
  const VectorXd x = p.near.nominal_states[10];
  const VectorXd a = coefficients(set, x, 10).alpha;
  EXPECT_NEAR(a(0), 0.5, 1e-15);
  EXPECT_NEAR(a(1), 0.5, 1e-15);
  EXPECT_LT((blended_control_unclamped(set, x, 10) - p.far.control(x, 10)).norm(), 1e-12);
}

TEST(Blend, DegenerateWeightsReproduceComponentBitwise) {
  const Pair& p = policies();
  const BlendSet only_near({p.near, p.far}, {1.0, 0.0});
  const BlendSet only_far({p.near, p.far}, {0.0, 1.0});
  for (int k = 0; k < only_near.horizon(); ++k) {
    const VectorXd x = 0.5 * (p.near.nominal_states[k] + p.far.nominal_states[k]);
    EXPECT_EQ(blended_control_unclamped(only_near, x, k), p.near.control(x, k)) << k;
    EXPECT_EQ(blended_control_unclamped(only_far, x, k), p.far.control(x, k)) << k;
  }
}

TEST(Blend, CoefficientsAreContinuousInState) {
  const Pair& p = policies();
  const BlendSet set({p.near, p.far}, {0.5, 0.5});
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < set.horizon(); k += 5) {
    const VectorXd x = p.near.nominal_states[k];
    VectorXd d(6);
    for (int i = 0; i < 6; ++i) d(i) = g(rng);
    d *= 1e-8 / d.norm();
    const double change =
        (coefficients(set, x, k).alpha - coefficients(set, VectorXd(x + d), k).alpha).norm();
    EXPECT_LT(change, 1e-5) << k;
  }
}

TEST(Blend, ControlsAreClamped) {
  const Pair& p = policies();
  const BlendSet set({p.near, p.far}, {0.5, 0.5});
  PlantState wild = p.x0;
  wild.omega1 = 50.0;
  wild.theta1 = -2.0;
  for (int k = 0; k < set.horizon(); ++k) {
    const ControlInput u = blended_control(set, wild, k);
    EXPECT_GE(u.pref1, 0.0);
    EXPECT_LE(u.pref1, kMaxPressure);
    EXPECT_GE(u.pref2, 0.0);
    EXPECT_LE(u.pref2, kMaxPressure);
  }
}

TEST(Blend, SinglePolicyRolloutMatchesClosedLoopPolicy) {
  const Pair& p = policies();
  const BlendSet set({p.near}, {1.0});
  const BlendedRollout r = blended_rollout(set, p.x0, ArmModel::defaults());
  ASSERT_EQ(r.coefficients.size(), static_cast<std::size_t>(set.horizon()));
  for (const auto& c : r.coefficients) EXPECT_EQ(c.alpha(0), 1.0);
  const Rollout ref = forward_pass(p.near, ArmDynamics(ArmModel::defaults()), 1.0);
  for (int k = 0; k <= set.horizon(); ++k) {
    EXPECT_LT((r.trajectory.states[k].vec() - ref.states[k]).norm(), 1e-12) << k;
  }
}

TEST(Blend, CoefficientCsvHasOneRowPerStep) {
  const Pair& p = policies();
  const BlendSet set({p.near, p.far}, {0.5, 0.5});
  const BlendedRollout r = blended_rollout(set, p.x0, ArmModel::defaults());
  const std::string csv = coefficients_csv(r.coefficients);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,alpha_1,alpha_2");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), set.horizon() + 1);
}

}  // namespace
}  // namespace exoassist
