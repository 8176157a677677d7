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
#include "exoassist/intent.hpp"
#include "exoassist/pls.hpp"
#include "exoassist/synth.hpp"

namespace exoassist {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

SensorStream quiet_stream(int length) {
  SensorStream s;
  s.rate_hz = 1000.0;
  s.samples = Eigen::Matrix<double, Eigen::Dynamic, kFeatureDim>::Zero(length, kFeatureDim);
  return s;
}

constexpr int kShoulderVelocity = 10;

TEST(Pls, SingleInformativeChannelIsFound) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dist(1.0, 3.0);
  std::normal_distribution<double> noise(0.0, 1e-3);
  const int n = 40;
  MatrixXd X = MatrixXd::Zero(n, kFeatureDim);
  VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double d = dist(rng);
    X(i, 0) = d;
    y(i) = d + noise(rng);
  }
  const PlsModel m = pls_fit(X, y, 1);
  EXPECT_NEAR(std::abs(m.W(0, 0)), 1.0, 1e-6);
  EXPECT_NEAR(m.W.col(0).tail(kFeatureDim - 1).norm(), 0.0, 1e-6);
  EXPECT_GT(m.training_r2, 0.999);
  EXPECT_THROW(pls_fit(X, y, 2), RankDeficient);
}

TEST(Pls, FirstDirectionMatchesGridSearch) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  const int n = 60;
  MatrixXd X(n, 2);
  VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double a = g(rng), b = g(rng);
    X(i, 0) = 3.0 * a + 1.0;
    X(i, 1) = 0.5 * (a + b) - 2.0;
    y(i) = 0.7 * a - 0.4 * b + 0.1 * g(rng);
  }
  const PlsModel m = pls_fit(X, y, 1);

  // Independent z-scoring and brute force over unit directions.
  MatrixXd Z = X.rowwise() - X.colwise().mean();
  for (int j = 0; j < 2; ++j) Z.col(j) /= std::sqrt(Z.col(j).squaredNorm() / (n - 1));
  const VectorXd yc = (y.array() - y.mean()).matrix();
  auto objective = [&](const VectorXd& w) {
    const double c = yc.dot(Z * w);
    return c * c;
  };
  double best = -1.0;
  double best_angle = 0.0;
  const int grid = 100000;
  for (int i = 0; i < grid; ++i) {
    const double t = M_PI * i / grid;
    const double v = objective(VectorXd((VectorXd(2) << std::cos(t), std::sin(t)).finished()));
    if (v > best) {
      best = v;
      best_angle = t;
    }
  }
  const VectorXd w = m.W.col(0);
  EXPECT_NEAR(w.norm(), 1.0, 1e-12);
  EXPECT_GE(objective(w), (1.0 - 1e-4) * best);
  double angle = std::atan2(w(1), w(0));
  if (angle < 0.0) angle += M_PI;
  double gap = std::abs(angle - best_angle);
  gap = std::min(gap, M_PI - gap);
  EXPECT_LT(gap, 1e-2);
}

struct Dataset {
  MatrixXd X;
  VectorXd y;
};

Dataset synthetic_dataset(std::uint64_t run_seed, const std::vector<double>& distances, int per,
                          int slot0) {
  Dataset d;
  d.X.resize(static_cast<Eigen::Index>(distances.size()) * per, kFeatureDim);
  d.y.resize(d.X.rows());
  int row = 0;
  for (std::size_t s = 0; s < distances.size(); ++s) {
    for (int i = 0; i < per; ++i, ++row) {
      const SynthTrial t =
          synth_trial(distances[s], trial_seed(run_seed, slot0 + static_cast<int>(s), i));
      d.X.row(row) = extract_features(t.stream, detect_onset(t.stream)).transpose();
      d.y(row) = t.label;
    }
  }
  return d;
}

TEST(Pls, MeanProjectsToZeroAndPredictsMeanLabel) {
  const Dataset d = synthetic_dataset(5, {1.0, 3.0}, 10, 0);
  const PlsModel m = pls_fit(d.X, d.y, 2);
  const VectorXd mean = d.X.colwise().mean().transpose();
  EXPECT_LT(pls_project(m, mean).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(predict_goal(m, mean), d.y.mean(), 1e-10);
}

TEST(Pls, StoredScoresMatchProjection) {
  const Dataset d = synthetic_dataset(6, {1.0, 3.0}, 10, 0);
  const PlsModel m = pls_fit(d.X, d.y, 2);
  for (int i = 0; i < d.X.rows(); ++i) {
    const VectorXd mu = pls_project(m, d.X.row(i).transpose());
    EXPECT_LT((mu - m.training_scores.row(i).transpose()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Pls, PredictionsIgnoreChannelUnits) {
  const Dataset d = synthetic_dataset(7, {1.0, 3.0}, 10, 0);
  MatrixXd scaled = d.X;
  scaled.col(3) *= 7.3;
  scaled.col(9) *= 1e-3;
  const PlsModel a = pls_fit(d.X, d.y, 1);
  const PlsModel b = pls_fit(scaled, d.y, 1);
  for (int i = 0; i < d.X.rows(); ++i) {
    EXPECT_NEAR(predict_goal(a, d.X.row(i).transpose()), predict_goal(b, scaled.row(i).transpose()),
                1e-8);
  }
}

TEST(Pls, DegenerateInputsThrow) {
  MatrixXd X = MatrixXd::Random(5, 3);
  EXPECT_THROW(pls_fit(X, VectorXd::Constant(5, 2.0), 1), DegenerateLabels);
  EXPECT_THROW(pls_fit(X.topRows(1), VectorXd::Constant(1, 2.0), 1), DegenerateLabels);
  EXPECT_THROW(pls_fit(X, VectorXd::LinSpaced(5, 1.0, 3.0), 0), ConfigError);
  EXPECT_THROW(pls_fit(X, VectorXd::LinSpaced(5, 1.0, 3.0), 4), ConfigError);
}

TEST(Pls, JsonRoundTripPredictsBitIdentically) {
  const Dataset d = synthetic_dataset(8, {1.0, 3.0}, 10, 0);
  const PlsModel m = pls_fit(d.X, d.y, 2);
  const PlsModel r = pls_from_json(nlohmann::json::parse(pls_to_json(m).dump()));
  for (int i = 0; i < d.X.rows(); ++i) {
    const VectorXd psi = d.X.row(i).transpose() * 1.01;
    EXPECT_EQ(predict_goal(m, psi), predict_goal(r, psi));
  }
  EXPECT_THROW(pls_from_json(nlohmann::json::object()), IoError);
}

TEST(Onset, FirstSampleAboveThreshold) {
  SensorStream s = quiet_stream(200);
  for (int i = 57; i < 200; ++i) s.samples(i, kShoulderVelocity) = 0.5;
  EXPECT_EQ(detect_onset(s, 0.2), 57);
}

TEST(Onset, UsesMagnitude) {
  SensorStream s = quiet_stream(200);
  s.samples(90, kShoulderVelocity) = -0.3;
  EXPECT_EQ(detect_onset(s, 0.2), 90);
}

TEST(Onset, ThresholdIsStrict) {
  SensorStream s = quiet_stream(100);
  s.samples(30, kShoulderVelocity) = 0.2;
  s.samples(31, kShoulderVelocity) = 0.2000001;
  EXPECT_EQ(detect_onset(s, 0.2), 31);
}

TEST(Onset, ZeroThresholdFindsFirstMotion) {
  SensorStream s = quiet_stream(100);
  s.samples(12, kShoulderVelocity) = 1e-9;
  EXPECT_EQ(detect_onset(s, 0.0), 12);
}

TEST(Onset, QuietStreamHasNoOnset) {
  EXPECT_THROW(detect_onset(quiet_stream(500), 0.2), NoOnset);
}

TEST(Features, WindowsAverageTheRightSamples) {
  SensorStream s = quiet_stream(400);
  for (int i = 0; i < 400; ++i) {
    for (int c = 0; c < kFeatureDim; ++c) s.samples(i, c) = i + 1000.0 * c;
  }
  const int onset = 300;
  const FeatureVector f = extract_features(s, onset, {50.0, 80.0});
  // EMG over [170, 220), kinematics over [250, 300).
  for (int c = 0; c < kEmgChannels; ++c) EXPECT_NEAR(f(c), 194.5 + 1000.0 * c, 1e-9) << c;
  for (int c = kEmgChannels; c < kFeatureDim; ++c) EXPECT_NEAR(f(c), 274.5 + 1000.0 * c, 1e-9) << c;
}

TEST(Features, MatchHandComputedMeansOnSyntheticTrial) {
  const SynthTrial t = synth_trial(2.0, 99);
  const int onset = detect_onset(t.stream);
  const FeatureVector f = extract_features(t.stream, onset);
  for (int c = 0; c < kFeatureDim; ++c) {
    const int start = c < kEmgChannels ? onset - 130 : onset - 50;
    double sum = 0.0;
    for (int i = start; i < start + 50; ++i) sum += t.stream.samples(i, c);
    EXPECT_NEAR(f(c), sum / 50.0, 1e-12) << c;
  }
}

TEST(Features, ShortHistoryThrows) {
  SensorStream s = quiet_stream(400);
  EXPECT_THROW(extract_features(s, 129), InsufficientHistory);
  EXPECT_NO_THROW(extract_features(s, 130));
  EXPECT_THROW(extract_features(s, 401), InsufficientHistory);
}

TEST(Sigmoid, KnownValues) {
  const auto [w1, w2] = weights_from_goal({2.0, -4.0}, 3.0);
  EXPECT_NEAR(w2, 1.0 / (1.0 + std::exp(-2.0)), 1e-15);
  EXPECT_NEAR(w1, 1.0 - w2, 1e-15);
  const auto [m1, m2] = weights_from_goal({3.0, -6.0}, 2.0);
  EXPECT_EQ(m1, 0.5);
  EXPECT_EQ(m2, 0.5);
}

TEST(Sigmoid, WeightsSumToExactlyOne) {
  const SigmoidMap map;
  for (double y = -1000.0; y <= 1000.0; y += 0.37) {
    const auto [w1, w2] = weights_from_goal(map, y);
    EXPECT_EQ(w1 + w2, 1.0) << y;
    EXPECT_GT(w1, 0.0) << y;
    EXPECT_GT(w2, 0.0) << y;
    EXPECT_LT(w1, 1.0) << y;
    EXPECT_LT(w2, 1.0) << y;
  }
}

TEST(Sigmoid, FarWeightIncreasesWithGoal) {
  const SigmoidMap map;
  double prev = 0.0;
  for (double y = -5.0; y <= 9.0; y += 0.01) {
    const double w2 = weights_from_goal(map, y).second;
    EXPECT_GT(w2, prev) << y;
    prev = w2;
  }
}

TEST(Sigmoid, RejectsNonPositiveGain) {
  EXPECT_THROW((SigmoidMap{0.0, 1.0}.validate()), ConfigError);
  EXPECT_THROW((SigmoidMap{-1.0, 1.0}.validate()), ConfigError);
}

TEST(Synth, SameSeedSameStream) {
  const SynthTrial a = synth_trial(2.0, 17);
  const SynthTrial b = synth_trial(2.0, 17);
  const SynthTrial c = synth_trial(2.0, 18);
  EXPECT_EQ(a.stream.samples, b.stream.samples);
  EXPECT_NE(a.stream.samples, c.stream.samples);
  EXPECT_EQ(a.label, 2.0);
}

TEST(Synth, BurstGrowsWithDistance) {
  double previous = 0.0;
  for (double d : {1.0, 2.0, 3.0}) {
    double sum = 0.0;
    for (int seed = 0; seed < 10; ++seed) {
      const SynthTrial t = synth_trial(d, static_cast<std::uint64_t>(seed));
      sum += t.stream.samples.block(530, 0, 40, 1).mean();
    }
    EXPECT_GT(sum, previous) << d;
    previous = sum;
  }
}

TEST(Synth, TrialSeedsAreDistinct) {
  EXPECT_NE(trial_seed(42, 0, 0), trial_seed(42, 0, 1));
  EXPECT_NE(trial_seed(42, 0, 0), trial_seed(42, 1, 0));
  EXPECT_NE(trial_seed(42, 0, 0), trial_seed(43, 0, 0));
  EXPECT_EQ(trial_seed(42, 3, 7), trial_seed(42, 3, 7));
}

TEST(Stream, CsvRoundTrip) {
  const SynthTrial t = synth_trial(1.5, 3);
  const SensorStream r = parse_stream_csv(stream_csv(t.stream));
  EXPECT_DOUBLE_EQ(r.rate_hz, t.stream.rate_hz);
  ASSERT_EQ(r.length(), t.stream.length());
  const double err = (r.samples - t.stream.samples).cwiseAbs().maxCoeff();
  EXPECT_LT(err, 1e-8);
}

TEST(Stream, MalformedCsvThrows) {
  EXPECT_THROW(parse_stream_csv("t,e1\n0,1\n"), IoError);
  EXPECT_THROW(parse_stream_csv(""), IoError);
}

TEST(Intent, HeldOutMiddleDistanceIsRecovered) {
  const std::uint64_t seed = 42;
  const Dataset train = synthetic_dataset(seed, {1.0, 3.0}, 20, 0);
  const PlsModel m = pls_fit(train.X, train.y, 1);
  const Dataset test = synthetic_dataset(seed, {2.0}, 20, 1000);
  double mean = 0.0;
  for (int i = 0; i < test.X.rows(); ++i) mean += predict_goal(m, test.X.row(i).transpose());
  mean /= test.X.rows();
  EXPECT_LT(std::abs(mean - 2.0), 0.4);
}

}  // namespace
}  // namespace exoassist
