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

#include <string>
#include <utility>

#include <Eigen/Dense>

namespace exoassist {

inline constexpr int kEmgChannels = 8;
inline constexpr int kFeatureDim = 12;

// psi = [e1..e8, theta1, theta2, omega1, omega2].
using FeatureVector = Eigen::Matrix<double, kFeatureDim, 1>;

// Uniformly sampled rows of [e1..e8, theta1, theta2, omega1, omega2].
struct SensorStream {
  double rate_hz = 1000.0;
  Eigen::Matrix<double, Eigen::Dynamic, kFeatureDim> samples;

  int length() const { return static_cast<int>(samples.rows()); }
  // Throws ConfigError.
  void validate() const;
};

// Header t,e1..e8,theta1,theta2,omega1,omega2.
std::string stream_csv(const SensorStream& stream);
// Sample rate is recovered from the time column. Throws IoError.
SensorStream parse_stream_csv(const std::string& text);

// First sample whose |shoulder angular velocity| exceeds `threshold` (rad/s).
// Throws NoOnset.
int detect_onset(const SensorStream& stream, double threshold = 0.2);

struct WindowSpec {
  double window_ms = 50.0;
  double emg_lead_ms = 80.0;
};

// Kinematics averaged over [onset - window, onset); EMG over the same window
// shifted back by the lead. Throws InsufficientHistory.
FeatureVector extract_features(const SensorStream& stream, int onset, const WindowSpec& spec = {});

// w2 = 1 / (1 + exp(-a y - b)), w1 = 1 - w2.
struct SigmoidMap {
  double a = 3.0;
  double b = -6.0;

  // Throws ConfigError unless a > 0.
  void validate() const;
};

// Both weights lie in (0, 1) and add to exactly 1 in double precision.
std::pair<double, double> weights_from_goal(const SigmoidMap& map, double y_hat);

}  // namespace exoassist
