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

#include <array>
#include <cstdint>

#include "exoassist/intent.hpp"

namespace exoassist {

// Generator for synthetic pre-movement throw trials. EMG is amplitude coded:
// channel c bursts to gain[c] * (base + slope * distance) before the arm
// starts moving. The shoulder then accelerates at a distance-independent
// rate, so onset timing carries no distance information.
struct SynthProfile {
  double rate_hz = 1000.0;
  double duration = 1.0;         // s
  double move_time = 0.6;        // s, nominal start of shoulder motion
  double move_jitter = 0.02;     // s, uniform half-width
  double burst_lead = 0.12;      // s, burst start before motion
  double burst_lead_jitter = 0.005;
  double burst_rise = 0.01;      // s, linear rise time
  double burst_base = 0.1;
  double burst_slope = 0.1;      // per meter
  double burst_variability = 0.05;  // relative std of the per-trial amplitude
  std::array<double, kEmgChannels> gain{1.0, 0.8, 0.6, 0.9, 0.5, 0.7, 0.4, 0.3};
  double emg_noise = 0.02;       // std before rectification
  double shoulder_accel = 8.0;   // rad/s^2
  double elbow_ratio = 0.4;      // elbow acceleration / shoulder acceleration
  double accel_jitter = 0.05;    // relative std
  double velocity_noise = 0.01;  // rad/s
  double angle_noise = 0.002;    // rad
  double rest_theta1 = 0.0;
  double rest_theta2 = 1.5707963267948966;

  // Throws ConfigError.
  void validate() const;
};

struct SynthTrial {
  SensorStream stream;
  double label = 0.0;
};

// Deterministic in (distance, seed, profile).
SynthTrial synth_trial(double distance, std::uint64_t seed, const SynthProfile& profile = {});

// Seed of trial `index` at distance slot `slot` under a run seed.
std::uint64_t trial_seed(std::uint64_t run_seed, int slot, int index);

}  // namespace exoassist
