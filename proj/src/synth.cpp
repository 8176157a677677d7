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

#include "exoassist/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "exoassist/errors.hpp"

namespace exoassist {

void SynthProfile::validate() const {
  auto pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!pos(rate_hz) || !pos(duration)) throw ConfigError("synth: rate and duration must be > 0");
  if (!nonneg(move_jitter) || !nonneg(burst_lead_jitter) || !nonneg(burst_rise)) {
    throw ConfigError("synth: jitters and rise time must be >= 0");
  }
  if (!(move_time - move_jitter - burst_lead - burst_lead_jitter > 0.0) ||
      !(move_time + move_jitter < duration)) {
    throw ConfigError("synth: movement and burst must fit inside the trial");
  }
  if (!nonneg(burst_base) || !nonneg(burst_slope) || !nonneg(burst_variability) ||
      !nonneg(emg_noise) || !nonneg(accel_jitter) || !nonneg(velocity_noise) ||
      !nonneg(angle_noise)) {
    throw ConfigError("synth: amplitudes and noise levels must be >= 0");
  }
  if (!pos(shoulder_accel) || !std::isfinite(elbow_ratio)) {
    throw ConfigError("synth: shoulder acceleration must be > 0");
  }
  for (double g : gain) {
    if (!nonneg(g)) throw ConfigError("synth: channel gains must be >= 0");
  }
}

std::uint64_t trial_seed(std::uint64_t run_seed, int slot, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(run_seed), static_cast<std::uint32_t>(run_seed >> 32),
                    static_cast<std::uint32_t>(slot), static_cast<std::uint32_t>(index)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

SynthTrial synth_trial(double distance, std::uint64_t seed, const SynthProfile& profile) {
  if (!(std::isfinite(distance) && distance > 0.0)) throw ConfigError("synth: distance must be > 0");
  profile.validate();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);

  const double t_move = profile.move_time + profile.move_jitter * sym(rng);
  const double t_burst = t_move - profile.burst_lead - profile.burst_lead_jitter * sym(rng);
  const double amplitude = std::max(0.0, (profile.burst_base + profile.burst_slope * distance) *
                                             (1.0 + profile.burst_variability * unit(rng)));
  const double accel = profile.shoulder_accel * (1.0 + profile.accel_jitter * unit(rng));
  const double elbow_accel = profile.elbow_ratio * accel;

  SynthTrial trial;
  trial.label = distance;
  SensorStream& s = trial.stream;
  s.rate_hz = profile.rate_hz;
  const int n = static_cast<int>(std::lround(profile.duration * profile.rate_hz));
  s.samples.resize(n, kFeatureDim);
  for (int i = 0; i < n; ++i) {
    const double t = i / profile.rate_hz;
    double envelope = 0.0;
    if (t >= t_burst) {
      envelope = profile.burst_rise > 0.0 ? std::min(1.0, (t - t_burst) / profile.burst_rise) : 1.0;
    }
    for (int c = 0; c < kEmgChannels; ++c) {
      s.samples(i, c) =
          profile.gain[c] * amplitude * envelope + std::abs(profile.emg_noise * unit(rng));
    }
    const double tau = std::max(0.0, t - t_move);
    s.samples(i, 8) = profile.rest_theta1 + 0.5 * accel * tau * tau + profile.angle_noise * unit(rng);
    s.samples(i, 9) =
        profile.rest_theta2 + 0.5 * elbow_accel * tau * tau + profile.angle_noise * unit(rng);
    s.samples(i, 10) = accel * tau + profile.velocity_noise * unit(rng);
    s.samples(i, 11) = elbow_accel * tau + profile.velocity_noise * unit(rng);
  }
  return trial;
}

}  // namespace exoassist
