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

#include "exoassist/intent.hpp"

#include <cmath>
#include <vector>

#include "exoassist/errors.hpp"
#include "exoassist/io.hpp"

namespace exoassist {

namespace {

constexpr int kShoulderVelocity = 10;
const char* const kStreamHeader[] = {"t",  "e1",     "e2",     "e3",     "e4",
                                     "e5", "e6",     "e7",     "e8",     "theta1",
                                     "theta2", "omega1", "omega2"};

int samples_for(double ms, double rate_hz) {
  return static_cast<int>(std::lround(ms * rate_hz / 1000.0));
}

}  // namespace

void SensorStream::validate() const {
  if (!(std::isfinite(rate_hz) && rate_hz > 0.0)) throw ConfigError("stream: rate must be > 0");
  if (!samples.allFinite()) throw ConfigError("stream: non-finite sample");
}

std::string stream_csv(const SensorStream& stream) {
  CsvTable t;
  t.header.assign(std::begin(kStreamHeader), std::end(kStreamHeader));
  for (int i = 0; i < stream.length(); ++i) {
    std::vector<double> row{i / stream.rate_hz};
    for (int c = 0; c < kFeatureDim; ++c) row.push_back(stream.samples(i, c));
    t.rows.push_back(std::move(row));
  }
  return t.to_string();
}

SensorStream parse_stream_csv(const std::string& text) {
  const CsvTable t = parse_csv(text);
  std::vector<std::size_t> cols;
  for (const char* name : kStreamHeader) cols.push_back(t.column(name));
  if (t.rows.size() < 2) throw IoError("stream csv needs at least two samples");

  SensorStream s;
  const double t0 = t.rows.front()[cols[0]];
  const double span = t.rows.back()[cols[0]] - t0;
  if (!(span > 0.0)) throw IoError("stream csv time column must increase");
  s.rate_hz = static_cast<double>(t.rows.size() - 1) / span;
  s.samples.resize(static_cast<Eigen::Index>(t.rows.size()), kFeatureDim);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (int c = 0; c < kFeatureDim; ++c) s.samples(i, c) = t.rows[i][cols[c + 1]];
  }
  return s;
}

int detect_onset(const SensorStream& stream, double threshold) {
  for (int i = 0; i < stream.length(); ++i) {
    if (std::abs(stream.samples(i, kShoulderVelocity)) > threshold) return i;
  }
  throw NoOnset("shoulder angular velocity never exceeds " + format_number(threshold) + " rad/s");
}

FeatureVector extract_features(const SensorStream& stream, int onset, const WindowSpec& spec) {
  const int window = samples_for(spec.window_ms, stream.rate_hz);
  const int lead = samples_for(spec.emg_lead_ms, stream.rate_hz);
  if (window < 1) throw ConfigError("feature window shorter than one sample");
  if (lead < 0) throw ConfigError("EMG lead must be >= 0");
  if (onset > stream.length()) throw InsufficientHistory("onset lies beyond the stream");
  if (onset - window - lead < 0) {
    throw InsufficientHistory("onset at sample " + std::to_string(onset) + " leaves less than " +
                              std::to_string(window + lead) + " samples of history");
  }
  FeatureVector psi;
  psi.head<kEmgChannels>() =
      stream.samples.block(onset - lead - window, 0, window, kEmgChannels).colwise().mean();
  psi.tail<4>() = stream.samples.block(onset - window, kEmgChannels, window, 4).colwise().mean();
  return psi;
}

void SigmoidMap::validate() const {
  if (!(std::isfinite(a) && a > 0.0)) throw ConfigError("sigmoid gain a must be > 0");
  if (!std::isfinite(b)) throw ConfigError("sigmoid offset b must be finite");
}

std::pair<double, double> weights_from_goal(const SigmoidMap& map, double y_hat) {
  // The larger weight comes from the logistic, the smaller one as its exact
  // complement, floored at one ulp below 1 so neither reaches 0 or 1.
  constexpr double kTiny = 0x1p-53;
  const double z = map.a * y_hat + map.b;
  const bool w2_larger = z >= 0.0;
  double large = 1.0 / (1.0 + std::exp(-std::abs(z)));
  double small = 1.0 - large;
  if (small < kTiny) {
    small = kTiny;
    large = 1.0 - kTiny;
  }
  return w2_larger ? std::pair{small, large} : std::pair{large, small};
}

}  // namespace exoassist
