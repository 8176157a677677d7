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
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "exoassist/cost.hpp"
#include "exoassist/ilqr.hpp"
#include "exoassist/intent.hpp"
#include "exoassist/plant.hpp"
#include "exoassist/synth.hpp"
#include "exoassist/task.hpp"

namespace exoassist {

inline constexpr int kConfigSchemaVersion = 1;

struct NamedTask {
  std::string id;
  ThrowTask task;
};

struct BlendOptions {
  std::vector<std::string> components{"1m", "3m"};
  std::vector<double> weights{0.5, 0.5};
  double value_scale = 1e-3;
  std::string target = "2m";  // dedicated task the blend is compared against
};

struct IntentOptions {
  int components = 1;
  WindowSpec window;
  double onset_threshold = 0.2;  // rad/s
  SigmoidMap sigmoid;
  std::vector<double> train_distances{1.0, 3.0};
  int trials_per_distance = 20;
  double test_distance = 2.0;
  int test_trials = 20;
  SynthProfile profile;
};

struct EvaluateOptions {
  int trials = 20;
  double perturbation = 0.01;
};

struct RunConfig {
  ArmModel arm = ArmModel::defaults();
  Vector2 start_theta{0.0, 1.5707963267948966};
  CostSpec cost;  // weights only; targets and horizon come from each task
  SolverOptions solver;
  std::vector<NamedTask> tasks;
  BlendOptions blend;
  IntentOptions intent;
  EvaluateOptions evaluate;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 42;

  static RunConfig defaults();

  const NamedTask& task(const std::string& id) const;  // throws ConfigError
  PlantState start_state() const;

  // Throws ConfigError on any out-of-range value or dangling task reference.
  void validate() const;
};

// Missing sections fall back to defaults; unknown keys and a wrong
// schema_version are rejected. Throws ConfigError (IoError for unreadable
// files). The result is validated.
RunConfig config_from_json(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const RunConfig& config);

}  // namespace exoassist
