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

#include <filesystem>

#include <json.hpp>

#include "exoassist/ilqr.hpp"

namespace exoassist {

inline constexpr int kPolicySchemaVersion = 1;

// Every array of the policy, at full double precision so that reloaded
// policies evaluate bit-identically.
nlohmann::json policy_to_json(const AffinePolicy& policy);
// Throws IoError on schema violations.
AffinePolicy policy_from_json(const nlohmann::json& doc);

void save_policy(const std::filesystem::path& path, const AffinePolicy& policy);
AffinePolicy load_policy(const std::filesystem::path& path);

}  // namespace exoassist
