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

#include "exoassist/policy_io.hpp"

#include <string>

#include "exoassist/errors.hpp"
#include "exoassist/io.hpp"
#include "json_util.hpp"

namespace exoassist {

using nlohmann::json;
using detail::json_mat;
using detail::json_vec;
using detail::mat_json;
using detail::vec_json;

namespace {

template <typename T, typename F>
json array_of(const std::vector<T>& items, F&& f) {
  json out = json::array();
  for (const auto& it : items) out.push_back(f(it));
  return out;
}

const json& field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw IoError(std::string("policy: missing field '") + key + "'");
  return doc.at(key);
}

void check_length(const json& j, std::size_t n, const char* what) {
  if (!j.is_array() || j.size() != n) {
    throw IoError(std::string("policy: ") + what + " has wrong length");
  }
}

}  // namespace

json policy_to_json(const AffinePolicy& p) {
  json cost;
  cost["target"] = vec_json(p.cost.target);
  cost["terminal_weight"] = mat_json(p.cost.terminal_weight);
  cost["state_weight"] = mat_json(p.cost.state_weight);
  cost["control_weight"] = mat_json(p.cost.control_weight);
  cost["rate_weight"] = mat_json(p.cost.rate_weight);
  cost["horizon"] = p.cost.horizon;
  cost["dt"] = p.cost.dt;

  json doc;
  doc["schema"] = "exoassist.policy";
  doc["version"] = kPolicySchemaVersion;
  doc["state_dim"] = p.state_dim();
  doc["control_dim"] = p.control_dim();
  doc["horizon"] = p.horizon();
  doc["converged"] = p.converged;
  doc["total_cost"] = p.total_cost;
  doc["cost"] = cost;
  doc["nominal_states"] = array_of(p.nominal_states, vec_json);
  doc["nominal_controls"] = array_of(p.nominal_controls, vec_json);
  doc["feedforward"] = array_of(p.feedforward, vec_json);
  doc["feedback"] = array_of(p.feedback, mat_json);
  doc["value_offset"] = p.value_offset;
  doc["value_gradient"] = array_of(p.value_gradient, vec_json);
  doc["value_hessian"] = array_of(p.value_hessian, mat_json);
  return doc;
}

AffinePolicy policy_from_json(const json& doc) {
  try {
    if (field(doc, "schema") != "exoassist.policy") throw IoError("policy: wrong schema tag");
    if (field(doc, "version").get<int>() != kPolicySchemaVersion) {
      throw IoError("policy: unsupported schema version");
    }
    const int n = field(doc, "state_dim").get<int>();
    const int m = field(doc, "control_dim").get<int>();
    const int N = field(doc, "horizon").get<int>();
    if (n < 1 || m < 1 || N < 1) throw IoError("policy: bad dimensions");

    AffinePolicy p;
    const json& c = field(doc, "cost");
    p.cost.target = json_vec(field(c, "target"), n, "policy: cost.target");
    p.cost.terminal_weight = json_mat(field(c, "terminal_weight"), n, n, "policy: cost.terminal_weight");
    p.cost.state_weight = json_mat(field(c, "state_weight"), n, n, "policy: cost.state_weight");
    p.cost.control_weight = json_mat(field(c, "control_weight"), m, m, "policy: cost.control_weight");
    p.cost.rate_weight = json_mat(field(c, "rate_weight"), m, m, "policy: cost.rate_weight");
    p.cost.horizon = field(c, "horizon").get<int>();
    p.cost.dt = field(c, "dt").get<double>();
    if (p.cost.horizon != N) throw IoError("policy: cost horizon mismatch");

    p.converged = field(doc, "converged").get<bool>();
    p.total_cost = field(doc, "total_cost").get<double>();

    const json& xs = field(doc, "nominal_states");
    const json& us = field(doc, "nominal_controls");
    const json& ls = field(doc, "feedforward");
    const json& Ls = field(doc, "feedback");
    const json& s0 = field(doc, "value_offset");
    const json& s = field(doc, "value_gradient");
    const json& S = field(doc, "value_hessian");
    check_length(xs, N + 1, "nominal_states");
    check_length(us, N, "nominal_controls");
    check_length(ls, N, "feedforward");
    check_length(Ls, N, "feedback");
    check_length(s0, N + 1, "value_offset");
    check_length(s, N + 1, "value_gradient");
    check_length(S, N + 1, "value_hessian");
    for (int k = 0; k <= N; ++k) {
      p.nominal_states.push_back(json_vec(xs[k], n, "policy: nominal_states"));
      p.value_offset.push_back(s0[k].get<double>());
      p.value_gradient.push_back(json_vec(s[k], n, "policy: value_gradient"));
      p.value_hessian.push_back(json_mat(S[k], n, n, "policy: value_hessian"));
    }
    for (int k = 0; k < N; ++k) {
      p.nominal_controls.push_back(json_vec(us[k], m, "policy: nominal_controls"));
      p.feedforward.push_back(json_vec(ls[k], m, "policy: feedforward"));
      p.feedback.push_back(json_mat(Ls[k], m, n, "policy: feedback"));
    }
    return p;
  } catch (const json::exception& e) {
    throw IoError(std::string("policy: ") + e.what());
  }
}

void save_policy(const std::filesystem::path& path, const AffinePolicy& policy) {
  write_file_atomic(path, policy_to_json(policy).dump(1) + "\n");
}

AffinePolicy load_policy(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return policy_from_json(doc);
}

}  // namespace exoassist
