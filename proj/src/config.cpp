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

#include "exoassist/config.hpp"

#include <cmath>
#include <set>

#include "exoassist/errors.hpp"
#include "exoassist/io.hpp"

namespace exoassist {

using nlohmann::json;

namespace {

// Reads the keys of one JSON object and rejects the ones nobody asked for.
class Section {
 public:
  Section(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  // Throws on keys that were never looked up.
  void finish() const {
    for (const auto& [key, value] : doc_.items()) {
      if (!seen_.count(key)) throw ConfigError(path_ + ": unknown key '" + key + "'");
    }
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = doc_.find(key);
    return it == doc_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* j = find(key)) {
      if (!j->is_number()) throw ConfigError(where(key) + ": expected a number");
      out = j->get<double>();
    }
  }

  void integer(const std::string& key, int& out) {
    if (const json* j = find(key)) {
      if (!j->is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
      out = j->get<int>();
    }
  }

  void unsigned_integer(const std::string& key, std::uint64_t& out) {
    if (const json* j = find(key)) {
      if (!j->is_number_unsigned()) throw ConfigError(where(key) + ": expected an unsigned integer");
      out = j->get<std::uint64_t>();
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* j = find(key)) {
      if (!j->is_string()) throw ConfigError(where(key) + ": expected a string");
      out = j->get<std::string>();
    }
  }

  void numbers(const std::string& key, std::vector<double>& out) {
    if (const json* j = find(key)) {
      if (!j->is_array()) throw ConfigError(where(key) + ": expected an array of numbers");
      out.clear();
      for (const auto& v : *j) {
        if (!v.is_number()) throw ConfigError(where(key) + ": expected an array of numbers");
        out.push_back(v.get<double>());
      }
    }
  }

  void vector2(const std::string& key, Vector2& out) {
    std::vector<double> v{out(0), out(1)};
    numbers(key, v);
    if (v.size() != 2) throw ConfigError(where(key) + ": expected 2 numbers");
    out = {v[0], v[1]};
  }

  std::string where(const std::string& key) const { return path_ + "." + key; }

 private:
  const json& doc_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_link(const json& j, const std::string& path, LinkParams& link) {
  Section s(j, path);
  s.number("mass", link.mass);
  s.number("length", link.length);
  s.number("com", link.com);
  s.number("inertia", link.inertia);
  s.finish();
}

void read_joint(const json& j, const std::string& path, JointParams& joint) {
  Section s(j, path);
  s.number("pulley_radius", joint.pulley_radius);
  s.number("force_gain", joint.force_gain);
  s.number("force_offset", joint.force_offset);
  s.number("friction", joint.friction);
  s.finish();
}

void read_arm(const json& j, ArmModel& arm) {
  Section s(j, "arm");
  s.number("gravity", arm.gravity);
  s.number("dt", arm.dt);
  s.number("tc_rise", arm.tc_rise);
  s.number("tc_fall", arm.tc_fall);
  if (const json* links = s.find("links")) {
    if (!links->is_array() || links->size() != 2) throw ConfigError("arm.links: expected 2 links");
    for (int i = 0; i < 2; ++i) {
      read_link((*links)[i], "arm.links[" + std::to_string(i) + "]", arm.links[i]);
    }
  }
  if (const json* joints = s.find("joints")) {
    if (!joints->is_array() || joints->size() != 2) {
      throw ConfigError("arm.joints: expected 2 joints");
    }
    for (int i = 0; i < 2; ++i) {
      read_joint((*joints)[i], "arm.joints[" + std::to_string(i) + "]", arm.joints[i]);
    }
  }
  s.finish();
}

void read_task(const json& j, const std::string& path, NamedTask& t) {
  Section s(j, path);
  s.string("id", t.id);
  s.number("distance", t.task.distance);
  s.number("hoop_height", t.task.hoop_height);
  s.number("radius", t.task.radius);
  s.vector2("release_theta", t.task.release_theta);
  s.number("t_rel", t.task.t_rel);
  s.number("ball_mass", t.task.ball_mass);
  s.finish();
  if (t.id.empty()) throw ConfigError(path + ": task id is required");
}

void read_profile(const json& j, SynthProfile& p) {
  Section s(j, "intent.profile");
  s.number("rate_hz", p.rate_hz);
  s.number("duration", p.duration);
  s.number("move_time", p.move_time);
  s.number("move_jitter", p.move_jitter);
  s.number("burst_lead", p.burst_lead);
  s.number("burst_lead_jitter", p.burst_lead_jitter);
  s.number("burst_rise", p.burst_rise);
  s.number("burst_base", p.burst_base);
  s.number("burst_slope", p.burst_slope);
  s.number("burst_variability", p.burst_variability);
  std::vector<double> gain(p.gain.begin(), p.gain.end());
  s.numbers("gain", gain);
  if (gain.size() != p.gain.size()) throw ConfigError("intent.profile.gain: expected 8 numbers");
  std::copy(gain.begin(), gain.end(), p.gain.begin());
  s.number("emg_noise", p.emg_noise);
  s.number("shoulder_accel", p.shoulder_accel);
  s.number("elbow_ratio", p.elbow_ratio);
  s.number("accel_jitter", p.accel_jitter);
  s.number("velocity_noise", p.velocity_noise);
  s.number("angle_noise", p.angle_noise);
  s.number("rest_theta1", p.rest_theta1);
  s.number("rest_theta2", p.rest_theta2);
  s.finish();
}

void read_intent(const json& j, IntentOptions& o) {
  Section s(j, "intent");
  s.integer("components", o.components);
  s.number("window_ms", o.window.window_ms);
  s.number("emg_lead_ms", o.window.emg_lead_ms);
  s.number("onset_threshold", o.onset_threshold);
  s.number("sigmoid_a", o.sigmoid.a);
  s.number("sigmoid_b", o.sigmoid.b);
  s.numbers("train_distances", o.train_distances);
  s.integer("trials_per_distance", o.trials_per_distance);
  s.number("test_distance", o.test_distance);
  s.integer("test_trials", o.test_trials);
  if (const json* p = s.find("profile")) read_profile(*p, o.profile);
  s.finish();
}

json vec2(const Vector2& v) { return json::array({v(0), v(1)}); }

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig c;
  for (double d : {1.0, 2.0, 3.0}) {
    NamedTask t;
    t.id = std::to_string(static_cast<int>(d)) + "m";
    t.task.distance = d;
    c.tasks.push_back(t);
  }
  return c;
}

const NamedTask& RunConfig::task(const std::string& id) const {
  for (const auto& t : tasks) {
    if (t.id == id) return t;
  }
  throw ConfigError("no task with id '" + id + "'");
}

PlantState RunConfig::start_state() const { return hold_state(start_theta, arm); }

void RunConfig::validate() const {
  arm.validate();
  cost.validate();
  solver.validate();
  if (!start_theta.allFinite()) throw ConfigError("start_theta must be finite");
  if (tasks.empty()) throw ConfigError("tasks: at least one task is required");
  std::set<std::string> ids;
  for (const auto& t : tasks) {
    if (!ids.insert(t.id).second) throw ConfigError("tasks: duplicate id '" + t.id + "'");
    t.task.validate();
    try {
      cost_spec_for(t.task, arm, cost);
    } catch (const DomainError& e) {
      throw ConfigError("task '" + t.id + "': " + e.what());
    }
  }
  if (blend.components.empty()) throw ConfigError("blend.components must not be empty");
  for (const auto& id : blend.components) task(id);
  task(blend.target);
  if (blend.weights.size() != blend.components.size()) {
    throw ConfigError("blend.weights must have one entry per component");
  }
  double total = 0.0;
  for (double w : blend.weights) {
    if (!(std::isfinite(w) && w >= 0.0)) throw ConfigError("blend.weights must be >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw ConfigError("blend.weights must not all be zero");
  if (!(std::isfinite(blend.value_scale) && blend.value_scale >= 0.0)) {
    throw ConfigError("blend.value_scale must be >= 0");
  }
  const int first_horizon = cost_spec_for(task(blend.components.front()).task, arm, cost).horizon;
  for (const auto& id : blend.components) {
    if (cost_spec_for(task(id).task, arm, cost).horizon != first_horizon) {
      throw ConfigError("blend components must share the release time");
    }
  }

  if (intent.components < 1 || intent.components > kFeatureDim) {
    throw ConfigError("intent.components must be in [1, 12]");
  }
  if (!(intent.window.window_ms > 0.0) || !(intent.window.emg_lead_ms >= 0.0)) {
    throw ConfigError("intent window must be > 0 ms and lead >= 0 ms");
  }
  if (!(std::isfinite(intent.onset_threshold) && intent.onset_threshold >= 0.0)) {
    throw ConfigError("intent.onset_threshold must be >= 0");
  }
  intent.sigmoid.validate();
  if (intent.train_distances.empty()) throw ConfigError("intent.train_distances must not be empty");
  for (double d : intent.train_distances) {
    if (!(std::isfinite(d) && d > 0.0)) throw ConfigError("intent.train_distances must be > 0");
  }
  if (intent.trials_per_distance < 1 || intent.test_trials < 1) {
    throw ConfigError("intent trial counts must be >= 1");
  }
  if (!(std::isfinite(intent.test_distance) && intent.test_distance > 0.0)) {
    throw ConfigError("intent.test_distance must be > 0");
  }
  intent.profile.validate();
  if (evaluate.trials < 1) throw ConfigError("evaluate.trials must be >= 1");
  if (!(std::isfinite(evaluate.perturbation) && evaluate.perturbation >= 0.0)) {
    throw ConfigError("evaluate.perturbation must be >= 0");
  }
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

RunConfig config_from_json(const json& doc) {
  RunConfig c = RunConfig::defaults();
  try {
    Section s(doc, "config");
    int version = -1;
    s.integer("schema_version", version);
    if (version != kConfigSchemaVersion) {
      throw ConfigError("config: schema_version must be " + std::to_string(kConfigSchemaVersion));
    }
    s.unsigned_integer("seed", c.seed);
    std::string out = c.output_dir.string();
    s.string("output_dir", out);
    c.output_dir = out;
    if (const json* arm = s.find("arm")) read_arm(*arm, c.arm);
    s.vector2("start_theta", c.start_theta);
    if (const json* cost = s.find("cost")) {
      Section cs(*cost, "cost");
      cs.number("c_a", c.cost.c_a);
      cs.number("c_v", c.cost.c_v);
      cs.number("c_p", c.cost.c_p);
      cs.number("c_pd", c.cost.c_pd);
      cs.finish();
    }
    if (const json* solver = s.find("solver")) {
      Section ss(*solver, "solver");
      ss.number("tol_cost", c.solver.tol_cost);
      ss.integer("max_iter", c.solver.max_iter);
      ss.number("reg_init", c.solver.reg_init);
      ss.number("reg_max", c.solver.reg_max);
      ss.number("reg_increase", c.solver.reg_increase);
      ss.number("reg_decrease", c.solver.reg_decrease);
      ss.integer("max_line_search", c.solver.max_line_search);
      ss.finish();
    }
    if (const json* tasks = s.find("tasks")) {
      if (!tasks->is_array()) throw ConfigError("tasks: expected an array");
      c.tasks.clear();
      for (std::size_t i = 0; i < tasks->size(); ++i) {
        NamedTask t;
        read_task((*tasks)[i], "tasks[" + std::to_string(i) + "]", t);
        c.tasks.push_back(t);
      }
    }
    if (const json* blend = s.find("blend")) {
      Section bs(*blend, "blend");
      if (const json* comps = bs.find("components")) {
        if (!comps->is_array()) throw ConfigError("blend.components: expected an array");
        c.blend.components.clear();
        for (const auto& id : *comps) {
          if (!id.is_string()) throw ConfigError("blend.components: expected task ids");
          c.blend.components.push_back(id.get<std::string>());
        }
      }
      bs.numbers("weights", c.blend.weights);
      bs.number("value_scale", c.blend.value_scale);
      bs.string("target", c.blend.target);
      bs.finish();
    }
    if (const json* intent = s.find("intent")) read_intent(*intent, c.intent);
    if (const json* ev = s.find("evaluate")) {
      Section es(*ev, "evaluate");
      es.integer("trials", c.evaluate.trials);
      es.number("perturbation", c.evaluate.perturbation);
      es.finish();
    }
    s.finish();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

json config_to_json(const RunConfig& c) {
  json links = json::array();
  for (const auto& l : c.arm.links) {
    links.push_back({{"mass", l.mass}, {"length", l.length}, {"com", l.com}, {"inertia", l.inertia}});
  }
  json joints = json::array();
  for (const auto& jp : c.arm.joints) {
    joints.push_back({{"pulley_radius", jp.pulley_radius},
                      {"force_gain", jp.force_gain},
                      {"force_offset", jp.force_offset},
                      {"friction", jp.friction}});
  }
  json tasks = json::array();
  for (const auto& t : c.tasks) {
    tasks.push_back({{"id", t.id},
                     {"distance", t.task.distance},
                     {"hoop_height", t.task.hoop_height},
                     {"radius", t.task.radius},
                     {"release_theta", vec2(t.task.release_theta)},
                     {"t_rel", t.task.t_rel},
                     {"ball_mass", t.task.ball_mass}});
  }
  const SynthProfile& p = c.intent.profile;
  json profile = {{"rate_hz", p.rate_hz},
                  {"duration", p.duration},
                  {"move_time", p.move_time},
                  {"move_jitter", p.move_jitter},
                  {"burst_lead", p.burst_lead},
                  {"burst_lead_jitter", p.burst_lead_jitter},
                  {"burst_rise", p.burst_rise},
                  {"burst_base", p.burst_base},
                  {"burst_slope", p.burst_slope},
                  {"burst_variability", p.burst_variability},
                  {"gain", std::vector<double>(p.gain.begin(), p.gain.end())},
                  {"emg_noise", p.emg_noise},
                  {"shoulder_accel", p.shoulder_accel},
                  {"elbow_ratio", p.elbow_ratio},
                  {"accel_jitter", p.accel_jitter},
                  {"velocity_noise", p.velocity_noise},
                  {"angle_noise", p.angle_noise},
                  {"rest_theta1", p.rest_theta1},
                  {"rest_theta2", p.rest_theta2}};
  return {
      {"schema_version", kConfigSchemaVersion},
      {"seed", c.seed},
      {"output_dir", c.output_dir.string()},
      {"arm",
       {{"gravity", c.arm.gravity},
        {"dt", c.arm.dt},
        {"tc_rise", c.arm.tc_rise},
        {"tc_fall", c.arm.tc_fall},
        {"links", links},
        {"joints", joints}}},
      {"start_theta", vec2(c.start_theta)},
      {"cost", {{"c_a", c.cost.c_a}, {"c_v", c.cost.c_v}, {"c_p", c.cost.c_p}, {"c_pd", c.cost.c_pd}}},
      {"solver",
       {{"tol_cost", c.solver.tol_cost},
        {"max_iter", c.solver.max_iter},
        {"reg_init", c.solver.reg_init},
        {"reg_max", c.solver.reg_max},
        {"reg_increase", c.solver.reg_increase},
        {"reg_decrease", c.solver.reg_decrease},
        {"max_line_search", c.solver.max_line_search}}},
      {"tasks", tasks},
      {"blend",
       {{"components", c.blend.components},
        {"weights", c.blend.weights},
        {"value_scale", c.blend.value_scale},
        {"target", c.blend.target}}},
      {"intent",
       {{"components", c.intent.components},
        {"window_ms", c.intent.window.window_ms},
        {"emg_lead_ms", c.intent.window.emg_lead_ms},
        {"onset_threshold", c.intent.onset_threshold},
        {"sigmoid_a", c.intent.sigmoid.a},
        {"sigmoid_b", c.intent.sigmoid.b},
        {"train_distances", c.intent.train_distances},
        {"trials_per_distance", c.intent.trials_per_distance},
        {"test_distance", c.intent.test_distance},
        {"test_trials", c.intent.test_trials},
        {"profile", profile}}},
      {"evaluate", {{"trials", c.evaluate.trials}, {"perturbation", c.evaluate.perturbation}}},
  };
}

}  // namespace exoassist
