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

#include "exoassist/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "exoassist/blend.hpp"
#include "exoassist/config.hpp"
#include "exoassist/errors.hpp"
#include "exoassist/ilqr.hpp"
#include "exoassist/io.hpp"
#include "exoassist/pls.hpp"
#include "exoassist/policy_io.hpp"
#include "exoassist/synth.hpp"
#include "exoassist/task.hpp"

namespace exoassist {

namespace fs = std::filesystem;

namespace {

// Seed slots keep the random streams of the pipeline stages apart.
constexpr int kTestSlot = 1000;
constexpr int kAssistSlot = 2000;
constexpr int kScoreSlot = 3000;
constexpr int kSynthSlot = 4000;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> task;
  std::optional<double> tol_cost;
  std::optional<int> max_iter;
  std::optional<double> reg_init;
  std::optional<std::string> weights;
  std::optional<double> value_scale;
  std::optional<int> components;
  std::optional<double> window_ms;
  std::optional<double> emg_lead_ms;
  std::optional<double> sigmoid_a;
  std::optional<double> sigmoid_b;
  std::optional<double> onset_threshold;
  std::optional<int> trials;
  std::optional<double> distance;
  std::optional<std::string> stream;
};

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--weights: bad number '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("--weights: expected w1,w2,...");
  return out;
}

// Config file (or defaults) with command-line overrides, validated before
// any output is written.
RunConfig resolve_config(const Options& o) {
  RunConfig c = o.config.empty() ? RunConfig::defaults() : load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.output_dir = *o.out;
  if (o.tol_cost) c.solver.tol_cost = *o.tol_cost;
  if (o.max_iter) c.solver.max_iter = *o.max_iter;
  if (o.reg_init) c.solver.reg_init = *o.reg_init;
  if (o.weights) c.blend.weights = parse_weights(*o.weights);
  if (o.value_scale) c.blend.value_scale = *o.value_scale;
  if (o.components) c.intent.components = *o.components;
  if (o.window_ms) c.intent.window.window_ms = *o.window_ms;
  if (o.emg_lead_ms) c.intent.window.emg_lead_ms = *o.emg_lead_ms;
  if (o.sigmoid_a) c.intent.sigmoid.a = *o.sigmoid_a;
  if (o.sigmoid_b) c.intent.sigmoid.b = *o.sigmoid_b;
  if (o.onset_threshold) c.intent.onset_threshold = *o.onset_threshold;
  c.validate();
  if (o.task) c.task(*o.task);
  if (o.trials && *o.trials < 1) throw ConfigError("--trials must be >= 1");
  if (o.distance && !(std::isfinite(*o.distance) && *o.distance > 0.0)) {
    throw ConfigError("--distance must be > 0");
  }
  return c;
}

fs::path policy_path(const RunConfig& c, const std::string& id) {
  return c.output_dir / "policies" / (id + ".json");
}

AffinePolicy load_existing_policy(const RunConfig& c, const std::string& id) {
  const fs::path path = policy_path(c, id);
  if (!fs::exists(path)) {
    throw IoError("missing policy " + path.string() + " (run 'solve' first)");
  }
  return load_policy(path);
}

std::string metrics_csv(const std::vector<std::pair<std::string, double>>& rows) {
  std::string out = "metric,value\n";
  for (const auto& [name, value] : rows) out += name + "," + format_number(value) + "\n";
  return out;
}

std::vector<std::pair<std::string, double>> parse_metrics(const std::string& text) {
  std::vector<std::pair<std::string, double>> rows;
  std::stringstream ss(text);
  std::string line;
  std::getline(ss, line);
  if (line != "metric,value") throw IoError("metrics csv: unexpected header");
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("metrics csv: malformed line");
    try {
      rows.emplace_back(line.substr(0, comma), std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw IoError("metrics csv: bad value in '" + line + "'");
    }
  }
  return rows;
}

ThrowTask shifted_task(const ThrowTask& base, double distance) {
  ThrowTask t = base;
  t.distance = distance;
  return t;
}

struct Dataset {
  Eigen::MatrixXd features;
  Eigen::VectorXd labels;
};

Dataset generate_dataset(const RunConfig& c, const std::vector<double>& distances, int trials,
                         int first_slot) {
  Dataset d;
  const int n = static_cast<int>(distances.size()) * trials;
  d.features.resize(n, kFeatureDim);
  d.labels.resize(n);
  int row = 0;
  for (std::size_t s = 0; s < distances.size(); ++s) {
    for (int i = 0; i < trials; ++i, ++row) {
      const SynthTrial trial = synth_trial(
          distances[s], trial_seed(c.seed, first_slot + static_cast<int>(s), i), c.intent.profile);
      const int onset = detect_onset(trial.stream, c.intent.onset_threshold);
      d.features.row(row) = extract_features(trial.stream, onset, c.intent.window).transpose();
      d.labels(row) = trial.label;
    }
  }
  return d;
}

std::string dataset_csv(const Dataset& d, const std::vector<std::vector<double>>& extra,
                        const std::vector<std::string>& extra_names) {
  CsvTable t;
  t.header = {"e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8",
              "theta1", "theta2", "omega1", "omega2", "label"};
  t.header.insert(t.header.end(), extra_names.begin(), extra_names.end());
  for (Eigen::Index r = 0; r < d.features.rows(); ++r) {
    std::vector<double> row(kFeatureDim);
    for (int c = 0; c < kFeatureDim; ++c) row[c] = d.features(r, c);
    row.push_back(d.labels(r));
    for (const auto& col : extra) row.push_back(col[r]);
    t.rows.push_back(std::move(row));
  }
  return t.to_string();
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

std::string slug(double distance) {
  std::string s = format_number(distance);
  for (char& ch : s) {
    if (ch == '.') ch = 'p';
  }
  return s + "m";
}

// ---- solve ---------------------------------------------------------------

int cmd_solve(const RunConfig& c, const Options& o, std::ostream& out) {
  std::vector<const NamedTask*> todo;
  if (o.task) {
    todo.push_back(&c.task(*o.task));
  } else {
    for (const auto& t : c.tasks) todo.push_back(&t);
  }
  const PlantState x0 = c.start_state();
  const ControlInput hold = gravity_hold_pressure(c.start_theta, c.arm);
  bool all_converged = true;
  for (const NamedTask* t : todo) {
    const CostSpec spec = cost_spec_for(t->task, c.arm, c.cost);
    const SolveResult r =
        solve(x0, std::vector<ControlInput>(spec.horizon, hold), c.arm, spec, c.solver);

    CsvTable trace;
    trace.header = {"iteration", "cost", "step", "reg"};
    for (std::size_t i = 0; i < r.report.cost_trace.size(); ++i) {
      trace.rows.push_back({static_cast<double>(i), r.report.cost_trace[i],
                            i ? r.report.step_trace[i - 1] : 0.0,
                            i ? r.report.reg_trace[i - 1] : 0.0});
    }
    save_policy(policy_path(c, t->id), r.policy);
    write_file_atomic(c.output_dir / "policies" / (t->id + "_convergence.csv"), trace.to_string());
    write_file_atomic(c.output_dir / "policies" / (t->id + "_nominal.csv"),
                      trajectory_csv(nominal_trajectory(r.policy)));

    out << "solve " << t->id << ": " << to_string(r.report.reason) << " after "
        << r.report.iterations << " iterations, cost " << format_number(r.policy.total_cost)
        << "\n";
    all_converged = all_converged && r.policy.converged;
  }
  return all_converged ? kExitOk : kExitDomain;
}

// ---- train-intent --------------------------------------------------------

int cmd_train_intent(const RunConfig& c, const Options& o, std::ostream& out) {
  const int trials = o.trials.value_or(c.intent.trials_per_distance);
  const Dataset train = generate_dataset(c, c.intent.train_distances, trials, 0);
  const PlsModel model = pls_fit(train.features, train.labels, c.intent.components);
  const Dataset test =
      generate_dataset(c, {c.intent.test_distance}, c.intent.test_trials, kTestSlot);

  std::vector<double> test_pred, test_score, train_score;
  for (Eigen::Index r = 0; r < test.features.rows(); ++r) {
    test_pred.push_back(predict_goal(model, test.features.row(r).transpose()));
    test_score.push_back(pls_project(model, test.features.row(r).transpose())(0));
  }
  for (Eigen::Index r = 0; r < train.features.rows(); ++r) {
    train_score.push_back(model.training_scores(r, 0));
  }
  double abs_err = 0.0;
  for (double y : test_pred) abs_err += std::abs(y - c.intent.test_distance);
  abs_err /= static_cast<double>(test_pred.size());

  std::vector<std::pair<std::string, double>> metrics{
      {"train_samples", static_cast<double>(train.labels.size())},
      {"components", static_cast<double>(model.components())},
      {"train_r2", model.training_r2},
      {"train_rmse", model.training_rmse},
  };
  for (double d : c.intent.train_distances) {
    std::vector<double> s;
    for (Eigen::Index r = 0; r < train.labels.size(); ++r) {
      if (train.labels(r) == d) s.push_back(train_score[r]);
    }
    metrics.emplace_back("mean_score_" + slug(d), mean_of(s));
  }
  metrics.emplace_back("test_distance", c.intent.test_distance);
  metrics.emplace_back("test_samples", static_cast<double>(test_pred.size()));
  metrics.emplace_back("test_mean_score", mean_of(test_score));
  metrics.emplace_back("test_mean_prediction", mean_of(test_pred));
  metrics.emplace_back("test_mean_abs_error", abs_err);

  const fs::path dir = c.output_dir / "intent";
  save_pls(dir / "model.json", model);
  write_file_atomic(dir / "train.csv", dataset_csv(train, {train_score}, {"score"}));
  write_file_atomic(dir / "test.csv",
                    dataset_csv(test, {test_score, test_pred}, {"score", "prediction"}));
  write_file_atomic(dir / "metrics.csv", metrics_csv(metrics));

  out << "train-intent: " << train.labels.size() << " trials, R^2 "
      << format_number(model.training_r2) << ", held-out " << slug(c.intent.test_distance)
      << " mean prediction " << format_number(mean_of(test_pred)) << "\n";
  return kExitOk;
}

// ---- assist --------------------------------------------------------------

int cmd_assist(const RunConfig& c, const Options& o, std::ostream& out) {
  std::vector<std::pair<std::string, double>> summary;
  std::vector<double> weights = c.blend.weights;
  const double distance = o.distance.value_or(c.task(c.blend.target).task.distance);

  if (!o.weights) {
    if (c.blend.components.size() != 2) {
      throw ConfigError("intent weights need exactly two blend components; pass --weights");
    }
    const PlsModel model = load_pls(c.output_dir / "intent" / "model.json");
    SensorStream stream;
    if (o.stream) {
      stream = parse_stream_csv(read_text_file(*o.stream));
    } else {
      stream = synth_trial(distance, trial_seed(c.seed, kAssistSlot, 0), c.intent.profile).stream;
    }
    const int onset = detect_onset(stream, c.intent.onset_threshold);
    const FeatureVector psi = extract_features(stream, onset, c.intent.window);
    const double y_hat = predict_goal(model, psi);
    const auto [w1, w2] = weights_from_goal(c.intent.sigmoid, y_hat);
    weights = {w1, w2};
    summary.emplace_back("onset_index", onset);
    summary.emplace_back("onset_time", onset / stream.rate_hz);
    summary.emplace_back("goal_estimate", y_hat);
  }

  std::vector<AffinePolicy> policies;
  for (const auto& id : c.blend.components) policies.push_back(load_existing_policy(c, id));
  const BlendSet set(std::move(policies), weights, c.blend.value_scale);
  const BlendedRollout roll = blended_rollout(set, c.start_state(), c.arm);
  const ThrowTask task = shifted_task(c.task(c.blend.target).task, distance);
  const ShotResult shot = shot_from_state(roll.trajectory.states.back(), task, c.arm);

  for (std::size_t i = 0; i < weights.size(); ++i) {
    summary.emplace_back("w" + std::to_string(i + 1), weights[i]);
  }
  summary.emplace_back("hoop_distance", distance);
  summary.emplace_back("landing_distance", shot.landing_distance);
  summary.emplace_back("margin", shot.margin);
  summary.emplace_back("hit", shot.hit ? 1.0 : 0.0);
  summary.emplace_back("release_speed", shot.release_velocity.norm());

  const fs::path dir = c.output_dir / "assist";
  write_file_atomic(dir / "trajectory.csv", trajectory_csv(roll.trajectory));
  write_file_atomic(dir / "coefficients.csv", coefficients_csv(roll.coefficients));
  write_file_atomic(dir / "summary.csv", metrics_csv(summary));

  out << "assist: weights";
  for (double w : weights) out << " " << format_number(w);
  out << ", landing " << format_number(shot.landing_distance) << " m ("
      << (shot.hit ? "hit" : "miss") << ")\n";
  return kExitOk;
}

// ---- evaluate ------------------------------------------------------------

struct JointErrors {
  Vector2 angle;
  Vector2 velocity;
};

JointErrors terminal_errors(const PlantState& x, const CostSpec& spec) {
  return {x.theta() - spec.theta_target, x.omega() - spec.omega_target};
}

Controller policy_controller(const AffinePolicy& p) {
  return [&p](const PlantState& x, int k) {
    return ControlInput::from_vec(p.control(x.vec(), k).cwiseMax(0.0).cwiseMin(kMaxPressure));
  };
}

int cmd_evaluate(const RunConfig& c, const Options& o, std::ostream& out) {
  const int trials = o.trials.value_or(c.evaluate.trials);
  const PlantState x0 = c.start_state();

  std::vector<AffinePolicy> dedicated;
  for (const auto& t : c.tasks) dedicated.push_back(load_existing_policy(c, t.id));
  const fs::path metrics_path = c.output_dir / "intent" / "metrics.csv";
  if (!fs::exists(metrics_path)) {
    throw IoError("missing " + metrics_path.string() + " (run 'train-intent' first)");
  }
  const auto intent_metrics = parse_metrics(read_text_file(metrics_path));

  std::ostringstream md;
  std::vector<std::pair<std::string, double>> summary;
  const char* joints[] = {"shoulder", "elbow"};

  md << "# Evaluation report\n\n";
  md << "Seed " << c.seed << ". Rollouts start at rest from theta = (" << format_number(c.start_theta(0))
     << ", " << format_number(c.start_theta(1)) << ") rad.\n\n";

  // Terminal errors of the dedicated policies.
  md << "## Terminal errors\n\n";
  md << "| task | joint | angle err (rad) | velocity err (rad/s) |\n";
  md << "|---|---|---|---|\n";
  std::vector<Trajectory> closed_loop;
  for (std::size_t i = 0; i < c.tasks.size(); ++i) {
    const NamedTask& t = c.tasks[i];
    const CostSpec spec = cost_spec_for(t.task, c.arm, c.cost);
    Trajectory traj;
    traj.dt = c.arm.dt;
    traj.states.push_back(x0);
    const Controller ctl = policy_controller(dedicated[i]);
    for (int k = 0; k < spec.horizon; ++k) {
      traj.controls.push_back(ctl(traj.states.back(), k));
      traj.states.push_back(dynamics_step(traj.states.back(), traj.controls.back(), c.arm));
    }
    const JointErrors e = terminal_errors(traj.states.back(), spec);
    for (int j = 0; j < 2; ++j) {
      md << "| " << t.id << " | " << joints[j] << " | " << format_number(e.angle(j)) << " | "
         << format_number(e.velocity(j)) << " |\n";
      summary.emplace_back(t.id + "_" + joints[j] + "_angle_err", e.angle(j));
      summary.emplace_back(t.id + "_" + joints[j] + "_velocity_err", e.velocity(j));
    }
    summary.emplace_back(t.id + "_converged", dedicated[i].converged ? 1.0 : 0.0);
    closed_loop.push_back(std::move(traj));
  }

  // Blend against the dedicated policy of the target task.
  std::vector<AffinePolicy> components;
  for (const auto& id : c.blend.components) components.push_back(load_existing_policy(c, id));
  const BlendSet set(components, c.blend.weights, c.blend.value_scale);
  const BlendedRollout blend = blended_rollout(set, x0, c.arm);
  const NamedTask& target = c.task(c.blend.target);
  const CostSpec target_spec = cost_spec_for(target.task, c.arm, c.cost);
  std::size_t target_index = 0;
  while (c.tasks[target_index].id != target.id) ++target_index;
  const JointErrors eb = terminal_errors(blend.trajectory.states.back(), target_spec);
  const JointErrors ed = terminal_errors(closed_loop[target_index].states.back(), target_spec);

  md << "\n## Blended vs dedicated\n\n";
  md << "Blend of";
  for (std::size_t i = 0; i < c.blend.components.size(); ++i) {
    md << " " << c.blend.components[i] << " (w = " << format_number(c.blend.weights[i]) << ")";
  }
  md << ", value scale " << format_number(c.blend.value_scale) << ", compared with the dedicated "
     << target.id << " policy.\n\n";
  md << "| joint | quantity | blended err | dedicated err | ratio |\n";
  md << "|---|---|---|---|---|\n";
  bool within = true;
  for (int j = 0; j < 2; ++j) {
    const double pairs[2][2] = {{eb.angle(j), ed.angle(j)}, {eb.velocity(j), ed.velocity(j)}};
    const char* names[2] = {"angle (rad)", "velocity (rad/s)"};
    for (int q = 0; q < 2; ++q) {
      const double ratio = std::abs(pairs[q][0]) / std::abs(pairs[q][1]);
      within = within && std::abs(pairs[q][0]) <= 3.0 * std::abs(pairs[q][1]);
      md << "| " << joints[j] << " | " << names[q] << " | " << format_number(pairs[q][0]) << " | "
         << format_number(pairs[q][1]) << " | " << format_number(ratio) << " |\n";
      summary.emplace_back(std::string("blend_") + joints[j] + (q ? "_velocity_err" : "_angle_err"),
                           pairs[q][0]);
    }
  }
  std::vector<double> speeds;
  md << "\n| rollout | release speed (m/s) |\n|---|---|\n";
  for (const auto& id : c.blend.components) {
    std::size_t idx = 0;
    while (c.tasks[idx].id != id) ++idx;
    const PlantState& xN = closed_loop[idx].states.back();
    speeds.push_back(hand_velocity(xN.theta(), xN.omega(), c.arm).norm());
    md << "| " << id << " | " << format_number(speeds.back()) << " |\n";
    summary.emplace_back(id + "_release_speed", speeds.back());
  }
  const PlantState& xb = blend.trajectory.states.back();
  const double blend_speed = hand_velocity(xb.theta(), xb.omega(), c.arm).norm();
  md << "| blend | " << format_number(blend_speed) << " |\n";
  const double lo = *std::min_element(speeds.begin(), speeds.end());
  const double hi = *std::max_element(speeds.begin(), speeds.end());
  const bool between = blend_speed > lo && blend_speed < hi;
  md << "\nblend check: every blended error within 3x of dedicated: " << (within ? "yes" : "no")
     << "; release speed strictly between components: " << (between ? "yes" : "no") << "\n";
  summary.emplace_back("blend_release_speed", blend_speed);
  summary.emplace_back("blend_errors_within_3x", within ? 1.0 : 0.0);
  summary.emplace_back("blend_speed_between", between ? 1.0 : 0.0);

  // Simulated shots.
  md << "\n## Hit rates\n\n";
  md << "Perturbed trials add N(0, " << format_number(c.evaluate.perturbation)
     << ") to the initial angles and velocities; " << trials << " trials each.\n\n";
  md << "| controller | hoop | hit rate (no perturbation) | hit rate (perturbed) |\n";
  md << "|---|---|---|---|\n";
  const fs::path shots_dir = c.output_dir / "shots";
  auto score = [&](const std::string& name, const Controller& ctl, const ThrowTask& task,
                   int horizon, int slot) {
    const ScoreResult clean = score_policy(ctl, x0, horizon, task, c.arm, 1, 0.0, 0);
    const ScoreResult noisy =
        score_policy(ctl, x0, horizon, task, c.arm, trials, c.evaluate.perturbation,
                     trial_seed(c.seed, kScoreSlot + slot, 0));
    md << "| " << name << " | " << format_number(task.distance) << " m | "
       << format_number(clean.hit_rate) << " | " << format_number(noisy.hit_rate) << " |\n";
    summary.emplace_back(name + "_hit_rate_clean", clean.hit_rate);
    summary.emplace_back(name + "_hit_rate_perturbed", noisy.hit_rate);
    write_file_atomic(shots_dir / (name + ".csv"), shots_csv(noisy.shots));
  };
  for (std::size_t i = 0; i < c.tasks.size(); ++i) {
    const CostSpec spec = cost_spec_for(c.tasks[i].task, c.arm, c.cost);
    score(c.tasks[i].id, policy_controller(dedicated[i]), c.tasks[i].task, spec.horizon,
          static_cast<int>(i));
  }
  score("blend", [&set](const PlantState& x, int k) { return blended_control(set, x, k); },
        target.task, set.horizon(), static_cast<int>(c.tasks.size()));

  // Intent estimation.
  md << "\n## Intent estimation\n\n";
  md << "| metric | value |\n|---|---|\n";
  double test_mean = 0.0;
  for (const auto& [name, value] : intent_metrics) {
    md << "| " << name << " | " << format_number(value) << " |\n";
    summary.emplace_back("intent_" + name, value);
    if (name == "test_mean_prediction") test_mean = value;
  }
  const auto [w1, w2] = weights_from_goal(c.intent.sigmoid, test_mean);
  md << "\nSigmoid weights at the mean held-out prediction: w1 = " << format_number(w1)
     << ", w2 = " << format_number(w2) << ".\n";
  summary.emplace_back("intent_mean_w1", w1);
  summary.emplace_back("intent_mean_w2", w2);

  write_file_atomic(c.output_dir / "report.md", md.str());
  write_file_atomic(c.output_dir / "summary.csv", metrics_csv(summary));
  out << "evaluate: wrote " << (c.output_dir / "report.md").string() << "\n";
  return kExitOk;
}

// ---- synth ---------------------------------------------------------------

int cmd_synth(const RunConfig& c, const Options& o, std::ostream& out) {
  const double distance = o.distance.value_or(c.intent.test_distance);
  const int trials = o.trials.value_or(1);
  const fs::path dir = c.output_dir / "synth";
  std::string index = "trial,seed,distance,file\n";
  for (int i = 0; i < trials; ++i) {
    const std::uint64_t seed = trial_seed(c.seed, kSynthSlot, i);
    const SynthTrial trial = synth_trial(distance, seed, c.intent.profile);
    const std::string name = "stream_" + slug(distance) + "_" + std::to_string(i) + ".csv";
    write_file_atomic(dir / name, stream_csv(trial.stream));
    index += std::to_string(i) + "," + std::to_string(seed) + "," + format_number(distance) + "," +
             name + "\n";
  }
  write_file_atomic(dir / ("trials_" + slug(distance) + ".csv"), index);
  out << "synth: " << trials << " stream(s) at " << format_number(distance) << " m in "
      << dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Assistive throw control: iLQR policies, intent estimation and policy blending"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "Run configuration (JSON)");
    sub->add_option("--seed", o.seed, "Seed for every stochastic element");
    sub->add_option("--out", o.out, "Output directory");
  };
  auto intent_flags = [&o](CLI::App* sub) {
    sub->add_option("--components", o.components, "PLS component count");
    sub->add_option("--window-ms", o.window_ms, "Feature window length [ms]");
    sub->add_option("--emg-lead-ms", o.emg_lead_ms, "EMG window lead before onset [ms]");
    sub->add_option("--sigmoid-a", o.sigmoid_a, "Sigmoid gain a");
    sub->add_option("--sigmoid-b", o.sigmoid_b, "Sigmoid offset b");
    sub->add_option("--onset-threshold", o.onset_threshold, "Onset threshold [rad/s]");
  };
  auto blend_flags = [&o](CLI::App* sub) {
    sub->add_option("--weights", o.weights, "Blend weights w1,w2,...");
    sub->add_option("--value-scale", o.value_scale, "Scale applied to value functions");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve iLQR policies for the tasks");
  common(solve_cmd);
  solve_cmd->add_option("--task", o.task, "Task id (default: all tasks)");
  solve_cmd->add_option("--tol-cost", o.tol_cost, "Cost-change tolerance");
  solve_cmd->add_option("--max-iter", o.max_iter, "Iteration limit");
  solve_cmd->add_option("--reg-init", o.reg_init, "Initial regularization");

  CLI::App* train_cmd = app.add_subcommand("train-intent", "Fit the PLS intent model");
  common(train_cmd);
  intent_flags(train_cmd);
  train_cmd->add_option("--trials", o.trials, "Training trials per distance");

  CLI::App* assist_cmd = app.add_subcommand("assist", "Simulate one assisted throw");
  common(assist_cmd);
  intent_flags(assist_cmd);
  blend_flags(assist_cmd);
  assist_cmd->add_option("--distance", o.distance, "Hoop distance of the generated trial [m]");
  assist_cmd->add_option("--stream", o.stream, "Sensor stream CSV instead of a generated trial");

  CLI::App* eval_cmd = app.add_subcommand("evaluate", "Write the summary report");
  common(eval_cmd);
  blend_flags(eval_cmd);
  eval_cmd->add_option("--trials", o.trials, "Perturbed trials per controller");

  CLI::App* synth_cmd = app.add_subcommand("synth", "Write synthetic sensor streams");
  common(synth_cmd);
  intent_flags(synth_cmd);
  synth_cmd->add_option("--distance", o.distance, "Throw distance [m]");
  synth_cmd->add_option("--trials", o.trials, "Number of streams");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const RunConfig c = resolve_config(o);
    if (solve_cmd->parsed()) return cmd_solve(c, o, out);
    if (train_cmd->parsed()) return cmd_train_intent(c, o, out);
    if (assist_cmd->parsed()) return cmd_assist(c, o, out);
    if (eval_cmd->parsed()) return cmd_evaluate(c, o, out);
    if (synth_cmd->parsed()) return cmd_synth(c, o, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace exoassist
