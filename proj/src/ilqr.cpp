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

#include "exoassist/ilqr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "exoassist/errors.hpp"

namespace exoassist {

namespace {

void check_index(int k, int last, const char* what) {
  if (k < 0 || k > last) {
    throw IndexOutOfHorizon(std::string(what) + ": index " + std::to_string(k) +
                            " outside [0, " + std::to_string(last) + "]");
  }
}

}  // namespace

Eigen::VectorXd AffinePolicy::control(const Eigen::VectorXd& x, int k) const {
  check_index(k, horizon() - 1, "policy control");
  return nominal_controls[k] + feedforward[k] + feedback[k] * (x - nominal_states[k]);
}

double AffinePolicy::value(const Eigen::VectorXd& x, int k) const {
  check_index(k, horizon(), "policy value");
  const Eigen::VectorXd dx = x - nominal_states[k];
  return value_offset[k] + value_gradient[k].dot(dx) + 0.5 * dx.dot(value_hessian[k] * dx);
}

double value_at(const AffinePolicy& policy, const PlantState& x, int k) {
  return policy.value(x.vec(), k);
}

Trajectory nominal_trajectory(const AffinePolicy& policy) {
  Trajectory traj;
  traj.dt = policy.dt();
  for (const auto& x : policy.nominal_states) traj.states.push_back(PlantState::from_vec(x));
  for (const auto& u : policy.nominal_controls) traj.controls.push_back(ControlInput::from_vec(u));
  return traj;
}

void SolverOptions::validate() const {
  if (!(tol_cost > 0.0)) throw ConfigError("solver tol_cost must be > 0");
  if (max_iter < 1) throw ConfigError("solver max_iter must be >= 1");
  if (!(reg_init >= 0.0) || !(reg_max > 0.0)) throw ConfigError("solver regularization must be >= 0");
  if (!(reg_increase > 1.0) || !(reg_decrease > 1.0)) {
    throw ConfigError("solver regularization factors must be > 1");
  }
  if (max_line_search < 1) throw ConfigError("solver max_line_search must be >= 1");
}

std::string to_string(Convergence c) {
  switch (c) {
    case Convergence::kCostTolerance:
      return "cost-tolerance";
    case Convergence::kExpectedImprovement:
      return "expected-improvement";
    case Convergence::kMaxIterations:
      return "max-iterations";
    case Convergence::kNoProgress:
      return "no-progress";
  }
  return "unknown";
}

Linearization linearize_nominal(const AffinePolicy& policy, const Dynamics& dynamics) {
  const int N = policy.horizon();
  Linearization lin;
  lin.A.resize(N);
  lin.B.resize(N);
  for (int k = 0; k < N; ++k) {
    dynamics.linearize(policy.nominal_states[k], policy.nominal_controls[k], lin.A[k], lin.B[k]);
  }
  lin.lower = dynamics.control_lower();
  lin.upper = dynamics.control_upper();
  return lin;
}

namespace {

// Second-order expansion of one stage about the nominal.
struct StageExpansion {
  Eigen::VectorXd lx, lu;
  Eigen::MatrixXd lxx, luu, lux;
  double cost = 0.0;
};

struct Sweep {
  std::vector<Eigen::VectorXd> l;
  std::vector<Eigen::MatrixXd> L;
  std::vector<double> s0;
  std::vector<Eigen::VectorXd> s;
  std::vector<Eigen::MatrixXd> S;
  double expected = 0.0;
};

// Newton step on the regularized control Hessian. Controls sitting on a
// bound that the step would push further out are held fixed and the step is
// recomputed on the remaining free controls.
void control_gains(const Eigen::MatrixXd& H, const Eigen::VectorXd& Qu, const Eigen::MatrixXd& Qux,
                   const Eigen::VectorXd& u, const Eigen::VectorXd& lower,
                   const Eigen::VectorXd& upper, int k, Eigen::VectorXd& l, Eigen::MatrixXd& L) {
  Eigen::LLT<Eigen::MatrixXd> llt(H);
  if (llt.info() != Eigen::Success || !H.allFinite()) {
    throw NonPositiveDefinite("control Hessian not positive definite at step " +
                              std::to_string(k));
  }
  l = -llt.solve(Qu);
  L = -llt.solve(Qux);
  if (lower.size() == 0) return;

  std::vector<Eigen::Index> free;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const bool pinned = (u(i) <= lower(i) && l(i) < 0.0) || (u(i) >= upper(i) && l(i) > 0.0);
    if (!pinned) free.push_back(i);
  }
  if (static_cast<Eigen::Index>(free.size()) == u.size()) return;

  l.setZero();
  L.setZero();
  if (free.empty()) return;
  const Eigen::MatrixXd Hff = H(free, free);
  const Eigen::LLT<Eigen::MatrixXd> sub(Hff);
  const Eigen::VectorXd lf = -sub.solve(Qu(free));
  const Eigen::MatrixXd Lf = -sub.solve(Qux(free, Eigen::all));
  for (std::size_t j = 0; j < free.size(); ++j) {
    l(free[j]) = lf(j);
    L.row(free[j]) = Lf.row(j);
  }
}

// Riccati-like recursion. The value update uses the unregularized Hessian so
// that s0, s, S describe the cost of the policy actually produced.
Sweep riccati_sweep(const std::vector<Eigen::MatrixXd>& A, const std::vector<Eigen::MatrixXd>& B,
                    const std::vector<StageExpansion>& stages, Eigen::VectorXd Vx,
                    Eigen::MatrixXd Vxx, double v0, const std::vector<Eigen::VectorXd>& us,
                    const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, double reg) {
  const int N = static_cast<int>(stages.size());
  Sweep out;
  out.l.resize(N);
  out.L.resize(N);
  out.s0.resize(N + 1);
  out.s.resize(N + 1);
  out.S.resize(N + 1);
  out.s0[N] = v0;
  out.s[N] = Vx;
  out.S[N] = Vxx;

  for (int k = N - 1; k >= 0; --k) {
    const StageExpansion& e = stages[k];
    const Eigen::VectorXd Qx = e.lx + A[k].transpose() * Vx;
    const Eigen::VectorXd Qu = e.lu + B[k].transpose() * Vx;
    const Eigen::MatrixXd VxxB = Vxx * B[k];
    const Eigen::MatrixXd Qxx = e.lxx + A[k].transpose() * Vxx * A[k];
    const Eigen::MatrixXd Quu = e.luu + B[k].transpose() * VxxB;
    const Eigen::MatrixXd Qux = e.lux + VxxB.transpose() * A[k];

    Eigen::MatrixXd H = Quu;
    H.diagonal().array() += reg;
    Eigen::VectorXd l;
    Eigen::MatrixXd L;
    control_gains(H, Qu, Qux, us[k], lower, upper, k, l, L);

    const double dv = l.dot(Qu) + 0.5 * l.dot(Quu * l);
    out.expected -= dv;
    v0 += e.cost + dv;

    Vx = Qx + L.transpose() * (Quu * l) + L.transpose() * Qu + Qux.transpose() * l;
    Vxx = Qxx + L.transpose() * Quu * L + L.transpose() * Qux + Qux.transpose() * L;
    Vxx = 0.5 * (Vxx + Vxx.transpose()).eval();

    out.l[k] = std::move(l);
    out.L[k] = std::move(L);
    out.s0[k] = v0;
    out.s[k] = Vx;
    out.S[k] = Vxx;
  }
  return out;
}

void check_nominal(const AffinePolicy& policy, const Linearization& lin) {
  const int N = policy.horizon();
  if (static_cast<int>(lin.A.size()) != N || static_cast<int>(lin.B.size()) != N ||
      static_cast<int>(policy.nominal_states.size()) != N + 1 || policy.cost.horizon != N) {
    throw HorizonMismatch("backward_pass: linearization does not match the nominal horizon");
  }
}

// Exact treatment of the rate penalty: the state is augmented with the
// previous control, z = [x; u(k-1)], so consecutive controls are coupled in
// the expansion. Used for the solver iterations only.
struct AugmentedGains {
  std::vector<Eigen::VectorXd> l;
  std::vector<Eigen::MatrixXd> L;  // m x (n + m)
  double expected = 0.0;
};

AugmentedGains augmented_backward_pass(const AffinePolicy& policy, const Linearization& lin,
                                       double reg) {
  check_nominal(policy, lin);
  const QuadraticCost& c = policy.cost;
  const int N = policy.horizon();
  const int n = c.state_dim();
  const int m = c.control_dim();
  const auto& xs = policy.nominal_states;
  const auto& us = policy.nominal_controls;
  const Eigen::MatrixXd Rd2 = 2.0 * c.rate_weight / (c.dt * c.dt);

  std::vector<Eigen::MatrixXd> A(N), B(N);
  std::vector<StageExpansion> stages(N);
  for (int k = 0; k < N; ++k) {
    A[k] = Eigen::MatrixXd::Zero(n + m, n + m);
    A[k].topLeftCorner(n, n) = lin.A[k];
    B[k] = Eigen::MatrixXd::Zero(n + m, m);
    B[k].topRows(n) = lin.B[k];
    B[k].bottomRows(m).setIdentity();

    StageExpansion& e = stages[k];
    e.lx = Eigen::VectorXd::Zero(n + m);
    e.lx.head(n) = 2.0 * c.state_weight * (xs[k] - c.target);
    e.lxx = Eigen::MatrixXd::Zero(n + m, n + m);
    e.lxx.topLeftCorner(n, n) = 2.0 * c.state_weight;
    e.lu = 2.0 * c.control_weight * us[k];
    e.luu = 2.0 * c.control_weight;
    e.lux = Eigen::MatrixXd::Zero(m, n + m);
    if (k > 0) {
      const Eigen::VectorXd d = Rd2 * (us[k] - us[k - 1]);
      e.lu += d;
      e.luu += Rd2;
      e.lx.tail(m) = -d;
      e.lxx.bottomRightCorner(m, m) = Rd2;
      e.lux.rightCols(m) = -Rd2;
    }
    e.cost = c.running(k, xs[k], us[k], k > 0 ? us[k - 1] : us[k]);
  }

  Eigen::VectorXd Vx = Eigen::VectorXd::Zero(n + m);
  Vx.head(n) = 2.0 * c.terminal_weight * (xs[N] - c.target);
  Eigen::MatrixXd Vxx = Eigen::MatrixXd::Zero(n + m, n + m);
  Vxx.topLeftCorner(n, n) = 2.0 * c.terminal_weight;

  Sweep sw = riccati_sweep(A, B, stages, Vx, Vxx, c.terminal(xs[N]), us, lin.lower, lin.upper,
                           reg);
  return {std::move(sw.l), std::move(sw.L), sw.expected};
}

Rollout augmented_forward_pass(const AffinePolicy& policy, const AugmentedGains& gains,
                               const Dynamics& dynamics, double step) {
  const int N = policy.horizon();
  const int n = policy.state_dim();
  const int m = policy.control_dim();
  Rollout r;
  r.states.reserve(N + 1);
  r.controls.reserve(N);
  r.states.push_back(policy.nominal_states.front());
  Eigen::VectorXd du_prev = Eigen::VectorXd::Zero(m);
  for (int k = 0; k < N; ++k) {
    const Eigen::VectorXd& x = r.states.back();
    const Eigen::VectorXd u = policy.nominal_controls[k] + step * gains.l[k] +
                              gains.L[k].leftCols(n) * (x - policy.nominal_states[k]) +
                              gains.L[k].rightCols(m) * du_prev;
    r.controls.push_back(dynamics.clamp_control(u));
    du_prev = r.controls.back() - policy.nominal_controls[k];
    r.states.push_back(dynamics.step(x, r.controls.back()));
    if (!r.states.back().allFinite()) {
      throw NonFiniteState("forward pass diverged at step " + std::to_string(k),
                           static_cast<int>(k));
    }
  }
  r.cost = policy.cost.total(r.states, r.controls);
  return r;
}

}  // namespace

double backward_pass(AffinePolicy& policy, const Linearization& lin, double reg) {
  check_nominal(policy, lin);
  const QuadraticCost& c = policy.cost;
  const int N = policy.horizon();
  const int n = c.state_dim();
  const int m = c.control_dim();
  const auto& xs = policy.nominal_states;
  const auto& us = policy.nominal_controls;
  const Eigen::MatrixXd Rd2 = 2.0 * c.rate_weight / (c.dt * c.dt);

  std::vector<StageExpansion> stages(N);
  for (int k = 0; k < N; ++k) {
    StageExpansion& e = stages[k];
    // The rate penalty couples u(k) to its neighbours; they are held at the
    // nominal so both difference terms contribute to this stage.
    e.lu = 2.0 * c.control_weight * us[k];
    e.luu = 2.0 * c.control_weight;
    if (k > 0) {
      e.lu += Rd2 * (us[k] - us[k - 1]);
      e.luu += Rd2;
    }
    if (k < N - 1) {
      e.lu -= Rd2 * (us[k + 1] - us[k]);
      e.luu += Rd2;
    }
    e.lx = 2.0 * c.state_weight * (xs[k] - c.target);
    e.lxx = 2.0 * c.state_weight;
    e.lux = Eigen::MatrixXd::Zero(m, n);
    e.cost = c.running(k, xs[k], us[k], k > 0 ? us[k - 1] : us[k]);
  }

  Sweep sw = riccati_sweep(lin.A, lin.B, stages, 2.0 * c.terminal_weight * (xs[N] - c.target),
                           2.0 * c.terminal_weight, c.terminal(xs[N]), us, lin.lower, lin.upper,
                           reg);
  policy.feedforward = std::move(sw.l);
  policy.feedback = std::move(sw.L);
  policy.value_offset = std::move(sw.s0);
  policy.value_gradient = std::move(sw.s);
  policy.value_hessian = std::move(sw.S);
  return sw.expected;
}

double backward_pass(AffinePolicy& policy, const Dynamics& dynamics, double reg) {
  return backward_pass(policy, linearize_nominal(policy, dynamics), reg);
}

Rollout simulate(const Eigen::VectorXd& x0, const std::vector<Eigen::VectorXd>& controls,
                 const Dynamics& dynamics, const QuadraticCost& cost) {
  Rollout r;
  r.states.reserve(controls.size() + 1);
  r.states.push_back(x0);
  for (std::size_t k = 0; k < controls.size(); ++k) {
    r.controls.push_back(dynamics.clamp_control(controls[k]));
    r.states.push_back(dynamics.step(r.states.back(), r.controls.back()));
    if (!r.states.back().allFinite()) {
      throw NonFiniteState("rollout diverged at step " + std::to_string(k), static_cast<int>(k));
    }
  }
  r.cost = cost.total(r.states, r.controls);
  return r;
}

Rollout forward_pass(const AffinePolicy& policy, const Dynamics& dynamics, double step) {
  const int N = policy.horizon();
  Rollout r;
  r.states.reserve(N + 1);
  r.controls.reserve(N);
  r.states.push_back(policy.nominal_states.front());
  for (int k = 0; k < N; ++k) {
    const Eigen::VectorXd& x = r.states.back();
    Eigen::VectorXd u = policy.nominal_controls[k] + step * policy.feedforward[k] +
                        policy.feedback[k] * (x - policy.nominal_states[k]);
    r.controls.push_back(dynamics.clamp_control(u));
    r.states.push_back(dynamics.step(x, r.controls.back()));
    if (!r.states.back().allFinite()) {
      throw NonFiniteState("forward pass diverged at step " + std::to_string(k),
                           static_cast<int>(k));
    }
  }
  r.cost = policy.cost.total(r.states, r.controls);
  return r;
}

SolveResult solve(const Eigen::VectorXd& x0, const std::vector<Eigen::VectorXd>& init_controls,
                  const Dynamics& dynamics, const QuadraticCost& cost,
                  const SolverOptions& options) {
  options.validate();
  if (static_cast<int>(init_controls.size()) != cost.horizon) {
    throw HorizonMismatch("solve: " + std::to_string(init_controls.size()) +
                          " initial controls for horizon " + std::to_string(cost.horizon));
  }

  SolveResult result;
  AffinePolicy& policy = result.policy;
  SolveReport& report = result.report;
  policy.cost = cost;

  Rollout nominal = simulate(x0, init_controls, dynamics, cost);
  policy.nominal_states = nominal.states;
  policy.nominal_controls = nominal.controls;
  double current = nominal.cost;
  report.cost_trace.push_back(current);

  auto escalate = [&](double reg) {
    return std::max(reg * options.reg_increase, options.reg_floor);
  };

  double reg = options.reg_init;
  bool done = false;
  for (int iter = 0; iter < options.max_iter && !done; ++iter) {
    report.iterations = iter + 1;
    const Linearization lin = linearize_nominal(policy, dynamics);

    bool accepted = false;
    while (!accepted) {
      if (reg > options.reg_max) {
        report.reason = Convergence::kNoProgress;
        done = true;
        break;
      }
      AugmentedGains gains;
      try {
        gains = augmented_backward_pass(policy, lin, reg);
      } catch (const NonPositiveDefinite&) {
        reg = escalate(reg);
        continue;
      }
      if (gains.expected < options.tol_cost) {
        report.reason = Convergence::kExpectedImprovement;
        done = true;
        break;
      }

      double step = 1.0;
      Rollout best;
      bool improved = false;
      double full_step_change = std::numeric_limits<double>::infinity();
      for (int ls = 0; ls < options.max_line_search; ++ls, step *= 0.5) {
        Rollout candidate;
        try {
          candidate = augmented_forward_pass(policy, gains, dynamics, step);
        } catch (const NonFiniteState&) {
          continue;
        }
        if (ls == 0) full_step_change = std::abs(candidate.cost - current);
        if (candidate.cost < current) {
          best = std::move(candidate);
          improved = true;
          break;
        }
      }

      if (improved) {
        const double decrease = current - best.cost;
        current = best.cost;
        policy.nominal_states = std::move(best.states);
        policy.nominal_controls = std::move(best.controls);
        report.cost_trace.push_back(current);
        report.step_trace.push_back(step);
        report.reg_trace.push_back(reg);
        reg /= options.reg_decrease;
        accepted = true;
        if (decrease < options.tol_cost) {
          report.reason = Convergence::kCostTolerance;
          done = true;
        }
      } else if (full_step_change < options.tol_cost) {
        // The model step no longer moves the trajectory measurably.
        report.reason = Convergence::kCostTolerance;
        done = true;
        break;
      } else {
        reg = escalate(reg);
      }
    }
  }

  // Gains and value model about the final nominal; unregularized when the
  // control Hessian allows it.
  double final_reg = 0.0;
  const Linearization lin = linearize_nominal(policy, dynamics);
  while (true) {
    try {
      backward_pass(policy, lin, final_reg);
      break;
    } catch (const NonPositiveDefinite&) {
      final_reg = escalate(final_reg);
      if (final_reg > options.reg_max) throw;
    }
  }

  policy.total_cost = current;
  policy.converged = report.reason == Convergence::kCostTolerance ||
                     report.reason == Convergence::kExpectedImprovement;
  return result;
}

SolveResult solve(const PlantState& x0, const std::vector<ControlInput>& init_controls,
                  const ArmModel& model, const CostSpec& spec, const SolverOptions& options) {
  spec.validate();
  if (std::abs(spec.dt - model.dt) > 1e-12) {
    throw ConfigError("cost dt does not match the arm model dt");
  }
  const ArmDynamics dynamics(model);
  std::vector<Eigen::VectorXd> us;
  us.reserve(init_controls.size());
  for (const auto& u : init_controls) us.emplace_back(u.vec());
  return solve(x0.vec(), us, dynamics, QuadraticCost::from_spec(spec), options);
}

}  // namespace exoassist
