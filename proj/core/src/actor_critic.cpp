#include "rllq/actor_critic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rllq {

Schedule Schedule::theoretical(double alpha, double beta) {
  Schedule s;
  s.mode = ScheduleMode::theoretical;
  s.alpha = alpha;
  s.beta = beta;
  return s;
}

void Schedule::validate() const {
  if (mode == ScheduleMode::theoretical) {
    if (!(alpha > 0.0) || !(beta > 0.0)) {
      throw std::invalid_argument("schedule: alpha and beta must be > 0");
    }
    return;
  }
  if (!(a_coeff > 0.0) || !(a_exp > 0.0) || !(b_coeff > 0.0) || !(b_exp >= 0.0)) {
    throw std::invalid_argument("schedule: coefficients must be positive");
  }
  if (!(projection_lo <= projection_hi)) {
    throw std::invalid_argument("schedule: projection_lo > projection_hi");
  }
}

ScheduleValues schedule_values(const Schedule& s, std::int64_t n) {
  ScheduleValues v;
  const double nd = static_cast<double>(n);
  if (s.mode == ScheduleMode::theoretical) {
    v.a = std::min(1.0, std::pow(s.alpha / (nd + s.beta), 0.75));
    v.b = std::max(1.0, std::pow((nd + s.beta) / s.alpha, 0.25));
    // 1 v (log log n)^{1/6}; log log n < 1 whenever n < e^e.
    const double loglog = nd > std::numbers::e ? std::log(std::log(nd)) : 0.0;
    v.c1 = std::max(1.0, loglog > 0.0 ? std::pow(loglog, 1.0 / 6.0) : 0.0);
  } else {
    v.a = s.a_coeff / std::pow(nd + 1.0, s.a_exp);
    v.b = s.b_coeff * std::pow(nd + 1.0, s.b_exp);
    v.c1 = std::max(std::abs(s.projection_lo), std::abs(s.projection_hi));
  }
  v.phi2 = 1.0 / v.b;
  return v;
}

std::pair<double, double> projection_interval(const Schedule& s, std::int64_t n) {
  if (s.mode == ScheduleMode::theoretical) {
    const double c = schedule_values(s, n).c1;
    return {-c, c};
  }
  return {s.projection_lo, s.projection_hi};
}

double project_interval(double y, double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("project_interval: lo > hi");
  return std::min(hi, std::max(lo, y));
}

double score_phi1(double u, double x, const PolicyParams& policy) {
  if (!(policy.phi2 > 0.0)) {
    throw std::invalid_argument("score_phi1: phi2 must be > 0");
  }
  return (u - policy.phi1 * x) * x / policy.phi2;
}

CriticParams ValueCritic::to_params(const CriticBounds& bounds) const {
  CriticParams p;
  const double level = theta1;
  const double slope = theta2;
  const double end = horizon;
  p.k1 = [level](double) { return level; };
  p.k3 = [slope, end](double t) { return slope * (end - t); };
  p.c1 = bounds.c1;
  p.c2 = bounds.c2;
  p.c3 = bounds.c3;
  p.constant_k1 = level;
  return p;
}

double td_residual(const Trajectory& traj, std::size_t k,
                   const ValueCritic& critic, double Q, double gamma,
                   double phi2) {
  const double dt = traj.dt;
  const double x = traj.states[k];
  const double value_change = critic.value(traj.times[k + 1], traj.states[k + 1]) -
                              critic.value(traj.times[k], x);
  const double entropy_bonus = gamma != 0.0 ? gamma * entropy(phi2) * dt : 0.0;
  return value_change - 0.5 * Q * x * x * dt + entropy_bonus;
}

double actor_gradient(const Trajectory& traj, const ValueCritic& critic,
                      const PolicyParams& policy, double Q, double gamma) {
  if (!(policy.phi2 > 0.0)) {
    throw std::invalid_argument("actor_gradient: phi2 must be > 0");
  }
  const double entropy_bonus = gamma != 0.0 ? gamma * entropy(policy.phi2) * traj.dt : 0.0;
  const double half_q_dt = 0.5 * Q * traj.dt;
  double sum = 0.0;
  for (std::size_t k = 0; k < traj.steps(); ++k) {
    const double x = traj.states[k];
    const double residual =
        critic.value(traj.times[k + 1], traj.states[k + 1]) -
        critic.value(traj.times[k], x) - half_q_dt * x * x + entropy_bonus;
    sum += score_phi1(traj.actions[k], x, policy) * residual;
  }
  return sum;
}

ValueCritic critic_update(const ValueCritic& critic, const Trajectory& traj,
                          double learning_rate, double Q, double gamma,
                          double phi2, const CriticBounds& bounds) {
  double step1 = 0.0;
  double step2 = 0.0;
  for (std::size_t k = 0; k < traj.steps(); ++k) {
    const double residual = td_residual(traj, k, critic, Q, gamma, phi2);
    const auto grad = critic.gradient(traj.times[k], traj.states[k]);
    step1 += grad[0] * residual;
    step2 += grad[1] * residual;
  }
  ValueCritic next = critic;
  next.theta1 = project_interval(critic.theta1 + learning_rate * step1,
                                 1.0 / bounds.c2, bounds.c2);
  next.theta2 = project_interval(critic.theta2 + learning_rate * step2,
                                 -bounds.c3, bounds.c3);
  return next;
}

LearnerState actor_update(const LearnerState& state, const Trajectory& traj,
                          const Schedule& sched, double Q) {
  const std::int64_t n = state.episode + 1;
  const ScheduleValues sv = schedule_values(sched, n);
  const double gradient = actor_gradient(
      traj, state.critic, PolicyParams{state.phi1, sv.phi2}, Q, state.gamma);
  const auto [lo, hi] = projection_interval(sched, n + 1);
  LearnerState next = state;
  next.phi1 = project_interval(state.phi1 + sv.a * gradient, lo, hi);
  next.episode = n;
  return next;
}

void RllqConfig::validate() const {
  model.validate();
  schedule.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (episodes < 0) throw std::invalid_argument("episodes must be >= 0");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
  if (!(bounds.c1 > 0.0 && bounds.c2 >= 1.0 && bounds.c3 > 0.0)) {
    throw std::invalid_argument("critic bounds must satisfy c1 > 0, c2 >= 1, c3 > 0");
  }
}

ReplicationResult run_replication(const RllqConfig& config, const SeedSpec& seed) {
  config.validate();
  const ModelParams& model = config.model;
  const double target = optimal_gain(model);
  const double oracle_value = jbar(model, PolicyParams{target, 0.0});

  RandomStream rng = derive_stream(seed);
  ReplicationResult result;
  result.records.reserve(static_cast<std::size_t>(config.episodes));

  LearnerState state;
  state.phi1 = config.phi1_init;
  state.critic = ValueCritic{config.theta1, config.theta2, model.T};
  state.critic_mode = config.critic_mode;
  state.gamma = config.gamma;

  Trajectory traj;
  for (std::int64_t n = 1; n <= config.episodes; ++n) {
    const ScheduleValues sv = schedule_values(config.schedule, n);
    const PolicyParams policy{state.phi1, sv.phi2};
    simulate_episode_rllq(model, policy, config.dt, rng, traj);

    EpisodeRecord rec;
    rec.episode = n;
    rec.phi1 = policy.phi1;
    rec.phi2 = policy.phi2;
    rec.regret_increment = oracle_value - jbar(model, policy);
    rec.sq_error = (policy.phi1 - target) * (policy.phi1 - target);
    rec.truncated = traj.truncated;
    if (traj.truncated) ++result.flagged_episodes;
    result.records.push_back(rec);

    // Both steps read theta_n; the critic moves after the actor.
    const ValueCritic critic_n = state.critic;
    state = actor_update(state, traj, config.schedule, model.Q);
    if (config.critic_mode == CriticMode::learn) {
      state.critic = critic_update(critic_n, traj, sv.a, model.Q, config.gamma,
                                   sv.phi2, config.bounds);
    }

    const auto [lo, hi] = projection_interval(config.schedule, n + 1);
    if (state.phi1 < lo || state.phi1 > hi) {
      throw std::logic_error("gain left its projection interval");
    }
  }
  result.final_state = state;
  return result;
}

}  // namespace rllq
