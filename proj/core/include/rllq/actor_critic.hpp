#pragma once

// Model-free actor-critic learner for the LQ problem: Gaussian exploration
// with a decaying variance schedule, a projected policy-gradient step on the
// feedback gain, and an optional projected TD update of a quadratic critic.

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "rllq/model_oracle.hpp"
#include "rllq/random_stream.hpp"
#include "rllq/sde_sim.hpp"

namespace rllq {

enum class ScheduleMode { theoretical, experimental };

/// Learning-rate, exploration and projection schedules.
///
/// theoretical:  a_n = 1 ^ alpha^{3/4} / (n + beta)^{3/4}
///               b_n = 1 v (n + beta)^{1/4} / alpha^{1/4}
///               gain projected onto [-c_n, c_n], c_n = 1 v (log log n)^{1/6}
/// experimental: a_n = a_coeff / (n + 1)^{a_exp}
///               b_n = b_coeff (n + 1)^{b_exp}
///               gain projected onto [projection_lo, projection_hi]
///
/// In both modes the exploration variance is phi2_n = 1 / b_n.
struct Schedule {
  ScheduleMode mode = ScheduleMode::experimental;
  double alpha = 1.0;
  double beta = 1.0;
  double a_coeff = 0.05;
  double a_exp = 0.75;
  double b_coeff = 0.2;
  double b_exp = 0.25;
  double projection_lo = -2.2;
  double projection_hi = -0.5;

  static Schedule theoretical(double alpha, double beta);
  void validate() const;
};

struct ScheduleValues {
  double a = 0.0;     // learning rate
  double b = 0.0;     // inverse exploration variance
  double phi2 = 0.0;  // 1 / b
  double c1 = 0.0;    // half-width of the theoretical projection interval
};

ScheduleValues schedule_values(const Schedule& sched, std::int64_t n);

/// Projection interval for the gain after update n.
std::pair<double, double> projection_interval(const Schedule& sched,
                                              std::int64_t n);

/// Euclidean projection of y onto [lo, hi]. Throws when lo > hi.
double project_interval(double y, double lo, double hi);

/// d/dphi1 log N(u | phi1 x, phi2) = (u - phi1 x) x / phi2.
double score_phi1(double u, double x, const PolicyParams& policy);

struct CriticBounds {
  double c1 = 1.0;   // |k1'|
  double c2 = 10.0;  // k1 in [1/c2, c2]
  double c3 = 10.0;  // |k3'|
};

/// Critic J(t, x) = -theta1 x^2 / 2 + theta2 (T - t), i.e. k1 == theta1 and
/// k3(t) = theta2 (T - t).
struct ValueCritic {
  double theta1 = 1.0;
  double theta2 = 0.0;
  double horizon = 1.0;

  double k1(double) const { return theta1; }
  double k3(double t) const { return theta2 * (horizon - t); }
  double value(double t, double x) const { return -0.5 * theta1 * x * x + k3(t); }
  /// (dJ/dtheta1, dJ/dtheta2).
  std::array<double, 2> gradient(double t, double x) const {
    return {-0.5 * x * x, horizon - t};
  }

  CriticParams to_params(const CriticBounds& bounds) const;
};

/// J(t_{k+1}, x_{k+1}) - J(t_k, x_k) - Q x_k^2 dt / 2 + gamma p(phi2) dt.
/// The entropy term is skipped when gamma == 0.
double td_residual(const Trajectory& traj, std::size_t k,
                   const ValueCritic& critic, double Q, double gamma,
                   double phi2);

/// Discretized policy-gradient increment sum_k score_k * residual_k. The
/// entropy of a Gaussian does not depend on phi1, so no extra term appears.
double actor_gradient(const Trajectory& traj, const ValueCritic& critic,
                      const PolicyParams& policy, double Q, double gamma);

/// Projected TD step on (theta1, theta2): theta1 clamped to [1/c2, c2],
/// theta2 to [-c3, c3].
ValueCritic critic_update(const ValueCritic& critic, const Trajectory& traj,
                          double learning_rate, double Q, double gamma,
                          double phi2, const CriticBounds& bounds);

enum class CriticMode { fixed, learn };

struct LearnerState {
  std::int64_t episode = 0;  // number of completed updates
  double phi1 = -0.5;
  ValueCritic critic;
  CriticMode critic_mode = CriticMode::fixed;
  double gamma = 1.0;
};

/// One projected actor step using episode n = state.episode + 1:
/// phi1 <- Pi_{K_{n+1}}(phi1 + a_n * actor_gradient).
LearnerState actor_update(const LearnerState& state, const Trajectory& traj,
                          const Schedule& sched, double Q);

struct RllqConfig {
  ModelParams model;
  Schedule schedule;
  CriticMode critic_mode = CriticMode::fixed;
  CriticBounds bounds;
  double theta1 = 1.0;
  double theta2 = 0.0;
  double gamma = 1.0;
  double phi1_init = -0.5;
  double dt = 0.01;
  std::int64_t episodes = 0;

  void validate() const;
};

struct EpisodeRecord {
  std::int64_t episode = 0;
  double phi1 = 0.0;  // gain deployed in the episode
  double phi2 = 0.0;  // exploration variance deployed in the episode
  double regret_increment = 0.0;
  double sq_error = 0.0;  // (phi1 - phi1*)^2
  bool truncated = false;
};

struct ReplicationResult {
  std::vector<EpisodeRecord> records;
  std::int64_t flagged_episodes = 0;
  LearnerState final_state;
};

/// Runs episodes n = 1..N of the actor-critic learner. Deterministic in
/// (config, seed).
ReplicationResult run_replication(const RllqConfig& config, const SeedSpec& seed);

}  // namespace rllq
