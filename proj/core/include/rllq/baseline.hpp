#pragma once

// Certainty-equivalent model-based comparator. Each episode deploys a
// deterministic gain drawn around the plug-in optimum of the current
// estimates, reads the closed-loop drift and squared volatility off the
// log-state path, and refits (A, B, C, D) by regression over every episode
// seen so far.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rllq/model_oracle.hpp"
#include "rllq/random_stream.hpp"
#include "rllq/sde_sim.hpp"

namespace rllq {

struct EstimatedModel {
  double A = 1.0;
  double B = 1.0;
  double C = 0.5;
  double D = 1.0;
  std::int64_t episode = 0;

  /// -(B + C D) / D^2 under the estimates.
  double plug_in_gain() const { return -(B + C * D) / (D * D); }
};

/// Raised when the replay buffer cannot identify a regression.
class RankDeficientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReplayRecord {
  double gain = 0.0;          // deployed gain
  double drift = 0.0;         // regression target for P
  double sq_volatility = 0.0; // R-hat^2
};

/// Append-only history of (gain, P-hat, R-hat^2). Regression moments are
/// accumulated on append, relative to the first gain seen, so a refit costs
/// O(1) regardless of history length.
class ReplayBuffer {
 public:
  void append(const ReplayRecord& record);

  std::size_t size() const { return records_.size(); }
  const std::vector<ReplayRecord>& records() const { return records_; }
  /// Number of distinct gains, saturating at 3.
  int distinct_gains() const { return static_cast<int>(distinct_.size()); }

  /// Gain shift used for the accumulated moments.
  double shift() const { return shift_; }
  /// sum_i s_i^p for p = 0..4, with s_i = gain_i - shift().
  const std::array<double, 5>& gain_moments() const { return gain_moments_; }
  /// sum_i s_i^p y_i for p = 0..2, for y = drift and y = sq_volatility.
  const std::array<double, 3>& drift_moments() const { return drift_moments_; }
  const std::array<double, 3>& volatility_moments() const { return vol_moments_; }

 private:
  std::vector<ReplayRecord> records_;
  std::vector<double> distinct_;
  double shift_ = 0.0;
  std::array<double, 5> gain_moments_{};
  std::array<double, 3> drift_moments_{};
  std::array<double, 3> vol_moments_{};
};

/// Exploration variance v_n = 1 / (n + 1) of the sampled gain.
double gain_variance(std::int64_t n);

/// Draws gain ~ N(plug_in_gain, v_n). Throws std::invalid_argument when
/// D <= 0.
double sample_gain(const EstimatedModel& est, std::int64_t n, RandomStream& rng);

struct PathStatistics {
  double drift = 0.0;          // (log x_m - log x_0) / T
  double sq_volatility = 0.0;  // sum (log x_k - log x_{k-1})^2 / T
};

/// Throws std::invalid_argument on a nonpositive state.
PathStatistics estimate_P_R(const Trajectory& traj);

struct DriftFit {
  double A = 0.0;  // intercept
  double B = 0.0;  // slope
};

/// OLS of P-hat on the gain. Throws RankDeficientError with < 2 distinct
/// gains.
DriftFit fit_drift(const ReplayBuffer& buffer);

inline constexpr double kMinDiffusionSquare = 1e-6;

struct DiffusionFit {
  double c0 = 0.0;  // ~ C^2
  double c1 = 0.0;  // ~ 2 C D
  double c2 = 0.0;  // ~ D^2
  double C = 0.0;
  double D = 0.0;
};

/// Maps quadratic coefficients to D = sqrt(max(c2, 1e-6)), C = c1 / (2 D).
DiffusionFit recover_diffusion(double c0, double c1, double c2);

/// OLS of R-hat^2 on (1, gain, gain^2). Throws RankDeficientError with < 3
/// distinct gains.
DiffusionFit fit_diffusion(const ReplayBuffer& buffer);

/// What the drift regression is fed. The log-return rate P-hat estimates
/// P - R^2 / 2, not P; `corrected` regresses P-hat + R-hat^2 / 2 instead.
enum class DriftTarget { corrected, log_return };

struct BaselineConfig {
  ModelParams model;
  DriftTarget drift_target = DriftTarget::log_return;
  EstimatedModel initial;
  double bootstrap_gain_first = -0.5;
  double bootstrap_gain_second = -1.5;
  double dt = 0.01;
  std::int64_t episodes = 0;

  void validate() const;
};

struct BaselineRecord {
  std::int64_t episode = 0;
  double point_gain = 0.0;    // plug-in gain after the episode's refit
  double sampled_gain = 0.0;  // gain deployed in the episode
  double regret_increment = 0.0;
  double sq_error = 0.0;          // (point_gain - phi1*)^2
  double sq_error_sampled = 0.0;  // (sampled_gain - phi1*)^2
  bool truncated = false;
};

struct BaselineResult {
  std::vector<BaselineRecord> records;
  ReplayBuffer buffer;
  EstimatedModel final_estimate;
  std::int64_t flagged_episodes = 0;
  std::int64_t failed_diffusion_fits = 0;
};

BaselineResult run_replication_baseline(const BaselineConfig& config,
                                        const SeedSpec& seed);

}  // namespace rllq
