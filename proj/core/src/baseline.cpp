#include "rllq/baseline.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace rllq {

namespace {

// Least-squares solution of the normal equations. Rank is guaranteed by
// the caller through the distinct-gain count.
template <int N>
Eigen::Matrix<double, N, 1> solve_normal(const std::array<double, 5>& gm,
                                         const std::array<double, 3>& ym) {
  Eigen::Matrix<double, N, N> gram;
  Eigen::Matrix<double, N, 1> rhs;
  for (int i = 0; i < N; ++i) {
    rhs(i) = ym[static_cast<std::size_t>(i)];
    for (int j = 0; j < N; ++j) gram(i, j) = gm[static_cast<std::size_t>(i + j)];
  }
  return gram.colPivHouseholderQr().solve(rhs);
}

}  // namespace

void ReplayBuffer::append(const ReplayRecord& r) {
  if (records_.empty()) shift_ = r.gain;
  records_.push_back(r);
  if (distinct_.size() < 3 &&
      std::find(distinct_.begin(), distinct_.end(), r.gain) == distinct_.end()) {
    distinct_.push_back(r.gain);
  }
  const double s = r.gain - shift_;
  double power = 1.0;
  for (std::size_t p = 0; p < gain_moments_.size(); ++p) {
    gain_moments_[p] += power;
    if (p < 3) {
      drift_moments_[p] += power * r.drift;
      vol_moments_[p] += power * r.sq_volatility;
    }
    power *= s;
  }
}

double gain_variance(std::int64_t n) { return 1.0 / (static_cast<double>(n) + 1.0); }

double sample_gain(const EstimatedModel& est, std::int64_t n, RandomStream& rng) {
  if (!(est.D > 0.0)) {
    throw std::invalid_argument("sample_gain: estimated D must be > 0");
  }
  return est.plug_in_gain() + std::sqrt(gain_variance(n)) * rng.normal();
}

PathStatistics estimate_P_R(const Trajectory& traj) {
  const auto& xs = traj.states;
  if (xs.empty()) throw std::invalid_argument("estimate_P_R: empty trajectory");
  for (double x : xs) {
    if (!(x > 0.0)) throw std::invalid_argument("estimate_P_R: nonpositive state");
  }
  const double horizon = traj.times.back() - traj.times.front();
  if (!(horizon > 0.0)) throw std::invalid_argument("estimate_P_R: zero horizon");
  PathStatistics out;
  double sum_sq = 0.0;
  double prev = std::log(xs.front());
  for (std::size_t k = 1; k < xs.size(); ++k) {
    const double cur = std::log(xs[k]);
    sum_sq += (cur - prev) * (cur - prev);
    prev = cur;
  }
  out.drift = (std::log(xs.back()) - std::log(xs.front())) / horizon;
  out.sq_volatility = sum_sq / horizon;
  return out;
}

DriftFit fit_drift(const ReplayBuffer& buffer) {
  if (buffer.distinct_gains() < 2) {
    throw RankDeficientError("fit_drift: need at least 2 distinct gains");
  }
  const auto coef = solve_normal<2>(buffer.gain_moments(), buffer.drift_moments());
  // P = e0 + e1 (gain - shift)
  const double s = buffer.shift();
  return DriftFit{coef(0) - coef(1) * s, coef(1)};
}

DiffusionFit recover_diffusion(double c0, double c1, double c2) {
  DiffusionFit fit{c0, c1, c2, 0.0, 0.0};
  fit.D = std::sqrt(std::max(c2, kMinDiffusionSquare));
  fit.C = c1 / (2.0 * fit.D);
  return fit;
}

DiffusionFit fit_diffusion(const ReplayBuffer& buffer) {
  if (buffer.distinct_gains() < 3) {
    throw RankDeficientError("fit_diffusion: need at least 3 distinct gains");
  }
  const auto d = solve_normal<3>(buffer.gain_moments(), buffer.volatility_moments());
  // R^2 = d0 + d1 (g - s) + d2 (g - s)^2
  const double s = buffer.shift();
  return recover_diffusion(d(0) - d(1) * s + d(2) * s * s, d(1) - 2.0 * d(2) * s, d(2));
}

void BaselineConfig::validate() const {
  model.validate();
  if (!(model.x0 > 0.0)) throw std::invalid_argument("baseline requires x0 > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (episodes < 0) throw std::invalid_argument("episodes must be >= 0");
  if (bootstrap_gain_first == bootstrap_gain_second) {
    throw std::invalid_argument("bootstrap gains must be distinct");
  }
  if (!(initial.D > 0.0)) throw std::invalid_argument("initial D estimate must be > 0");
}

BaselineResult run_replication_baseline(const BaselineConfig& config,
                                        const SeedSpec& seed) {
  config.validate();
  const ModelParams& model = config.model;
  const double target = optimal_gain(model);
  const double oracle_value = jbar(model, PolicyParams{target, 0.0});

  RandomStream rng = derive_stream(seed);
  BaselineResult result;
  result.records.reserve(static_cast<std::size_t>(config.episodes));
  EstimatedModel est = config.initial;
  Trajectory traj;

  auto observe = [&](double gain) {
    simulate_episode_geometric(model, gain, config.dt, rng, traj);
    const PathStatistics stats = estimate_P_R(traj);
    const double drift = config.drift_target == DriftTarget::corrected
                             ? stats.drift + 0.5 * stats.sq_volatility
                             : stats.drift;
    result.buffer.append(ReplayRecord{gain, drift, stats.sq_volatility});
  };
  auto refit = [&] {
    const DriftFit drift = fit_drift(result.buffer);
    est.A = drift.A;
    est.B = drift.B;
    if (result.buffer.distinct_gains() >= 3) {
      const DiffusionFit diffusion = fit_diffusion(result.buffer);
      // A clamped D^2 would put the plug-in gain near -(B + C D) / 1e-6.
      if (diffusion.c2 > kMinDiffusionSquare && std::isfinite(diffusion.C) &&
          std::isfinite(diffusion.D)) {
        est.C = diffusion.C;
        est.D = diffusion.D;
      } else {
        ++result.failed_diffusion_fits;
      }
    }
  };

  observe(config.bootstrap_gain_first);
  observe(config.bootstrap_gain_second);
  refit();

  for (std::int64_t n = 1; n <= config.episodes; ++n) {
    const double gain = sample_gain(est, n, rng);
    observe(gain);
    if (traj.truncated) ++result.flagged_episodes;
    refit();
    est.episode = n;

    BaselineRecord rec;
    rec.episode = n;
    rec.sampled_gain = gain;
    rec.point_gain = est.plug_in_gain();
    rec.regret_increment = oracle_value - jbar(model, PolicyParams{gain, 0.0});
    rec.sq_error = (rec.point_gain - target) * (rec.point_gain - target);
    rec.sq_error_sampled = (gain - target) * (gain - target);
    rec.truncated = traj.truncated;
    result.records.push_back(rec);
  }
  result.final_estimate = est;
  return result;
}

}  // namespace rllq
