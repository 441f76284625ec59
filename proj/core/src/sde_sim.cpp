#include "rllq/sde_sim.hpp"

#include <cmath>
#include <stdexcept>

namespace rllq {

void reset_trajectory(Trajectory& out, double dt, std::size_t steps) {
  out.dt = dt;
  out.truncated = false;
  out.times.clear();
  out.states.clear();
  out.actions.clear();
  out.normals.clear();
  out.times.reserve(steps + 1);
  out.states.reserve(steps + 1);
  out.actions.reserve(steps);
  out.normals.reserve(steps);
}

std::size_t grid_steps(double horizon, double dt) {
  if (!(dt > 0.0) || !(dt <= horizon * (1.0 + 1e-12))) {
    throw std::invalid_argument("time step must satisfy 0 < dt <= T");
  }
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

void simulate_episode_rllq(const ModelParams& m, const PolicyParams& policy,
                           double dt, RandomStream& rng, Trajectory& out) {
  simulate_episode_rllq_with(m, policy, dt, [&rng] { return rng.normal(); }, out);
}

Trajectory simulate_episode_rllq(const ModelParams& m, const PolicyParams& policy,
                                 double dt, RandomStream& rng) {
  Trajectory out;
  simulate_episode_rllq(m, policy, dt, rng, out);
  return out;
}

void simulate_episode_geometric(const ModelParams& m, double gain, double dt,
                                RandomStream& rng, Trajectory& out) {
  if (!(m.x0 > 0.0)) {
    throw std::invalid_argument("simulate_episode_geometric: x0 must be > 0");
  }
  const std::size_t steps = grid_steps(m.T, dt);
  reset_trajectory(out, dt, steps);
  const double drift = m.A + m.B * gain;
  const double vol = m.C + m.D * gain;
  const double log_drift = (drift - 0.5 * vol * vol) * dt;
  const double log_vol = vol * std::sqrt(dt);

  double log_x = std::log(m.x0);
  out.times.push_back(0.0);
  out.states.push_back(m.x0);
  for (std::size_t k = 0; k < steps; ++k) {
    const double z = rng.normal();
    const double next_log = log_x + log_drift + log_vol * z;
    const double x = std::exp(next_log);
    if (!std::isfinite(x) || x > kStateOverflowLimit || x <= 0.0) {
      out.truncated = true;
      return;
    }
    out.actions.push_back(gain * out.states.back());
    out.normals.push_back(z);
    log_x = next_log;
    out.times.push_back(static_cast<double>(k + 1) * dt);
    out.states.push_back(x);
  }
}

Trajectory simulate_episode_geometric(const ModelParams& m, double gain,
                                      double dt, RandomStream& rng) {
  Trajectory out;
  simulate_episode_geometric(m, gain, dt, rng, out);
  return out;
}

}  // namespace rllq
