#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "rllq/model_oracle.hpp"
#include "rllq/random_stream.hpp"

namespace rllq {

/// One episode sampled on the uniform grid t_k = k dt, k = 0..m.
struct Trajectory {
  double dt = 0.0;
  std::vector<double> times;    // m + 1 points
  std::vector<double> states;   // x(t_k), m + 1 points
  std::vector<double> actions;  // u(t_k), held over [t_k, t_{k+1}), m points
  std::vector<double> normals;  // Brownian draws Z_k, m points
  /// Set when the state left the overflow guard and the episode was cut
  /// short. All vectors then stop at the last accepted state.
  bool truncated = false;

  std::size_t steps() const { return actions.size(); }
};

/// States beyond this magnitude end the episode early.
inline constexpr double kStateOverflowLimit = 1e12;

/// Number of grid intervals round(T / dt). Throws std::invalid_argument
/// unless 0 < dt <= T.
std::size_t grid_steps(double horizon, double dt);

/// Euler-Maruyama episode under u_k ~ N(phi1 x_k, phi2):
///   x_{k+1} = x_k + (A x_k + B u_k) dt + (C x_k + D u_k) sqrt(dt) Z_k.
/// Each step draws the action normal first, then Z_k.
Trajectory simulate_episode_rllq(const ModelParams& model,
                                 const PolicyParams& policy, double dt,
                                 RandomStream& rng);

/// Same as above, reusing the storage of `out`.
void simulate_episode_rllq(const ModelParams& model, const PolicyParams& policy,
                           double dt, RandomStream& rng, Trajectory& out);

/// Clears `out` and reserves room for `steps` intervals.
void reset_trajectory(Trajectory& out, double dt, std::size_t steps);

/// Euler-Maruyama episode driven by an arbitrary source of standard normals,
/// called twice per step (action, then noise). Lets callers couple paths
/// across step sizes.
template <class NormalSource>
void simulate_episode_rllq_with(const ModelParams& m, const PolicyParams& policy,
                                double dt, NormalSource&& next_normal,
                                Trajectory& out) {
  if (!(policy.phi2 >= 0.0)) {
    throw std::invalid_argument("simulate_episode_rllq: phi2 must be >= 0");
  }
  const std::size_t steps = grid_steps(m.T, dt);
  reset_trajectory(out, dt, steps);
  const double sqrt_dt = std::sqrt(dt);
  const double action_sd = std::sqrt(policy.phi2);

  double x = m.x0;
  out.times.push_back(0.0);
  out.states.push_back(x);
  for (std::size_t k = 0; k < steps; ++k) {
    const double u = policy.phi1 * x + action_sd * next_normal();
    const double z = next_normal();
    const double next =
        x + (m.A * x + m.B * u) * dt + (m.C * x + m.D * u) * sqrt_dt * z;
    if (!std::isfinite(next) || std::abs(next) > kStateOverflowLimit) {
      out.truncated = true;
      return;
    }
    out.actions.push_back(u);
    out.normals.push_back(z);
    x = next;
    out.times.push_back(static_cast<double>(k + 1) * dt);
    out.states.push_back(x);
  }
}

/// Closed-loop geometric dynamics dx = P x dt + R x dW with P = A + B gain,
/// R = C + D gain, stepped exactly in log space so every state stays
/// positive. Throws std::invalid_argument when x0 <= 0.
Trajectory simulate_episode_geometric(const ModelParams& model, double gain,
                                      double dt, RandomStream& rng);

void simulate_episode_geometric(const ModelParams& model, double gain,
                                double dt, RandomStream& rng, Trajectory& out);

}  // namespace rllq
