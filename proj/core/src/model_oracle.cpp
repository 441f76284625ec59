#include "rllq/model_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rllq {

namespace {

bool near_zero_rate(double a) { return std::abs(a) < kZeroRateThreshold; }

// (e^{a s} - 1) / a, continuous at a = 0.
double growth_integral(double a, double s) {
  return near_zero_rate(a) ? s : std::expm1(a * s) / a;
}

// (e^{a s} - 1 - a s) / a^2, continuous at a = 0.
double growth_double_integral(double a, double s) {
  if (near_zero_rate(a)) return 0.5 * s * s;
  return (std::expm1(a * s) - a * s) / (a * a);
}

double simpson_step(const std::function<double(double)>& fn, double lo,
                    double hi, double f_lo, double f_mid, double f_hi,
                    double whole, double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double left_mid = 0.5 * (lo + mid);
  const double right_mid = 0.5 * (mid + hi);
  const double f_left_mid = fn(left_mid);
  const double f_right_mid = fn(right_mid);
  const double left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_left_mid + f_mid);
  const double right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_right_mid + f_hi);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_step(fn, lo, mid, f_lo, f_left_mid, f_mid, left, 0.5 * tol,
                      depth - 1) +
         simpson_step(fn, mid, hi, f_mid, f_right_mid, f_hi, right, 0.5 * tol,
                      depth - 1);
}

}  // namespace

void ModelParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("ModelParams: ") + what);
  };
  for (double v : {A, B, C, D, Q, H, x0, T}) {
    require(std::isfinite(v), "coefficients must be finite");
  }
  require(Q >= 0.0, "Q must be >= 0");
  require(H >= 0.0, "H must be >= 0");
  require(T > 0.0, "T must be > 0");
  require(x0 != 0.0, "x0 must be nonzero");
  require(D != 0.0, "D must be nonzero");
}

CriticParams CriticParams::constant(double level, double offset, double c1,
                                    double c2, double c3) {
  CriticParams critic;
  critic.k1 = [level](double) { return level; };
  critic.k3 = [offset](double) { return offset; };
  critic.c1 = c1;
  critic.c2 = c2;
  critic.c3 = c3;
  critic.constant_k1 = level;
  return critic;
}

bool CriticParams::satisfies_bounds(double horizon, int grid_points) const {
  if (!k1 || !k3 || grid_points < 2) return false;
  const double h = horizon / static_cast<double>(grid_points - 1);
  const double fd = 1e-6 * std::max(horizon, 1.0);
  for (int i = 0; i < grid_points; ++i) {
    const double t = h * i;
    const double level = k1(t);
    if (level < 1.0 / c2 || level > c2) return false;
    const double d1 = (k1(t + fd) - k1(t - fd)) / (2.0 * fd);
    const double d3 = (k3(t + fd) - k3(t - fd)) / (2.0 * fd);
    // finite-difference slack
    if (std::abs(d1) > c1 + 1e-6 || std::abs(d3) > c3 + 1e-6) return false;
  }
  return true;
}

double optimal_gain(const ModelParams& m) {
  if (m.D == 0.0) {
    throw std::invalid_argument("optimal_gain: D must be nonzero");
  }
  return -(m.B + m.C * m.D) / (m.D * m.D);
}

double a_of_phi1(const ModelParams& m, double phi1) {
  return 2.0 * m.A + 2.0 * m.B * phi1 + m.C * m.C + 2.0 * m.C * m.D * phi1 +
         m.D * m.D * phi1 * phi1;
}

double mean_state(const ModelParams& m, double phi1, double t) {
  return m.x0 * std::exp((m.A + m.B * phi1) * t);
}

double second_moment_state(const ModelParams& m, const PolicyParams& policy,
                           double t) {
  const double a = a_of_phi1(m, policy.phi1);
  const double x0_sq = m.x0 * m.x0;
  if (near_zero_rate(a)) return m.D * m.D * policy.phi2 * t + x0_sq;
  return m.D * m.D * policy.phi2 * std::expm1(a * t) / a +
         x0_sq * std::exp(a * t);
}

double f_value(const ModelParams& m, double a) {
  const double x0_sq = m.x0 * m.x0;
  if (near_zero_rate(a)) return 0.5 * x0_sq * (-m.H - m.Q * m.T);
  // (Q - e^{aT} Q - H a e^{aT}) x0^2 / (2a), rearranged around expm1
  return -0.5 * x0_sq * (m.Q * std::expm1(a * m.T) / a + m.H * std::exp(a * m.T));
}

double g_value(const ModelParams& m, double a) {
  const double d_sq = m.D * m.D;
  if (near_zero_rate(a)) return d_sq * m.T * (-2.0 * m.H - m.Q * m.T) / 4.0;
  // D^2 (Q T a + Q + H a - e^{aT} Q - H a e^{aT}) / (2 a^2)
  return -0.5 * d_sq *
         (m.Q * growth_double_integral(a, m.T) + m.H * std::expm1(a * m.T) / a);
}

double jbar(const ModelParams& m, const PolicyParams& policy) {
  const double a = a_of_phi1(m, policy.phi1);
  return f_value(m, a) + policy.phi2 * g_value(m, a);
}

double value_function(const ModelParams& m, const PolicyParams& policy,
                      double t, double x) {
  const double a = a_of_phi1(m, policy.phi1);
  const double tau = m.T - t;
  const double growth = growth_integral(a, tau);
  const double quadratic =
      -0.5 * (m.Q * growth + m.H * (near_zero_rate(a) ? 1.0 : std::exp(a * tau))) *
      x * x;
  const double exploration =
      -0.5 * m.D * m.D * policy.phi2 *
      (m.Q * growth_double_integral(a, tau) + m.H * growth);
  return quadratic + exploration;
}

double classical_value(const ModelParams& m, double t, double x) {
  const double lambda =
      (m.B * m.B + 2.0 * m.B * m.C * m.D - 2.0 * m.A * m.D * m.D) / (m.D * m.D);
  const double tau = m.T - t;
  // Q/L + (H - Q/L) e^{-L tau} == Q (1 - e^{-L tau}) / L + H e^{-L tau}
  const double curvature =
      near_zero_rate(lambda)
          ? m.Q * tau + m.H
          : -m.Q * std::expm1(-lambda * tau) / lambda + m.H * std::exp(-lambda * tau);
  return -0.5 * curvature * x * x;
}

MeanGradient h1_closed_form(const ModelParams& m, const CriticParams& critic,
                            const PolicyParams& policy) {
  const double a = a_of_phi1(m, policy.phi1);
  const double d_sq = m.D * m.D;
  double weighted_moment = 0.0;
  if (critic.constant_k1) {
    const double moment_integral =
        d_sq * policy.phi2 * growth_double_integral(a, m.T) +
        m.x0 * m.x0 * growth_integral(a, m.T);
    weighted_moment = *critic.constant_k1 * moment_integral;
  } else {
    weighted_moment = adaptive_simpson(
        [&](double t) { return critic.k1(t) * second_moment_state(m, policy, t); },
        0.0, m.T, 1e-10);
  }
  MeanGradient out;
  out.l = d_sq * weighted_moment;
  out.h1 = -(m.B + m.C * m.D + d_sq * policy.phi1) * weighted_moment;
  return out;
}

double regret_increment(const ModelParams& m, const PolicyParams& policy) {
  return jbar(m, PolicyParams{optimal_gain(m), 0.0}) - jbar(m, policy);
}

double entropy(double phi2) {
  if (!(phi2 > 0.0)) {
    throw std::invalid_argument("entropy: phi2 must be > 0");
  }
  return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * phi2);
}

double adaptive_simpson(const std::function<double(double)>& fn, double lo,
                        double hi, double abs_tol, int max_depth) {
  const double f_lo = fn(lo);
  const double f_hi = fn(hi);
  const double f_mid = fn(0.5 * (lo + hi));
  const double whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
  return simpson_step(fn, lo, hi, f_lo, f_mid, f_hi, whole, abs_tol, max_depth);
}

}  // namespace rllq
