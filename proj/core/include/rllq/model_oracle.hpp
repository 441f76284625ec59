#pragma once

// Closed-form quantities for the scalar stochastic LQ problem
//
//   dx = (A x + B u) dt + (C x + D u) dW,   reward  -Q x^2 / 2 dt,  -H x(T)^2 / 2
//
// under Gaussian feedback policies u ~ N(phi1 x, phi2). These are the
// ground truth for regret accounting and for checking the learners'
// gradient estimators.

#include <functional>
#include <optional>

namespace rllq {

/// Coefficients of the LQ environment.
struct ModelParams {
  double A = 1.0;
  double B = 1.0;
  double C = 1.0;
  double D = 1.0;
  double Q = 1.0;
  double H = 1.0;
  double x0 = 1.0;
  double T = 1.0;

  /// Throws std::invalid_argument unless Q, H >= 0, T > 0, x0 != 0, D != 0
  /// and every coefficient is finite.
  void validate() const;
};

/// Gaussian feedback policy N(phi1 * x, phi2). phi2 == 0 is the
/// deterministic policy u = phi1 * x.
struct PolicyParams {
  double phi1 = 0.0;
  double phi2 = 0.0;
};

/// Quadratic value-function approximation J(t, x) = -k1(t) x^2 / 2 + k3(t)
/// together with the bounds that constrain it.
struct CriticParams {
  std::function<double(double)> k1;
  std::function<double(double)> k3;
  double c1 = 1.0;  // bound on |k1'|
  double c2 = 1.0;  // k1 in [1/c2, c2]
  double c3 = 1.0;  // bound on |k3'|
  /// Set when k1 is known to be constant; enables the closed-form h1.
  std::optional<double> constant_k1;

  /// k1 == level, k3 == offset.
  static CriticParams constant(double level, double offset, double c1,
                               double c2, double c3);

  /// Checks the bounds on a uniform grid of `grid_points` over [0, T],
  /// using central differences for the derivatives.
  bool satisfies_bounds(double horizon, int grid_points = 1001) const;
};

/// |a| below this evaluates the a = 0 limit branch of the exponential
/// formulas.
inline constexpr double kZeroRateThreshold = 1e-8;

/// phi1* = -(B + C D) / D^2. Throws std::invalid_argument when D == 0.
double optimal_gain(const ModelParams& model);

/// a(phi1) = 2A + 2B phi1 + C^2 + 2CD phi1 + D^2 phi1^2, the growth rate of
/// E[x(t)^2].
double a_of_phi1(const ModelParams& model, double phi1);

/// E[x(t)] = x0 exp((A + B phi1) t).
double mean_state(const ModelParams& model, double phi1, double t);

/// E[x(t)^2] = D^2 phi2 (e^{a t} - 1) / a + x0^2 e^{a t}.
double second_moment_state(const ModelParams& model, const PolicyParams& policy,
                           double t);

/// Deterministic part of the policy value as a function of the rate a.
double f_value(const ModelParams& model, double a);

/// Sensitivity of the policy value to the exploration variance phi2.
double g_value(const ModelParams& model, double a);

/// Unregularized value of N(phi1 x, phi2) from (0, x0):
/// f(a(phi1)) + phi2 g(a(phi1)).
double jbar(const ModelParams& model, const PolicyParams& policy);

/// Unregularized value J(t, x; phi1, phi2) of the Gaussian policy started
/// at (t, x). Solves the linear Feynman-Kac PDE in closed form.
double value_function(const ModelParams& model, const PolicyParams& policy,
                      double t, double x);

/// Optimal value of the classical (non-exploratory) problem,
/// -[Q/L + (H - Q/L) e^{L (t - T)}] x^2 / 2 with L = (B^2 + 2BCD - 2AD^2)/D^2.
double classical_value(const ModelParams& model, double t, double x);

struct MeanGradient {
  double h1 = 0.0;  // E[Z1(T)], the mean policy-gradient increment
  double l = 0.0;   // D^2 int_0^T k1(t) E[x(t)^2] dt, so h1 = -(phi1 - phi1*) l
};

/// Expected actor increment for a fixed critic. Exact when the critic
/// carries `constant_k1`, adaptive Simpson (abs. tol. 1e-10) otherwise.
MeanGradient h1_closed_form(const ModelParams& model, const CriticParams& critic,
                            const PolicyParams& policy);

/// jbar(phi1*, 0) - jbar(policy).
double regret_increment(const ModelParams& model, const PolicyParams& policy);

/// Differential entropy of N(., phi2): log(2 pi e phi2) / 2.
/// Throws std::invalid_argument when phi2 <= 0.
double entropy(double phi2);

/// Adaptive Simpson quadrature of `fn` over [lo, hi].
double adaptive_simpson(const std::function<double(double)>& fn, double lo,
                        double hi, double abs_tol, int max_depth = 50);

}  // namespace rllq
