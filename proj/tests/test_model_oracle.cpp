#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "checks.hpp"
#include "rllq/model_oracle.hpp"

using namespace rllq;

namespace {

const ModelParams kOnes = checks::all_ones();
const ModelParams kGeneric = checks::generic_model();

// Frozen constants from tests/oracles/compute_expected.py (mpmath ODE
// integration and quadrature of the defining expectations).
constexpr double kOnesSecondMoment = 0.49430355293715386;
constexpr double kOnesJbar = -3.159222740527415;
constexpr double kOnesH1NoExplore = -2.9884115489542097;
constexpr double kOnesH1 = -3.2265573967868832;
constexpr double kOnesH1Ramp = -4.2092131364655715;
constexpr double kOnesL = 2.1510382645245888;
constexpr double kGenericSecondMoment = 5.9657718497010611;
constexpr double kGenericJbar = -11.753307044814479;
constexpr double kGenericValue = -1.9934413252282688;
constexpr double kGenericH1 = 0.10002352084453101;
constexpr double kGenericClassical = -8.2114523588261615;
constexpr double kEntropyOne = 1.4189385332046727;

CriticParams unit_critic() { return CriticParams::constant(1.0, 0.0, 1.0, 10.0, 10.0); }

}  // namespace

TEST(OptimalGain, Examples) {
  EXPECT_DOUBLE_EQ(optimal_gain(kOnes), -2.0);
  ModelParams m;
  m.B = 0.0;
  m.C = 0.0;
  EXPECT_DOUBLE_EQ(optimal_gain(m), 0.0);
  m.B = 2.0;
  m.C = 1.0;
  m.D = 2.0;
  EXPECT_DOUBLE_EQ(optimal_gain(m), -1.0);
}

TEST(OptimalGain, RejectsZeroD) {
  ModelParams m;
  m.D = 0.0;
  EXPECT_THROW(optimal_gain(m), std::invalid_argument);
  EXPECT_THROW(m.validate(), std::invalid_argument);
}

TEST(ModelParams, Validation) {
  EXPECT_NO_THROW(kOnes.validate());
  ModelParams m;
  m.Q = -1.0;
  EXPECT_THROW(m.validate(), std::invalid_argument);
  m = ModelParams{};
  m.x0 = 0.0;
  EXPECT_THROW(m.validate(), std::invalid_argument);
  m = ModelParams{};
  m.T = 0.0;
  EXPECT_THROW(m.validate(), std::invalid_argument);
}

TEST(Rate, Examples) {
  EXPECT_DOUBLE_EQ(a_of_phi1(kOnes, -2.0), -1.0);
  EXPECT_DOUBLE_EQ(a_of_phi1(kOnes, -1.0), 0.0);
  EXPECT_DOUBLE_EQ(a_of_phi1(kOnes, -0.5), 1.25);
  for (double phi : {-3.0, -1.7, 0.4}) {
    EXPECT_NEAR(a_of_phi1(kOnes, phi), (phi + 1.0) * (phi + 3.0), 1e-14);
  }
}

TEST(Moments, MeanExamples) {
  EXPECT_DOUBLE_EQ(mean_state(kOnes, -0.7, 0.0), 1.0);
  EXPECT_NEAR(mean_state(kOnes, -2.0, 1.0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(mean_state(kOnes, -0.5, 1.0), std::exp(0.5), 1e-15);
}

TEST(Moments, SecondMomentExamples) {
  EXPECT_DOUBLE_EQ(second_moment_state(kOnes, {-0.3, 0.8}, 0.0), 1.0);
  EXPECT_NEAR(second_moment_state(kOnes, {-2.0, 0.0}, 1.0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(second_moment_state(kOnes, {-2.0, 0.2}, 1.0), kOnesSecondMoment, 1e-14);
  EXPECT_NEAR(second_moment_state(kGeneric, {0.1, 0.4}, 0.8), kGenericSecondMoment, 1e-13);
}

TEST(Moments, ZeroRateBranch) {
  // a(-1) = 0 on the all-ones model: E x^2 = D^2 phi2 t + x0^2.
  EXPECT_NEAR(second_moment_state(kOnes, {-1.0, 0.3}, 0.7), 0.3 * 0.7 + 1.0, 1e-15);
}

TEST(FG, Examples) {
  EXPECT_DOUBLE_EQ(f_value(kOnes, 0.0), -1.0);
  EXPECT_NEAR(f_value(kOnes, -1.0), -0.5, 1e-15);
  EXPECT_NEAR(f_value(kOnes, 3.0), (1.0 - 4.0 * std::exp(3.0)) / 6.0, 1e-12);
  EXPECT_DOUBLE_EQ(g_value(kOnes, 0.0), -0.75);
  EXPECT_NEAR(g_value(kOnes, -1.0), -0.5, 1e-15);
  ModelParams zero_cost;
  zero_cost.Q = 0.0;
  zero_cost.H = 0.0;
  for (double a : {-4.0, 0.0, 2.5}) {
    EXPECT_EQ(f_value(zero_cost, a), 0.0);
    EXPECT_EQ(g_value(zero_cost, a), 0.0);
  }
}

TEST(FG, MonotoneAndNegative) {
  const auto v = checks::fg_monotone_negative(kOnes);
  EXPECT_TRUE(v.pass) << v.detail;
  const auto w = checks::fg_monotone_negative(kGeneric);
  EXPECT_TRUE(w.pass) << w.detail;
}

TEST(FG, ContinuousAtZero) {
  const auto v = checks::fg_continuous_at_zero(kOnes);
  EXPECT_TRUE(v.pass) << v.detail;
}

TEST(Jbar, Examples) {
  EXPECT_NEAR(jbar(kOnes, {-2.0, 0.0}), -0.5, 1e-15);
  EXPECT_NEAR(jbar(kOnes, {-2.0, 0.2}), -0.6, 1e-15);
  EXPECT_DOUBLE_EQ(jbar(kOnes, {-1.0, 0.0}), -1.0);
}

TEST(Jbar, MatchesQuadratureOracle) {
  EXPECT_NEAR(jbar(kOnes, {-0.5, 0.3}), kOnesJbar, 1e-13);
  EXPECT_NEAR(jbar(kGeneric, {0.1, 0.4}), kGenericJbar, 1e-12);
}

TEST(ValueFunction, Examples) {
  EXPECT_DOUBLE_EQ(value_function(kOnes, {-0.4, 0.6}, 1.0, 2.0), -2.0);
  EXPECT_NEAR(value_function(kOnes, {-2.0, 0.2}, 0.0, 1.0), -0.6, 1e-14);
  EXPECT_NEAR(value_function(kOnes, {-1.0, 0.0}, 0.0, 1.0), -1.0, 1e-14);
  EXPECT_NEAR(value_function(kGeneric, {0.1, 0.4}, 0.6, -0.9), kGenericValue, 1e-13);
}

TEST(ValueFunction, ZeroRateMatchesNeighbours) {
  const PolicyParams p{-1.0, 0.4};
  for (double t : {0.0, 0.3, 0.9}) {
    const double mid = value_function(kOnes, p, t, 1.3);
    const double left = value_function(kOnes, {-1.0 - 1e-6, 0.4}, t, 1.3);
    const double right = value_function(kOnes, {-1.0 + 1e-6, 0.4}, t, 1.3);
    EXPECT_NEAR(mid, left, 1e-5);
    EXPECT_NEAR(mid, right, 1e-5);
  }
}

TEST(ValueFunction, SolvesFeynmanKacPde) {
  // J_t + (A + B phi1) x J_x + ((C + D phi1)^2 x^2 + D^2 phi2) J_xx / 2
  //     - Q x^2 / 2 = 0, checked by central differences.
  const ModelParams& m = kGeneric;
  const double h = 1e-4;
  for (const PolicyParams& p : {PolicyParams{0.1, 0.4}, PolicyParams{-1.2, 0.05}}) {
    for (double t : {0.2, 0.7, 1.3}) {
      for (double x : {-1.1, 0.4, 2.0}) {
        auto J = [&](double tt, double xx) { return value_function(m, p, tt, xx); };
        const double jt = (J(t + h, x) - J(t - h, x)) / (2 * h);
        const double jx = (J(t, x + h) - J(t, x - h)) / (2 * h);
        const double jxx = (J(t, x + h) - 2 * J(t, x) + J(t, x - h)) / (h * h);
        const double r = m.C + m.D * p.phi1;
        const double residual = jt + (m.A + m.B * p.phi1) * x * jx +
                                0.5 * (r * r * x * x + m.D * m.D * p.phi2) * jxx -
                                0.5 * m.Q * x * x;
        EXPECT_NEAR(residual, 0.0, 1e-5) << "t=" << t << " x=" << x;
      }
    }
  }
}

TEST(ValueFunction, AgreesWithJbar) {
  const auto v = checks::value_matches_jbar(kOnes, 100, 7);
  EXPECT_TRUE(v.pass) << v.detail;
  const auto w = checks::value_matches_jbar(kGeneric, 100, 8);
  EXPECT_TRUE(w.pass) << w.detail;
}

TEST(ClassicalValue, Examples) {
  EXPECT_DOUBLE_EQ(classical_value(kOnes, 1.0, 3.0), -4.5);
  EXPECT_NEAR(classical_value(kOnes, 0.0, 1.0), -0.5, 1e-15);
  EXPECT_EQ(classical_value(kOnes, 0.3, 0.0), 0.0);
  EXPECT_NEAR(classical_value(kGeneric, 0.2, 1.7), kGenericClassical, 1e-13);
}

TEST(ClassicalValue, MatchesOptimalPolicyValue) {
  EXPECT_NEAR(classical_value(kGeneric, 0.0, kGeneric.x0),
              jbar(kGeneric, {optimal_gain(kGeneric), 0.0}), 1e-12);
}

TEST(ClassicalValue, DegenerateRate) {
  // L = (B^2 + 2BCD - 2AD^2) / D^2 = 0 with A = 1.5, B = C = D = 1.
  ModelParams m;
  m.A = 1.5;
  EXPECT_NEAR(classical_value(m, 0.25, 2.0), -0.5 * (0.75 + 1.0) * 4.0, 1e-12);
}

TEST(MeanGradient, Examples) {
  EXPECT_NEAR(h1_closed_form(kOnes, unit_critic(), {-2.0, 0.3}).h1, 0.0, 1e-15);
  EXPECT_NEAR(h1_closed_form(kOnes, unit_critic(), {-0.5, 0.0}).h1,
              -1.5 * std::expm1(1.25) / 1.25, 1e-14);
  EXPECT_NEAR(h1_closed_form(kOnes, unit_critic(), {-0.5, 0.0}).h1, kOnesH1NoExplore, 1e-14);
  const MeanGradient g = h1_closed_form(kOnes, unit_critic(), {-0.5, 0.2});
  EXPECT_NEAR(g.h1, kOnesH1, 1e-13);
  EXPECT_NEAR(g.l, kOnesL, 1e-13);
  EXPECT_NEAR(h1_closed_form(kGeneric, unit_critic(), {0.1, 0.4}).h1, kGenericH1, 1e-13);
}

TEST(MeanGradient, QuadratureForVaryingCritic) {
  CriticParams ramp = unit_critic();
  ramp.constant_k1.reset();
  ramp.k1 = [](double t) { return 1.0 + 0.5 * t; };
  EXPECT_NEAR(h1_closed_form(kOnes, ramp, {-0.5, 0.2}).h1, kOnesH1Ramp, 1e-9);

  // A constant critic without the closed-form hint goes through quadrature.
  CriticParams flat = unit_critic();
  flat.constant_k1.reset();
  EXPECT_NEAR(h1_closed_form(kOnes, flat, {-0.5, 0.2}).h1, kOnesH1, 1e-9);
}

TEST(MeanGradient, SignProperty) {
  const auto v = checks::gradient_sign(kOnes);
  EXPECT_TRUE(v.pass) << v.detail;
  const auto w = checks::gradient_sign(kGeneric);
  EXPECT_TRUE(w.pass) << w.detail;
}

TEST(Regret, Examples) {
  EXPECT_EQ(regret_increment(kOnes, {-2.0, 0.0}), 0.0);
  EXPECT_NEAR(regret_increment(kOnes, {-2.0, 0.2}), 0.1, 1e-15);
  EXPECT_NEAR(regret_increment(kOnes, {-1.0, 0.0}), 0.5, 1e-15);
}

TEST(Regret, NonNegative) {
  for (double phi1 = -4.0; phi1 <= 0.0; phi1 += 0.05) {
    for (double phi2 : {0.0, 0.1, 1.0}) {
      EXPECT_GE(regret_increment(kGeneric, {phi1, phi2}), -1e-12);
    }
  }
}

TEST(Entropy, Examples) {
  const double e = std::numbers::e;
  const double pi = std::numbers::pi;
  EXPECT_NEAR(entropy(1.0 / (2.0 * pi * e)), 0.0, 1e-15);
  EXPECT_NEAR(entropy(1.0), kEntropyOne, 1e-15);
  for (double phi2 : {0.01, 0.7, 30.0}) {
    EXPECT_NEAR(entropy(4.0 * phi2) - entropy(phi2), std::log(2.0), 1e-14);
  }
  EXPECT_THROW(entropy(0.0), std::invalid_argument);
  EXPECT_THROW(entropy(-1.0), std::invalid_argument);
}

TEST(Oracle, ArgmaxAtOptimalGain) {
  const auto v = checks::oracle_argmax(kOnes);
  EXPECT_TRUE(v.pass) << v.detail;
  const auto w = checks::oracle_argmax(kGeneric);
  EXPECT_TRUE(w.pass) << w.detail;
}

TEST(Oracle, MomentCoherence) {
  const auto v = checks::moment_coherence(kOnes);
  EXPECT_TRUE(v.pass) << v.detail;
  const auto w = checks::moment_coherence(kGeneric);
  EXPECT_TRUE(w.pass) << w.detail;
}

TEST(Critic, Bounds) {
  EXPECT_TRUE(unit_critic().satisfies_bounds(1.0));
  CriticParams steep = unit_critic();
  steep.k1 = [](double t) { return 1.0 + 5.0 * t; };
  EXPECT_FALSE(steep.satisfies_bounds(1.0));
  CriticParams low = CriticParams::constant(0.05, 0.0, 1.0, 10.0, 10.0);
  EXPECT_FALSE(low.satisfies_bounds(1.0));
}

TEST(Quadrature, Polynomial) {
  EXPECT_NEAR(adaptive_simpson([](double t) { return t * t * t; }, 0.0, 2.0, 1e-12), 4.0, 1e-12);
  EXPECT_NEAR(adaptive_simpson([](double t) { return std::exp(t); }, 0.0, 1.0, 1e-12),
              std::expm1(1.0), 1e-11);
}
