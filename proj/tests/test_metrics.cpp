#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <numeric>

#include "checks.hpp"
#include "rllq/format.hpp"
#include "rllq/metrics.hpp"
#include "rllq/random_stream.hpp"

using namespace rllq;

TEST(Aggregate, SingleReplicationIsIdentity) {
  const ReplicationSeries r{{0.4, 0.2, 0.1}, {0.5, 0.25, 0.0}};
  const AggregateSeries a = aggregate(std::span<const ReplicationSeries>(&r, 1));
  EXPECT_EQ(a.replications, 1u);
  EXPECT_EQ(a.episodes, (std::vector<std::int64_t>{1, 2, 3}));
  EXPECT_EQ(a.mean_sq_error, r.sq_error);
  EXPECT_EQ(a.mean_cum_regret, (std::vector<double>{0.5, 0.75, 0.75}));
}

TEST(Aggregate, Means) {
  const std::vector<ReplicationSeries> reps{{{0.2}, {0.0}}, {{0.4}, {0.0}}};
  const AggregateSeries a = aggregate(reps);
  EXPECT_DOUBLE_EQ(a.mean_sq_error[0], 0.3);
  EXPECT_EQ(a.mean_cum_regret[0], 0.0);
}

TEST(Aggregate, RejectsMismatchedLengths) {
  const std::vector<ReplicationSeries> reps{{{0.2, 0.1}, {0.0, 0.0}}, {{0.4}, {0.0}}};
  EXPECT_THROW(aggregate(reps), std::invalid_argument);
  AggregateAccumulator acc(2);
  const std::vector<double> three(3, 0.0);
  const std::vector<double> two(2, 0.0);
  EXPECT_THROW(acc.add(three, two), std::invalid_argument);
  EXPECT_THROW(acc.add(two, three), std::invalid_argument);
}

TEST(Aggregate, CumulativeRegretNondecreasing) {
  RandomStream rng(3);
  std::vector<ReplicationSeries> reps(4);
  for (auto& r : reps) {
    for (int k = 0; k < 100; ++k) {
      r.sq_error.push_back(rng.uniform());
      r.regret_increment.push_back(rng.uniform());
    }
  }
  const AggregateSeries a = aggregate(reps);
  for (std::size_t k = 1; k < a.mean_cum_regret.size(); ++k) {
    EXPECT_GE(a.mean_cum_regret[k], a.mean_cum_regret[k - 1]);
  }
}

TEST(Aggregate, PermutationInvariant) {
  const auto v = checks::aggregate_permutation(20, 4);
  EXPECT_TRUE(v.pass) << v.detail;
}

TEST(Aggregate, OraclePolicyRegretClosedForm) {
  const auto v = checks::oracle_policy_regret(1000);
  EXPECT_TRUE(v.pass) << v.detail;
}

TEST(Slope, PowerLaws) {
  const std::vector<std::int64_t> n{10, 100, 1000};
  const std::vector<double> y{std::pow(10.0, -0.5), std::pow(100.0, -0.5), std::pow(1000.0, -0.5)};
  const SlopeFit f = loglog_slope(n, y, 10, 1000);
  EXPECT_NEAR(f.slope, -0.5, 1e-14);
  EXPECT_NEAR(f.intercept, 0.0, 1e-13);
  EXPECT_NEAR(f.residual_rms, 0.0, 1e-13);
  EXPECT_EQ(f.points, 3u);

  std::vector<std::int64_t> m(50);
  std::iota(m.begin(), m.end(), 1);
  std::vector<double> z;
  for (auto k : m) z.push_back(3.7 * std::pow(static_cast<double>(k), 0.75));
  const SlopeFit g = loglog_slope(m, z, 1, 50);
  EXPECT_NEAR(g.slope, 0.75, 1e-13);
  EXPECT_NEAR(g.intercept, std::log10(3.7), 1e-13);

  const std::vector<double> flat(50, 2.0);
  EXPECT_NEAR(loglog_slope(m, flat, 1, 50).slope, 0.0, 1e-15);
}

TEST(Slope, WindowRestrictsPoints) {
  std::vector<std::int64_t> n(100);
  std::iota(n.begin(), n.end(), 1);
  std::vector<double> y;
  for (auto k : n) y.push_back(k <= 10 ? 1000.0 : 1.0 / static_cast<double>(k));
  const SlopeFit f = loglog_slope(n, y, 11, 100);
  EXPECT_NEAR(f.slope, -1.0, 1e-13);
  EXPECT_EQ(f.points, 90u);
  EXPECT_EQ(f.window_lo, 11);
  EXPECT_EQ(f.window_hi, 100);
}

TEST(Slope, Errors) {
  const std::vector<std::int64_t> n{1, 2, 3};
  EXPECT_THROW(loglog_slope(n, std::vector<double>{1.0, 0.0, 2.0}, 1, 3), std::invalid_argument);
  EXPECT_THROW(loglog_slope(n, std::vector<double>{1.0, -1.0, 2.0}, 1, 3), std::invalid_argument);
  EXPECT_THROW(loglog_slope(n, std::vector<double>{1.0, 2.0, 3.0}, 5, 9), std::invalid_argument);
  EXPECT_THROW(loglog_slope(n, std::vector<double>{1.0, 2.0}, 1, 3), std::invalid_argument);
  // Nonpositive values outside the window are ignored.
  EXPECT_NO_THROW(loglog_slope(n, std::vector<double>{0.0, 2.0, 3.0}, 2, 3));
}

TEST(Slope, RescaleInvariant) {
  const auto v = checks::slope_rescale_invariance(50, 5);
  EXPECT_TRUE(v.pass) << v.detail;
}

TEST(Slope, DefaultWindow) {
  EXPECT_EQ(default_fit_window(400000), (std::pair<std::int64_t, std::int64_t>{40000, 400000}));
  EXPECT_EQ(default_fit_window(5), (std::pair<std::int64_t, std::int64_t>{1, 5}));
}

TEST(Format, SeventeenSignificantDigits) {
  EXPECT_EQ(format_double(-0.5), "-5.0000000000000000e-01");
  EXPECT_EQ(format_double(0.0), "0.0000000000000000e+00");
  EXPECT_EQ(format_double(1e300), "1.0000000000000001e+300");
  // from_chars, not stod: stod reports subnormals as out of range.
  for (double v : {0.1, -2.0 / 3.0, 6.02214076e23, 5e-324}) {
    const std::string s = format_double(v);
    double back = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(res.ec, std::errc{}) << s;
    EXPECT_EQ(back, v) << s;
  }
}
