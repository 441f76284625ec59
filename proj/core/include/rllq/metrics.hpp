#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace rllq {

/// Per-episode squared error and regret increment of one replication.
struct ReplicationSeries {
  std::vector<double> sq_error;
  std::vector<double> regret_increment;
};

/// Replication averages, episode index n = 1..N.
struct AggregateSeries {
  std::vector<std::int64_t> episodes;
  std::vector<double> mean_sq_error;
  std::vector<double> mean_cum_regret;
  std::size_t replications = 0;
};

/// Running sums for AggregateSeries. Replications must be added in a fixed
/// order for bit-reproducible means.
class AggregateAccumulator {
 public:
  explicit AggregateAccumulator(std::size_t episodes);

  /// Throws std::invalid_argument on a length mismatch.
  void add(std::span<const double> sq_error, std::span<const double> regret_increment);
  AggregateSeries finish() const;

 private:
  std::vector<double> sq_error_sum_;
  std::vector<double> cum_regret_sum_;
  std::size_t replications_ = 0;
};

/// Means over replications, summed in the given order.
AggregateSeries aggregate(std::span<const ReplicationSeries> replications);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::int64_t window_lo = 0;
  std::int64_t window_hi = 0;
  double residual_rms = 0.0;
  std::size_t points = 0;
};

/// OLS of log10(y_n) on log10(n) over lo <= n <= hi. Throws
/// std::invalid_argument on an empty window or a nonpositive y inside it.
SlopeFit loglog_slope(std::span<const std::int64_t> n, std::span<const double> y,
                      std::int64_t lo, std::int64_t hi);

/// Default fit window [N/10, N].
std::pair<std::int64_t, std::int64_t> default_fit_window(std::int64_t episodes);

}  // namespace rllq
