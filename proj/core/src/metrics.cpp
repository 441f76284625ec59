#include "rllq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace rllq {

AggregateAccumulator::AggregateAccumulator(std::size_t episodes)
    : sq_error_sum_(episodes, 0.0), cum_regret_sum_(episodes, 0.0) {}

void AggregateAccumulator::add(std::span<const double> sq_error,
                               std::span<const double> regret_increment) {
  if (sq_error.size() != sq_error_sum_.size() ||
      regret_increment.size() != cum_regret_sum_.size()) {
    throw std::invalid_argument("aggregate: replication length mismatch");
  }
  double cumulative = 0.0;
  for (std::size_t i = 0; i < sq_error.size(); ++i) {
    cumulative += regret_increment[i];
    sq_error_sum_[i] += sq_error[i];
    cum_regret_sum_[i] += cumulative;
  }
  ++replications_;
}

AggregateSeries AggregateAccumulator::finish() const {
  AggregateSeries out;
  const std::size_t n = sq_error_sum_.size();
  out.replications = replications_;
  out.episodes.resize(n);
  out.mean_sq_error.resize(n);
  out.mean_cum_regret.resize(n);
  const double scale = replications_ > 0 ? 1.0 / static_cast<double>(replications_) : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.episodes[i] = static_cast<std::int64_t>(i) + 1;
    out.mean_sq_error[i] = sq_error_sum_[i] * scale;
    out.mean_cum_regret[i] = cum_regret_sum_[i] * scale;
  }
  return out;
}

AggregateSeries aggregate(std::span<const ReplicationSeries> replications) {
  if (replications.empty()) throw std::invalid_argument("aggregate: no replications");
  AggregateAccumulator acc(replications.front().sq_error.size());
  for (const auto& rep : replications) acc.add(rep.sq_error, rep.regret_increment);
  return acc.finish();
}

SlopeFit loglog_slope(std::span<const std::int64_t> n, std::span<const double> y,
                      std::int64_t lo, std::int64_t hi) {
  if (n.size() != y.size()) throw std::invalid_argument("loglog_slope: length mismatch");
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] < lo || n[i] > hi) continue;
    if (!(y[i] > 0.0) || !std::isfinite(y[i])) {
      throw std::invalid_argument("loglog_slope: nonpositive value in fit window");
    }
    lx.push_back(std::log10(static_cast<double>(n[i])));
    ly.push_back(std::log10(y[i]));
  }
  if (lx.size() < 2) throw std::invalid_argument("loglog_slope: fit window needs >= 2 points");

  const double count = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("loglog_slope: degenerate window");

  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.window_lo = lo;
  fit.window_hi = hi;
  fit.points = lx.size();
  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / count);
  return fit;
}

std::pair<std::int64_t, std::int64_t> default_fit_window(std::int64_t episodes) {
  return {std::max<std::int64_t>(1, episodes / 10), episodes};
}

}  // namespace rllq
