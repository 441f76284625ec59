#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rllq/config.hpp"
#include "rllq/metrics.hpp"

namespace rllq {

/// Per-episode columns of one replication, shared by both algorithms.
/// For the baseline, phi1 is the plug-in gain after the refit and phi2 is 0.
struct ReplicationRows {
  std::vector<double> phi1;
  std::vector<double> phi2;
  std::vector<double> regret_increment;
  std::vector<double> sq_error;
  std::vector<double> sampled_gain;      // baseline only
  std::vector<double> sq_error_sampled;  // baseline only
  double final_phi1 = 0.0;
  std::int64_t flagged_episodes = 0;
};

/// Runs replication `index` of the configured algorithm.
ReplicationRows run_single_replication(const RunConfig& config, std::uint64_t index);

struct ExperimentSummary {
  Algorithm algo = Algorithm::rllq;
  AggregateSeries aggregate;
  std::optional<SlopeFit> mse_fit;
  std::optional<SlopeFit> regret_fit;
  std::pair<std::int64_t, std::int64_t> window{0, 0};
  double phi1_star = 0.0;
  double final_mean_phi1 = 0.0;
  std::int64_t flagged_episodes = 0;
  double wall_seconds = 0.0;
  unsigned workers = 1;
};

/// Worker count: explicit config value, else RLLQ_WORKERS, else 1.
unsigned resolve_workers(const RunConfig& config);

/// Executes every replication, `workers` at a time, and merges the results
/// in replication-index order. When `out_dir` is set the run writes
///   episodes.csv   replication,episode,phi1,phi2,regret_increment,cum_regret,sq_error
///   aggregate.csv  episode,mean_sq_error,mean_cum_regret
///   summary.txt    config echo and fitted slopes
///   run_info.txt   wall-clock time and worker count
///   baseline_gains.csv (baseline only) replication,episode,sampled_gain,sq_error_sampled
/// The first three (and baseline_gains.csv) are byte-identical for identical
/// configurations regardless of the worker count.
ExperimentSummary run_experiment(const RunConfig& config,
                                 const std::optional<std::filesystem::path>& out_dir);

/// Renders summary.txt.
std::string render_summary(const RunConfig& config, const ExperimentSummary& summary);

}  // namespace rllq
