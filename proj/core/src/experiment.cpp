#include "rllq/experiment.hpp"

#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rllq/actor_critic.hpp"
#include "rllq/baseline.hpp"
#include "rllq/format.hpp"

namespace rllq {

namespace {

ReplicationRows rows_from(const ReplicationResult& r) {
  ReplicationRows rows;
  const std::size_t n = r.records.size();
  rows.phi1.reserve(n);
  rows.phi2.reserve(n);
  rows.regret_increment.reserve(n);
  rows.sq_error.reserve(n);
  for (const EpisodeRecord& rec : r.records) {
    rows.phi1.push_back(rec.phi1);
    rows.phi2.push_back(rec.phi2);
    rows.regret_increment.push_back(rec.regret_increment);
    rows.sq_error.push_back(rec.sq_error);
  }
  rows.final_phi1 = r.final_state.phi1;
  rows.flagged_episodes = r.flagged_episodes;
  return rows;
}

ReplicationRows rows_from(const BaselineResult& r) {
  ReplicationRows rows;
  const std::size_t n = r.records.size();
  rows.phi1.reserve(n);
  rows.phi2.assign(n, 0.0);
  rows.regret_increment.reserve(n);
  rows.sq_error.reserve(n);
  rows.sampled_gain.reserve(n);
  rows.sq_error_sampled.reserve(n);
  for (const BaselineRecord& rec : r.records) {
    rows.phi1.push_back(rec.point_gain);
    rows.regret_increment.push_back(rec.regret_increment);
    rows.sq_error.push_back(rec.sq_error);
    rows.sampled_gain.push_back(rec.sampled_gain);
    rows.sq_error_sampled.push_back(rec.sq_error_sampled);
  }
  rows.final_phi1 = r.final_estimate.plug_in_gain();
  rows.flagged_episodes = r.flagged_episodes;
  return rows;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void check_stream(const std::ofstream& out, const std::filesystem::path& path) {
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string format_optional_slope(const std::optional<SlopeFit>& fit) {
  return fit ? format_double(fit->slope) : std::string("nan");
}

}  // namespace

ReplicationRows run_single_replication(const RunConfig& config, std::uint64_t index) {
  const SeedSpec seed{config.base_seed, index};
  if (config.algo == Algorithm::rllq) {
    return rows_from(run_replication(to_rllq_config(config), seed));
  }
  return rows_from(run_replication_baseline(to_baseline_config(config), seed));
}

unsigned resolve_workers(const RunConfig& config) {
  if (config.workers > 0) return config.workers;
  if (const char* env = std::getenv("RLLQ_WORKERS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<unsigned>(value);
  }
  return 1;
}

ExperimentSummary run_experiment(const RunConfig& config,
                                 const std::optional<std::filesystem::path>& out_dir) {
  validate_config(config);
  const auto started = std::chrono::steady_clock::now();

  ExperimentSummary summary;
  summary.algo = config.algo;
  summary.workers = resolve_workers(config);
  summary.phi1_star = optimal_gain(config.model);
  summary.window = fit_window(config);

  const bool baseline = config.algo == Algorithm::baseline;
  std::ofstream episodes_csv;
  std::ofstream gains_csv;
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    episodes_csv = open_output(*out_dir / "episodes.csv");
    episodes_csv << "replication,episode,phi1,phi2,regret_increment,cum_regret,sq_error\n";
    if (baseline) {
      gains_csv = open_output(*out_dir / "baseline_gains.csv");
      gains_csv << "replication,episode,sampled_gain,sq_error_sampled\n";
    }
  }

  const auto replications = static_cast<std::uint64_t>(config.replications);
  const std::size_t episodes = static_cast<std::size_t>(config.episodes);
  AggregateAccumulator acc(episodes);
  double final_phi1_sum = 0.0;

  // Batches of `workers` replications run concurrently; each batch is merged
  // in index order, so results never depend on scheduling.
  for (std::uint64_t first = 0; first < replications; first += summary.workers) {
    const std::uint64_t last = std::min<std::uint64_t>(replications, first + summary.workers);
    std::vector<ReplicationRows> batch(last - first);
    std::vector<std::exception_ptr> errors(batch.size());
    {
      std::vector<std::jthread> threads;
      for (std::uint64_t i = first; i < last; ++i) {
        threads.emplace_back([&, i] {
          try {
            batch[i - first] = run_single_replication(config, i);
          } catch (...) {
            errors[i - first] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }

    for (std::size_t j = 0; j < batch.size(); ++j) {
      const ReplicationRows& rows = batch[j];
      const std::uint64_t rep = first + j;
      acc.add(rows.sq_error, rows.regret_increment);
      final_phi1_sum += rows.final_phi1;
      summary.flagged_episodes += rows.flagged_episodes;
      if (!out_dir) continue;

      std::string line;
      double cumulative = 0.0;
      for (std::size_t k = 0; k < episodes; ++k) {
        cumulative += rows.regret_increment[k];
        line.clear();
        line += std::to_string(rep);
        line += ',';
        line += std::to_string(k + 1);
        for (double v : {rows.phi1[k], rows.phi2[k], rows.regret_increment[k], cumulative,
                         rows.sq_error[k]}) {
          line += ',';
          line += format_double(v);
        }
        line += '\n';
        episodes_csv << line;
        if (baseline) {
          gains_csv << rep << ',' << (k + 1) << ',' << format_double(rows.sampled_gain[k])
                    << ',' << format_double(rows.sq_error_sampled[k]) << '\n';
        }
      }
    }
  }

  summary.aggregate = acc.finish();
  summary.final_mean_phi1 = final_phi1_sum / static_cast<double>(replications);
  const auto& agg = summary.aggregate;
  try {
    summary.mse_fit = loglog_slope(agg.episodes, agg.mean_sq_error, summary.window.first,
                                   summary.window.second);
  } catch (const std::invalid_argument&) {
    summary.mse_fit.reset();
  }
  try {
    summary.regret_fit = loglog_slope(agg.episodes, agg.mean_cum_regret,
                                      summary.window.first, summary.window.second);
  } catch (const std::invalid_argument&) {
    summary.regret_fit.reset();
  }
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  if (out_dir) {
    check_stream(episodes_csv, *out_dir / "episodes.csv");
    if (baseline) check_stream(gains_csv, *out_dir / "baseline_gains.csv");

    const auto agg_path = *out_dir / "aggregate.csv";
    std::ofstream agg_csv = open_output(agg_path);
    agg_csv << "episode,mean_sq_error,mean_cum_regret\n";
    for (std::size_t k = 0; k < agg.episodes.size(); ++k) {
      agg_csv << agg.episodes[k] << ',' << format_double(agg.mean_sq_error[k]) << ','
              << format_double(agg.mean_cum_regret[k]) << '\n';
    }
    check_stream(agg_csv, agg_path);

    const auto summary_path = *out_dir / "summary.txt";
    std::ofstream summary_txt = open_output(summary_path);
    summary_txt << render_summary(config, summary);
    check_stream(summary_txt, summary_path);

    const auto info_path = *out_dir / "run_info.txt";
    std::ofstream info = open_output(info_path);
    info << "wall_clock_seconds=" << summary.wall_seconds << '\n'
         << "workers=" << summary.workers << '\n';
    check_stream(info, info_path);
  }
  return summary;
}

std::string render_summary(const RunConfig& config, const ExperimentSummary& s) {
  std::ostringstream out;
  out << echo_config(config);
  out << "[results]\n";
  out << "algo=" << to_string(s.algo) << '\n';
  out << "replications=" << s.aggregate.replications << '\n';
  out << "phi1_star=" << format_double(s.phi1_star) << '\n';
  out << "final_mean_phi1=" << format_double(s.final_mean_phi1) << '\n';
  out << "fit_window=" << s.window.first << ':' << s.window.second << '\n';
  out << "mse_slope=" << format_optional_slope(s.mse_fit) << '\n';
  out << "mse_intercept=" << (s.mse_fit ? format_double(s.mse_fit->intercept) : "nan") << '\n';
  out << "mse_residual_rms=" << (s.mse_fit ? format_double(s.mse_fit->residual_rms) : "nan")
      << '\n';
  out << "regret_slope=" << format_optional_slope(s.regret_fit) << '\n';
  out << "regret_intercept="
      << (s.regret_fit ? format_double(s.regret_fit->intercept) : "nan") << '\n';
  out << "regret_residual_rms="
      << (s.regret_fit ? format_double(s.regret_fit->residual_rms) : "nan") << '\n';
  out << "flagged_episodes=" << s.flagged_episodes << '\n';
  return out.str();
}

}  // namespace rllq
