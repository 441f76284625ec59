#pragma once

// Experiment configuration. Files are INI documents whose sections mirror
// the blocks below; every key is optional and defaults to the reference
// experiment (all-ones model, dt = 0.01, gamma = 1, 400k episodes).
//
//   [model]     A B C D Q H x0 T
//   [run]       algo episodes replications dt seed workers phi1_init
//   [schedule]  mode alpha beta a_coeff a_exp b_coeff b_exp projection_lo projection_hi
//   [critic]    mode gamma c1 c2 c3 theta1 theta2
//   [baseline]  A0 B0 C0 D0 bootstrap_gain_1 bootstrap_gain_2 drift
//   [output]    dir fit_lo fit_hi

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "rllq/actor_critic.hpp"
#include "rllq/baseline.hpp"
#include "rllq/model_oracle.hpp"

namespace rllq {

enum class Algorithm { rllq, baseline };

struct RunConfig {
  ModelParams model;

  Algorithm algo = Algorithm::rllq;
  std::int64_t episodes = 400000;
  std::int64_t replications = 120;
  double dt = 0.01;
  std::uint64_t base_seed = 20240601;
  unsigned workers = 0;  // 0: RLLQ_WORKERS or 1
  double phi1_init = -0.5;

  Schedule schedule;

  CriticMode critic_mode = CriticMode::fixed;
  double gamma = 1.0;
  CriticBounds bounds;
  double theta1 = 1.0;
  double theta2 = 0.0;

  EstimatedModel baseline_initial;
  double bootstrap_gain_first = -0.5;
  double bootstrap_gain_second = -1.5;
  DriftTarget baseline_drift = DriftTarget::log_return;

  std::filesystem::path output_dir = "rllq_out";
  std::int64_t fit_lo = 0;  // 0: N / 10
  std::int64_t fit_hi = 0;  // 0: N
};

/// Invalid or unparseable configuration; `key()` names the offending entry
/// (section.name) when there is one.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError naming the first violated key.
void validate_config(const RunConfig& config);

/// Applies a single `section.name=value` override.
void set_config_value(RunConfig& config, const std::string& key,
                      const std::string& value);

/// Canonical INI rendering of every key that affects results (worker count
/// and output directory are omitted).
std::string echo_config(const RunConfig& config);

std::pair<std::int64_t, std::int64_t> fit_window(const RunConfig& config);

RllqConfig to_rllq_config(const RunConfig& config);
BaselineConfig to_baseline_config(const RunConfig& config);

const char* to_string(Algorithm algo);

}  // namespace rllq
