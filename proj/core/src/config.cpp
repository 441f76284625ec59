#include "rllq/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "rllq/format.hpp"
#include "rllq/metrics.hpp"

namespace rllq {

namespace {

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError(key, "expected a finite number, got '" + text + "'");
  }
  return value;
}

template <typename Int>
Int parse_integer(const std::string& key, const std::string& text) {
  Int value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(key, "expected an integer, got '" + text + "'");
  }
  return value;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;  // empty: not echoed
};

Field real(std::string key, double RunConfig::*member) {
  return {key,
          [key, member](RunConfig& c, const std::string& v) { c.*member = parse_double(key, v); },
          [member](const RunConfig& c) { return format_double(c.*member); }};
}

template <typename Owner, typename Member>
Field nested_real(std::string key, Owner RunConfig::*owner, Member Owner::*member) {
  return {key,
          [key, owner, member](RunConfig& c, const std::string& v) {
            c.*owner.*member = parse_double(key, v);
          },
          [owner, member](const RunConfig& c) { return format_double(c.*owner.*member); }};
}

template <typename Int>
Field integer(std::string key, Int RunConfig::*member) {
  return {key,
          [key, member](RunConfig& c, const std::string& v) {
            c.*member = parse_integer<Int>(key, v);
          },
          [member](const RunConfig& c) { return std::to_string(c.*member); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(nested_real("model.A", &RunConfig::model, &ModelParams::A));
    f.push_back(nested_real("model.B", &RunConfig::model, &ModelParams::B));
    f.push_back(nested_real("model.C", &RunConfig::model, &ModelParams::C));
    f.push_back(nested_real("model.D", &RunConfig::model, &ModelParams::D));
    f.push_back(nested_real("model.Q", &RunConfig::model, &ModelParams::Q));
    f.push_back(nested_real("model.H", &RunConfig::model, &ModelParams::H));
    f.push_back(nested_real("model.x0", &RunConfig::model, &ModelParams::x0));
    f.push_back(nested_real("model.T", &RunConfig::model, &ModelParams::T));

    f.push_back({"run.algo",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "rllq") c.algo = Algorithm::rllq;
                   else if (v == "baseline") c.algo = Algorithm::baseline;
                   else throw ConfigError("run.algo", "expected rllq or baseline, got '" + v + "'");
                 },
                 [](const RunConfig& c) { return std::string(to_string(c.algo)); }});
    f.push_back(integer("run.episodes", &RunConfig::episodes));
    f.push_back(integer("run.replications", &RunConfig::replications));
    f.push_back(real("run.dt", &RunConfig::dt));
    f.push_back(integer("run.seed", &RunConfig::base_seed));
    f.push_back({"run.workers",
                 [](RunConfig& c, const std::string& v) {
                   c.workers = parse_integer<unsigned>("run.workers", v);
                 },
                 {}});
    f.push_back(real("run.phi1_init", &RunConfig::phi1_init));

    f.push_back({"schedule.mode",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "experimental") c.schedule.mode = ScheduleMode::experimental;
                   else if (v == "theoretical") c.schedule.mode = ScheduleMode::theoretical;
                   else throw ConfigError("schedule.mode",
                                          "expected experimental or theoretical, got '" + v + "'");
                 },
                 [](const RunConfig& c) {
                   return std::string(c.schedule.mode == ScheduleMode::experimental
                                          ? "experimental"
                                          : "theoretical");
                 }});
    f.push_back(nested_real("schedule.alpha", &RunConfig::schedule, &Schedule::alpha));
    f.push_back(nested_real("schedule.beta", &RunConfig::schedule, &Schedule::beta));
    f.push_back(nested_real("schedule.a_coeff", &RunConfig::schedule, &Schedule::a_coeff));
    f.push_back(nested_real("schedule.a_exp", &RunConfig::schedule, &Schedule::a_exp));
    f.push_back(nested_real("schedule.b_coeff", &RunConfig::schedule, &Schedule::b_coeff));
    f.push_back(nested_real("schedule.b_exp", &RunConfig::schedule, &Schedule::b_exp));
    f.push_back(nested_real("schedule.projection_lo", &RunConfig::schedule, &Schedule::projection_lo));
    f.push_back(nested_real("schedule.projection_hi", &RunConfig::schedule, &Schedule::projection_hi));

    f.push_back({"critic.mode",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "fixed") c.critic_mode = CriticMode::fixed;
                   else if (v == "learn") c.critic_mode = CriticMode::learn;
                   else throw ConfigError("critic.mode", "expected fixed or learn, got '" + v + "'");
                 },
                 [](const RunConfig& c) {
                   return std::string(c.critic_mode == CriticMode::fixed ? "fixed" : "learn");
                 }});
    f.push_back(real("critic.gamma", &RunConfig::gamma));
    f.push_back(nested_real("critic.c1", &RunConfig::bounds, &CriticBounds::c1));
    f.push_back(nested_real("critic.c2", &RunConfig::bounds, &CriticBounds::c2));
    f.push_back(nested_real("critic.c3", &RunConfig::bounds, &CriticBounds::c3));
    f.push_back(real("critic.theta1", &RunConfig::theta1));
    f.push_back(real("critic.theta2", &RunConfig::theta2));

    f.push_back(nested_real("baseline.A0", &RunConfig::baseline_initial, &EstimatedModel::A));
    f.push_back(nested_real("baseline.B0", &RunConfig::baseline_initial, &EstimatedModel::B));
    f.push_back(nested_real("baseline.C0", &RunConfig::baseline_initial, &EstimatedModel::C));
    f.push_back(nested_real("baseline.D0", &RunConfig::baseline_initial, &EstimatedModel::D));
    f.push_back(real("baseline.bootstrap_gain_1", &RunConfig::bootstrap_gain_first));
    f.push_back(real("baseline.bootstrap_gain_2", &RunConfig::bootstrap_gain_second));
    f.push_back({"baseline.drift",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "corrected") c.baseline_drift = DriftTarget::corrected;
                   else if (v == "log_return") c.baseline_drift = DriftTarget::log_return;
                   else throw ConfigError("baseline.drift",
                                          "expected corrected or log_return, got '" + v + "'");
                 },
                 [](const RunConfig& c) {
                   return std::string(c.baseline_drift == DriftTarget::corrected ? "corrected"
                                                                                 : "log_return");
                 }});

    f.push_back({"output.dir",
                 [](RunConfig& c, const std::string& v) { c.output_dir = v; },
                 {}});
    f.push_back(integer("output.fit_lo", &RunConfig::fit_lo));
    f.push_back(integer("output.fit_hi", &RunConfig::fit_hi));
    return f;
  }();
  return table;
}

}  // namespace

ConfigError::ConfigError(std::string key, const std::string& message)
    : std::runtime_error(key.empty() ? message : key + ": " + message),
      key_(std::move(key)) {}

const char* to_string(Algorithm algo) {
  return algo == Algorithm::rllq ? "rllq" : "baseline";
}

void set_config_value(RunConfig& config, const std::string& key,
                      const std::string& value) {
  for (const Field& field : fields()) {
    if (field.key == key) {
      field.set(config, trim(value));
      return;
    }
  }
  throw ConfigError(key, "unknown configuration key");
}

RunConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", std::string("parse error: ") + e.what());
  }
  RunConfig config;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError(section, "key outside of a section");
    }
    // Written by run summaries; lets a summary.txt be fed back as a config.
    if (section == "results") continue;
    for (const auto& [name, leaf] : body) {
      set_config_value(config, section + "." + name, leaf.data());
    }
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  return parse_config(in);
}

void validate_config(const RunConfig& c) {
  try {
    c.model.validate();
  } catch (const std::invalid_argument& e) {
    std::string key = "model";
    const std::string what = e.what();
    for (const char* name : {"Q", "H", "T", "x0", "D"}) {
      if (what.find(std::string(name) + " must") != std::string::npos) {
        key = std::string("model.") + name;
        break;
      }
    }
    throw ConfigError(key, what);
  }
  if (c.episodes < 0) throw ConfigError("run.episodes", "must be >= 0");
  if (c.replications < 1) throw ConfigError("run.replications", "must be >= 1");
  if (!(c.dt > 0.0)) throw ConfigError("run.dt", "must be > 0");
  if (c.dt > c.model.T) throw ConfigError("run.dt", "must not exceed model.T");
  const double steps = std::round(c.model.T / c.dt);
  if (std::abs(steps * c.dt - c.model.T) > 1e-9 * c.model.T) {
    throw ConfigError("run.dt", "must divide model.T");
  }
  if (c.algo == Algorithm::baseline && !(c.model.x0 > 0.0)) {
    throw ConfigError("model.x0", "baseline requires a positive initial state");
  }
  const Schedule& s = c.schedule;
  if (s.mode == ScheduleMode::theoretical) {
    if (!(s.alpha > 0.0)) throw ConfigError("schedule.alpha", "must be > 0");
    if (!(s.beta > 0.0)) throw ConfigError("schedule.beta", "must be > 0");
  } else {
    if (!(s.a_coeff > 0.0)) throw ConfigError("schedule.a_coeff", "must be > 0");
    if (!(s.a_exp > 0.0)) throw ConfigError("schedule.a_exp", "must be > 0");
    if (!(s.b_coeff > 0.0)) throw ConfigError("schedule.b_coeff", "must be > 0");
    if (!(s.b_exp >= 0.0)) throw ConfigError("schedule.b_exp", "must be >= 0");
    if (!(s.projection_lo <= s.projection_hi)) {
      throw ConfigError("schedule.projection_lo", "must not exceed schedule.projection_hi");
    }
  }
  if (!(c.gamma >= 0.0)) throw ConfigError("critic.gamma", "must be >= 0");
  if (!(c.bounds.c1 > 0.0)) throw ConfigError("critic.c1", "must be > 0");
  if (!(c.bounds.c2 >= 1.0)) throw ConfigError("critic.c2", "must be >= 1");
  if (!(c.bounds.c3 > 0.0)) throw ConfigError("critic.c3", "must be > 0");
  if (c.theta1 < 1.0 / c.bounds.c2 || c.theta1 > c.bounds.c2) {
    throw ConfigError("critic.theta1", "must lie in [1/c2, c2]");
  }
  if (std::abs(c.theta2) > c.bounds.c3) {
    throw ConfigError("critic.theta2", "must satisfy |theta2| <= c3");
  }
  if (!(c.baseline_initial.D > 0.0)) throw ConfigError("baseline.D0", "must be > 0");
  if (c.bootstrap_gain_first == c.bootstrap_gain_second) {
    throw ConfigError("baseline.bootstrap_gain_2", "must differ from bootstrap_gain_1");
  }
  if (c.fit_lo < 0) throw ConfigError("output.fit_lo", "must be >= 0");
  if (c.fit_hi < 0) throw ConfigError("output.fit_hi", "must be >= 0");
  if (c.fit_hi != 0 && c.fit_lo > c.fit_hi) {
    throw ConfigError("output.fit_lo", "must not exceed output.fit_hi");
  }
}

std::string echo_config(const RunConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const Field& field : fields()) {
    if (!field.get) continue;
    const auto dot = field.key.find('.');
    const std::string this_section = field.key.substr(0, dot);
    if (this_section != section) {
      out << '[' << this_section << "]\n";
      section = this_section;
    }
    out << field.key.substr(dot + 1) << '=' << field.get(config) << '\n';
  }
  return out.str();
}

std::pair<std::int64_t, std::int64_t> fit_window(const RunConfig& c) {
  const auto [lo, hi] = default_fit_window(c.episodes);
  return {c.fit_lo > 0 ? c.fit_lo : lo, c.fit_hi > 0 ? c.fit_hi : hi};
}

RllqConfig to_rllq_config(const RunConfig& c) {
  RllqConfig out;
  out.model = c.model;
  out.schedule = c.schedule;
  out.critic_mode = c.critic_mode;
  out.bounds = c.bounds;
  out.theta1 = c.theta1;
  out.theta2 = c.theta2;
  out.gamma = c.gamma;
  out.phi1_init = c.phi1_init;
  out.dt = c.dt;
  out.episodes = c.episodes;
  return out;
}

BaselineConfig to_baseline_config(const RunConfig& c) {
  BaselineConfig out;
  out.model = c.model;
  out.initial = c.baseline_initial;
  out.bootstrap_gain_first = c.bootstrap_gain_first;
  out.bootstrap_gain_second = c.bootstrap_gain_second;
  out.drift_target = c.baseline_drift;
  out.dt = c.dt;
  out.episodes = c.episodes;
  return out;
}

}  // namespace rllq
