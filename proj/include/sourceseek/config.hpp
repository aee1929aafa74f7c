#ifndef SOURCESEEK_CONFIG_HPP
#define SOURCESEEK_CONFIG_HPP

#include <string>

#include <json.hpp>

#include "sourceseek/harness.hpp"

namespace seeker::config {

/// The documented defaults: 5000x5000 mm arena, EM field (alpha 2, sigma
/// 3 dB, 50 mm grid, seed 1, source centered), inertia-weight swarm with
/// omega1 = 3, lambda = 0.95, c1 = c2 = 2, v_max = 500 mm, n = 5, no world.
harness::ExperimentConfig default_config();

/// Parses a config document. Unknown keys are rejected; missing sections
/// take the documented defaults. Throws ConfigError with the offending key
/// path in the message.
harness::ExperimentConfig from_json(const nlohmann::json& j);

/// Effective-config echo; from_json(to_json(c)) reproduces c.
nlohmann::json to_json(const harness::ExperimentConfig& config);

harness::ExperimentConfig load_file(const std::string& path);
void save_file(const harness::ExperimentConfig& config, const std::string& path);

} // namespace seeker::config

#endif
