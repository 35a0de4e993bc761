// Run configuration: JSON loading with embedded defaults (every key
// optional) and the fully resolved snapshot every report embeds.
#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "greenplace/simulator.hpp"

namespace greenplace {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Merges the given JSON onto the built-in defaults and validates.
SimConfig config_from_json(const nlohmann::json& j);

SimConfig load_config_file(const std::string& path);

// Throws ConfigError on invariant violations (weights, thresholds, rates).
void validate_config(const SimConfig& cfg);

// Every field, defaults included, for provenance.
nlohmann::json resolved_config_json(const SimConfig& cfg);

} // namespace greenplace
