#pragma once

#include "afshar/scenario.hpp"

#include <string>

namespace afshar {

/// Parsed config plus the exact bytes it came from; the hash binds results
/// to those bytes.
struct LoadedConfig {
    ExperimentConfig config;
    std::string raw;
    std::string hash;
    std::string path;
};

/// FNV-1a 64-bit hash, as 16 lowercase hex digits.
std::string config_hash_hex(const std::string& bytes);

/// Parses the INI-style experiment config ([section] key = value lines,
/// '#' comments). Unknown sections or keys are rejected so typos cannot
/// silently fall back to defaults. Throws DomainError with the offending
/// field named.
ExperimentConfig parse_config(const std::string& text);

/// Reads, parses and validates a config file. Throws IoError if the file
/// cannot be read.
LoadedConfig load_config(const std::string& path);

/// Serializes a config back to the file format (used for snapshots written
/// from in-memory configs; file-based runs snapshot the raw bytes).
std::string format_config(const ExperimentConfig& config);

Scenario make_scenario(const ExperimentConfig& config, ScenarioId id);

} // namespace afshar
