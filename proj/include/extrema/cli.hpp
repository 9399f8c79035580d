#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "extrema/experiments.hpp"

namespace extrema {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitAssertion = 3;

/*!
 * Parse a JSON config document. When `require_core` is set the fields map,
 * observable, n, trials and seed must be present. Fields that the resolved
 * system does not use are reported through `warnings`.
 * Throws ConfigurationError naming the offending field.
 */
ExperimentConfig config_from_json_text(const std::string& text, bool require_core,
                                       std::vector<std::string>* warnings = nullptr);

/// Reads and parses a config file (require_core = true).
ExperimentConfig load_config(const std::string& path, std::vector<std::string>* warnings = nullptr);

/// Canonical JSON of the resolved config; reloading it gives the same config.
std::string config_to_json(const ExperimentConfig& cfg);

/// FNV-1a of the canonical JSON without threads and output_dir, which do
/// not affect results.
std::uint64_t config_hash(const ExperimentConfig& cfg);

/// Entry point; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace extrema
