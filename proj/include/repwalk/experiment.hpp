#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "repwalk/serialization.hpp"

namespace repwalk {

inline constexpr const char* kArtifactVersion = "1.0.0";

/// Experiment kinds accepted in configs. The CLI subcommand `gks-check`
/// maps to kind "gks".
inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"exact",       "transfer",     "mcmc", "recursion", "tilt", "gks",
                                              "phase-diagram", "scaling-sweep"};
  return kinds;
}

struct ExperimentConfig {
  std::string kind;
  /// Kind-specific parameter block; missing keys take documented defaults.
  Json params = Json::object();
  std::uint64_t seed = 0;
  /// 0 keeps the OpenMP default.
  int workers = 0;
  std::filesystem::path out = "results";
};

/// YAML document to JSON (scalars become integers, reals, booleans or strings).
Json yaml_to_json(const std::string& text);

/// Reads YAML, or JSON when the file ends in .json or starts with '{'.
/// Top-level keys: kind, seed, workers, out, params.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig config_from_json(const Json& j);

/// 16 hex digits over the canonical JSON of (kind, params, seed).
std::string config_hash(const ExperimentConfig& cfg);

/// "# key: value" lines for CSV files; the timestamp is the last line.
std::string csv_metadata(const ExperimentConfig& cfg, const std::string& rng);
/// Two JSON lines for JSONL files: metadata, then the timestamp alone.
std::string jsonl_metadata(const ExperimentConfig& cfg, const std::string& rng);

struct RunOutcome {
  /// 0 success, 1 certification failure, 2 validation failure.
  int exit_code = 0;
  std::vector<std::filesystem::path> files;
  std::string message;
};

/// Validates every parameter before computing; output files are written only
/// after the computation finished, so validation failures leave none behind.
RunOutcome run(const ExperimentConfig& cfg, std::ostream& log);

/// CSV columns per kind, for --help.
std::string output_columns_help();

}  // namespace repwalk
