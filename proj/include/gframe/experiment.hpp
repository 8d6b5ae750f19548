#pragma once

// Batch experiments behind the command-line front end.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gframe/report.hpp"

namespace gframe {

enum class ExperimentKind { FrameAnalysis, IdentitySuite, PerturbationStudy, FiberizationDemo };

const char* to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment_kind(const std::string& name);

/// A config field that failed validation, e.g. {"/params/mu", "must be >= 0"}.
struct SchemaIssue {
  std::string path;
  std::string message;
};

/// Every schema violation in a parsed config (empty means valid). Relative
/// family files are resolved against base_dir and must exist.
std::vector<SchemaIssue> validate_config(const nlohmann::json& config,
                                         const std::filesystem::path& base_dir);

struct RunOptions {
  std::optional<double> tol;  // overrides the config tolerance
  int jobs = 0;               // 0 keeps the OpenMP default
  bool quiet = false;
};

struct RunReport {
  std::string tool_version;
  std::string config_digest;
  ExperimentKind kind = ExperimentKind::FrameAnalysis;
  std::uint64_t seed = 0;
  std::vector<VerificationReport> sections;
  double elapsed_ms = 0.0;

  bool passed() const;
  nlohmann::json to_json() const;
  std::string summary_table() const;
};

/// Runs a schema-valid config. Throws ConfigError on config problems.
RunReport run_experiment(const nlohmann::json& config, const std::filesystem::path& base_dir,
                         const RunOptions& options = {});

/// Process-level entry: loads, validates, runs, writes the JSON report and
/// text summary. Exit codes: 0 all checks pass, 1 a verification failed,
/// 2 config or IO error. Diagnostics go to err.
int run_config_file(const std::filesystem::path& config_path, const RunOptions& options,
                    std::ostream& out, std::ostream& err);

/// Writes config.json plus the family files it references into out_dir.
/// Output is a pure function of (kind, seed, dim). Throws ConfigError.
std::vector<std::filesystem::path> generate_fixtures(ExperimentKind kind, std::uint64_t seed,
                                                     std::size_t dim,
                                                     const std::filesystem::path& out_dir);

extern const char* const kToolVersion;

}  // namespace gframe
