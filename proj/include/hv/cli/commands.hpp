#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "hv/cli/problem.hpp"

namespace hv::cli {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr std::uint64_t kDefaultSamples = 100000;

/// Command-line overrides. Seed precedence: seed, then the experiment's
/// "seed", then env_seed (HV_SEED), then 0.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> env_seed;
  unsigned workers = 1;
};

// One report section per experiment. Every section carries "passed".
nlohmann::json cmd_spectra(const ProblemFile& pf, const nlohmann::json& args);
nlohmann::json cmd_prob(const ProblemFile& pf, const nlohmann::json& args);
nlohmann::json cmd_quantile(const ProblemFile& pf, const nlohmann::json& args);
nlohmann::json cmd_verify(const ProblemFile& pf, const nlohmann::json& args, const RunOptions& opts);
nlohmann::json cmd_roundtrip(const ProblemFile& pf, const nlohmann::json& args);
nlohmann::json cmd_chsh(const ProblemFile& pf, const nlohmann::json& args);

/// Runs every experiment of the given command. The report has the fields
/// tool, version, command, input_digest, results, passed and timing; all but
/// timing are a deterministic function of (file, command, options).
/// Throws LoadError when the file has no experiment for the command.
nlohmann::json run_command(const ProblemFile& pf, const std::string& command, const RunOptions& opts);

/// The report without its timing block.
nlohmann::json payload(const nlohmann::json& report);

/// CSV tables for spectra, quantile and verify reports. Throws LoadError for
/// other commands.
std::string to_csv(const nlohmann::json& report);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

}  // namespace hv::cli
