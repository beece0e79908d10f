#pragma once

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "adrlab/config.hpp"

namespace adrlab {

inline constexpr const char* kToolVersion = "0.1.0";

struct ExecuteOptions {
  std::optional<std::filesystem::path> out_dir;  // overrides the config's output.dir
  unsigned threads = 1;
  bool override_stability = false;
  std::ostream* out = nullptr;  // progress and summaries; nullptr silences them
  std::ostream* err = nullptr;  // error message on failure
};

/// Exit status for an exception escaping a run: 1 validation, 2 numeric
/// divergence, 3 stability rejection.
int exit_code_for(const std::exception& e);

/// Runs one configuration and writes its artifacts plus manifest.json into
/// the output directory. Returns the exit status; never throws for errors
/// raised by the run itself.
int execute(const RunConfig& config, const ExecuteOptions& options = {});

/// Manifest for a run that failed before a configuration was available.
void write_failure_manifest(const std::filesystem::path& out_dir, const std::exception& e,
                            const std::optional<nlohmann::json>& config = std::nullopt);

}  // namespace adrlab
