#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>

#include "semsearch/engine.hpp"

namespace semsearch {

struct EvalSettings {
  std::size_t k = 10;
  std::uint64_t seed = 1;
  double pct = 66.0;
};

/// Everything a command reads from the configuration file. Paths left
/// unset fall back to command-line arguments or the shipped data.
struct EngineConfig {
  std::optional<std::filesystem::path> corpus;
  std::optional<std::filesystem::path> state_dir;
  ResourcePaths resources;
  EngineOptions engine;
  EvalSettings eval;

  /// Throws Error(kUsage) naming the key of an out-of-range value.
  void validate() const;
};

/// INI text with sections [paths], [ensemble], [nb], [svm], [tree], [mlp],
/// [eval], [query]. Unknown sections or keys are rejected so typos do not
/// go unnoticed. Relative paths resolve against `base_dir`.
EngineConfig parse_config(std::string_view text, const std::string& source,
                          const std::filesystem::path& base_dir = {});
/// Throws Error(kIo) when the file is missing.
EngineConfig load_config(const std::filesystem::path& path);

/// The defaults in the same format, one commented line per key.
std::string default_config_text();

}  // namespace semsearch
