#pragma once

#include <cstdint>
#include <filesystem>

#include "semsearch/engine.hpp"

namespace semsearch {

/// Version of the state directory layout and of every binary file in it.
inline constexpr std::uint32_t kStateFormatVersion = 1;

/// Writes `manifest.json`, `corpus.bin`, `vocab.bin`, `index.bin`, one
/// `models/<node>/<kind>.model` per trained classifier (the root node is
/// stored as `_root`) and copies of the language resources under
/// `resources/`. Every binary file starts with the format version and a
/// CRC-32 of its payload.
void save_state(const Engine& engine, const std::filesystem::path& dir);

/// Throws Error(kVersion) naming both versions on a version mismatch and
/// Error(kIo) naming the file when one is missing or corrupted.
Engine load_state(const std::filesystem::path& dir);

/// Directory of a node's models relative to `models/`.
std::filesystem::path model_dir_for(const std::string& node_key);

}  // namespace semsearch
