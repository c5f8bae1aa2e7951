#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace semsearch::detail {

/// Whole file as bytes; throws Error(kIo) naming the path.
std::string read_file(const std::filesystem::path& path);

/// Replaces `path` atomically enough for a single writer (write + rename).
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Line callback receives (1-based line number, line without '\n' or '\r').
template <typename F>
void for_each_line(std::string_view contents, F&& f) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t end = contents.find('\n', pos);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    f(++line_no, line);
    pos = end + 1;
  }
}

std::vector<std::string_view> split(std::string_view s, char sep);

std::string_view trim(std::string_view s);

std::uint32_t crc32(std::string_view bytes);

/// Prefixes `payload` with a little-endian format version and a CRC-32
/// of the payload.
std::string frame(std::uint32_t version, std::string_view payload);

/// Checks the header written by frame() and returns the payload. Throws
/// Error(kVersion) naming both versions, Error(kIo) naming `source` when
/// the file is truncated or the checksum does not match.
std::string_view unframe(std::string_view bytes, std::uint32_t expected_version,
                         const std::string& source);

/// True for blank lines and lines whose first non-space byte is '#'.
bool is_comment_or_blank(std::string_view line);

}  // namespace semsearch::detail
