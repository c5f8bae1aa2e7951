#include "io_util.hpp"

#include <fstream>

#include <boost/crc.hpp>
#include <sstream>

#include "semsearch/error.hpp"

namespace semsearch::detail {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t end = s.find(sep, pos);
    if (end == std::string_view::npos) {
      parts.push_back(s.substr(pos));
      return parts;
    }
    parts.push_back(s.substr(pos, end - pos));
    pos = end + 1;
  }
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

std::uint32_t get_u32(std::string_view in) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[i])) << (8 * i);
  return v;
}

}  // namespace

std::uint32_t crc32(std::string_view bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

std::string frame(std::uint32_t version, std::string_view payload) {
  std::string out;
  out.reserve(payload.size() + 8);
  put_u32(out, version);
  put_u32(out, crc32(payload));
  out.append(payload);
  return out;
}

std::string_view unframe(std::string_view bytes, std::uint32_t expected_version,
                         const std::string& source) {
  if (bytes.size() < 8) throw Error(ErrorCode::kIo, source + ": truncated header");
  const std::uint32_t version = get_u32(bytes);
  if (version != expected_version) {
    throw Error(ErrorCode::kVersion, source + ": format version " + std::to_string(version) +
                                         ", this build reads version " +
                                         std::to_string(expected_version));
  }
  const std::string_view payload = bytes.substr(8);
  if (get_u32(bytes.substr(4)) != crc32(payload)) {
    throw Error(ErrorCode::kIo, source + ": checksum mismatch (corrupted file)");
  }
  return payload;
}

bool is_comment_or_blank(std::string_view line) {
  const std::string_view t = trim(line);
  return t.empty() || t.front() == '#';
}

}  // namespace semsearch::detail
