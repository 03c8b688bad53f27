#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace laud {

/// Splits a newline-delimited file into complete lines with their byte
/// offsets; a trailing fragment without '\n' is reported separately.
struct LineScan {
  std::vector<std::string> lines;
  std::vector<std::uint64_t> offsets;
  std::uint64_t complete_bytes = 0;  // length covered by complete lines
  bool torn_tail = false;
};
LineScan scan_lines(const std::filesystem::path& path);

/// Opens for append, creating the file if needed. Returns the descriptor.
int open_append(const std::filesystem::path& path);
/// write(2) the whole buffer then fsync; throws DataError on failure.
void write_durably(int fd, std::string_view bytes);
void truncate_file(int fd, std::uint64_t length);
void close_fd(int fd) noexcept;
/// Write to a temporary sibling, fsync, rename over `path`.
void replace_file_atomically(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace laud
