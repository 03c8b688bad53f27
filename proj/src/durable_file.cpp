#include "laud/durable_file.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "laud/errors.hpp"

namespace laud {

namespace {
[[noreturn]] void fail(const std::string& what) { throw DataError(what + ": " + std::strerror(errno)); }
}  // namespace

LineScan scan_lines(const std::filesystem::path& path) {
  LineScan scan;
  std::ifstream in(path, std::ios::binary);
  if (!in) return scan;
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t start = 0;
  while (start < data.size()) {
    const auto nl = data.find('\n', start);
    if (nl == std::string::npos) {
      scan.torn_tail = true;
      break;
    }
    scan.lines.push_back(data.substr(start, nl - start));
    scan.offsets.push_back(start);
    start = nl + 1;
  }
  scan.complete_bytes = start;
  return scan;
}

int open_append(const std::filesystem::path& path) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) fail("cannot open " + path.string());
  return fd;
}

void write_durably(int fd, std::string_view bytes) {
  while (!bytes.empty()) {
    const auto n = ::write(fd, bytes.data(), bytes.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("write failed");
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
  if (::fsync(fd) != 0) fail("fsync failed");
}

void truncate_file(int fd, std::uint64_t length) {
  if (::ftruncate(fd, static_cast<off_t>(length)) != 0) fail("truncate failed");
  if (::fsync(fd) != 0) fail("fsync failed");
}

void close_fd(int fd) noexcept {
  if (fd >= 0) ::close(fd);
}

void replace_file_atomically(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) fail("cannot open " + tmp.string());
  try {
    write_durably(fd, contents);
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  if (::rename(tmp.c_str(), path.c_str()) != 0) fail("rename to " + path.string() + " failed");
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  const int dfd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (dfd >= 0) {
    ::fsync(dfd);
    ::close(dfd);
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace laud
