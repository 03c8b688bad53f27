#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "laud/core.hpp"
#include "laud/zero_shot.hpp"

namespace laud::test {

// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("laud-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string pad_id(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "p%05zu", i);
  return buf;
}

// Half "espresso"/"latte" items (positive), half "green tea"/"cookie" items.
// Texts are distinct so n-gram features separate the classes.
inline Pool separable_pool(std::size_t n, std::size_t offset = 0) {
  static const char* pos[] = {"espresso roast", "latte beans", "coffee blend", "mocha coffee"};
  static const char* neg[] = {"green tea leaves", "butter cookie", "apple juice", "dish soap"};
  std::vector<DataPoint> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const bool positive = i % 2 == 0;
    const std::string head = positive ? pos[(i / 2) % 4] : neg[(i / 2) % 4];
    pts.emplace_back(pad_id(i + offset), head + " no." + std::to_string(i + offset), positive);
  }
  return Pool(std::move(pts));
}

inline ZeroShotLexicon coffee_lexicon() {
  ZeroShotLexicon lex;
  lex.positive_terms = {{"coffee", 2.0}, {"espresso", 1.5}};
  lex.negative_terms = {{"tea", 1.5}, {"cookie", 1.0}};
  return lex;
}

}  // namespace laud::test
