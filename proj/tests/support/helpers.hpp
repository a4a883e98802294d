#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cmapsum/types.hpp"

#ifndef CMAPSUM_TESTS_DATA_DIR
#define CMAPSUM_TESTS_DATA_DIR ""
#endif
#ifndef CMAPSUM_CORE_DATA_DIR
#define CMAPSUM_CORE_DATA_DIR ""
#endif

namespace testsupport {

inline std::filesystem::path data_dir() { return CMAPSUM_TESTS_DATA_DIR; }
inline std::filesystem::path core_data_dir() { return CMAPSUM_CORE_DATA_DIR; }

// Point the library at the in-tree resources before anything loads them.
struct DataDirGuard {
  DataDirGuard() { ::setenv("CMAPSUM_DATA_DIR", CMAPSUM_CORE_DATA_DIR, 0); }
};
inline const DataDirGuard data_dir_guard{};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Unique scratch directory per test binary run, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("cmapsum_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Exhaustive best connected subgraph: max total score over nonempty
// connected vertex subsets of size <= limit. Test-only oracle, O(2^n).
double best_connected_subgraph_score(const cmapsum::ConceptMap& map,
                                     const std::map<std::string, double>& scores,
                                     int limit);

}  // namespace testsupport
