#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <system_error>

namespace testutil {

// Set from --fixtures=<dir> in main; defaults to the in-tree location so a
// bare ./unit_tests run from the repo root still finds the golden files.
extern std::string g_fixtures_dir;

inline std::filesystem::path fixtures_dir() { return g_fixtures_dir; }

inline std::filesystem::path make_temp_dir(const std::string& stem) {
  static std::mt19937_64 engine(std::random_device{}());
  const auto base = std::filesystem::temp_directory_path();
  for (;;) {
    const auto candidate = base / (stem + "-" + std::to_string(engine()));
    if (std::filesystem::create_directories(candidate)) return candidate;
  }
}

// Self-cleaning scratch directory for one test case.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& stem) : path(make_temp_dir(stem)) {}
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

inline void write_file(const std::filesystem::path& path,
                       const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace testutil
