#pragma once

// Shared helpers for the test suite: deterministic matrix generators, a
// scratch-directory guard, and a runner for the CLI binary.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "glyph/char_matrix.hpp"

namespace testutil {

// Seeded random matrix with roughly `density` ink fraction.
inline glyph::CharMatrix random_matrix(std::uint64_t seed, double density) {
  std::mt19937_64 rng(seed);
  glyph::CharMatrix m;
  const std::uint64_t cut =
      static_cast<std::uint64_t>(density * 1000000.0);
  for (int l = 1; l <= glyph::CharMatrix::kSize; ++l)
    for (int mcol = 1; mcol <= glyph::CharMatrix::kSize; ++mcol)
      if (rng() % 1000000 < cut) m.set_ink(l, mcol);
  return m;
}

inline glyph::CharMatrix single_pixel(int l, int m) {
  glyph::CharMatrix mat;
  mat.set_ink(l, m);
  return mat;
}

// Self-deleting scratch directory under the system temp root.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    auto base = std::filesystem::temp_directory_path();
    for (int i = 0;; ++i) {
      path_ = base / (tag + "-" + std::to_string(::getpid()) + "-" +
                      std::to_string(i));
      if (std::filesystem::create_directory(path_)) break;
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the glyph binary with the given argument string; stdout/stderr are
// captured through temp files.
inline CliResult run_cli(const std::string& args,
                         const std::filesystem::path& scratch) {
  const auto out_path = scratch / "cli_stdout.txt";
  const auto err_path = scratch / "cli_stderr.txt";
  const std::string cmd = std::string(GLYPH_CLI_PATH) + " " + args + " > " +
                          out_path.string() + " 2> " + err_path.string();
  const int status = std::system(cmd.c_str());
  CliResult res;
  if (status >= 0 && WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
  res.out = read_file(out_path);
  res.err = read_file(err_path);
  std::filesystem::remove(out_path);
  std::filesystem::remove(err_path);
  return res;
}

}  // namespace testutil
