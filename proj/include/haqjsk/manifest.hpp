#ifndef HAQJSK_MANIFEST_HPP
#define HAQJSK_MANIFEST_HPP

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "haqjsk/kernels.hpp"

namespace haqjsk {

inline constexpr const char* kToolVersion = "1.0.0";

/// Reproducibility record written next to every CLI output: command line,
/// config echo, dataset content fingerprint, per-stage wall-clock timings.
struct RunManifest {
  std::string command_line;
  std::string dataset_dir;
  std::string dataset_name;
  std::uint64_t dataset_fingerprint = 0;
  KernelConfig config;
  std::vector<std::pair<std::string, double>> stage_seconds;
  double total_seconds = 0.0;
  std::vector<std::string> outputs;
};

/// FNV-1a over the concatenated bytes of the bundle's three required files.
std::uint64_t dataset_fingerprint(const std::filesystem::path& dir,
                                  const std::string& name);

void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& path);

class StageTimer {
 public:
  explicit StageTimer(RunManifest& manifest) : manifest_(manifest) {}
  void record(const std::string& stage, double seconds) {
    manifest_.stage_seconds.emplace_back(stage, seconds);
  }

  template <typename Fn>
  auto run(const std::string& stage, Fn&& fn) {
    auto start = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record(stage, elapsed(start));
    } else {
      auto result = fn();
      record(stage, elapsed(start));
      return result;
    }
  }

 private:
  static double elapsed(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
  RunManifest& manifest_;
};

}  // namespace haqjsk

#endif
