#include "haqjsk/manifest.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "haqjsk/util.hpp"

namespace haqjsk {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t dataset_fingerprint(const fs::path& dir,
                                  const std::string& name) {
  std::uint64_t hash = 1469598103934665603ull;
  for (const char* suffix :
       {"_A.txt", "_graph_indicator.txt", "_graph_labels.txt"}) {
    const fs::path file = dir / (name + suffix);
    std::ifstream in(file, std::ios::binary);
    if (!in)
      throw std::runtime_error("dataset_fingerprint: cannot open " +
                               file.string());
    std::ostringstream bytes;
    bytes << in.rdbuf();
    hash = fnv1a64(bytes.str(), hash);
  }
  return hash;
}

void write_manifest(const RunManifest& manifest, const fs::path& path) {
  json j;
  j["tool"] = "haqjsk";
  j["version"] = kToolVersion;
  j["command_line"] = manifest.command_line;
  j["dataset"] = {{"dir", manifest.dataset_dir},
                  {"name", manifest.dataset_name},
                  {"fingerprint", manifest.dataset_fingerprint}};
  j["config"] = {{"variant", to_string(manifest.config.variant)},
                 {"H", manifest.config.levels},
                 {"M1", manifest.config.prototypes},
                 {"K", manifest.config.max_layer},
                 {"seed", manifest.config.seed},
                 {"mu", manifest.config.mu},
                 {"standardize", manifest.config.standardize}};
  json stages = json::object();
  for (const auto& [stage, seconds] : manifest.stage_seconds)
    stages[stage] = seconds;
  j["stage_seconds"] = stages;
  j["total_seconds"] = manifest.total_seconds;
  j["outputs"] = manifest.outputs;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace haqjsk
