#include "haqjsk/dataset_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "haqjsk/util.hpp"

namespace haqjsk {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const fs::path& file, std::size_t line,
                              const std::string& message) {
  std::ostringstream msg;
  msg << file.string() << ":" << line << ": " << message;
  throw std::runtime_error(msg.str());
}

std::vector<std::string> read_lines(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

long parse_long(std::string_view token, const fs::path& file,
                std::size_t line) {
  long value = 0;
  const auto* begin = token.data();
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    parse_error(file, line,
                "expected an integer, got '" + std::string(token) + "'");
  return value;
}

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() &&
           (line[i] == ' ' || line[i] == '\t' || line[i] == ','))
      ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
           line[i] != ',')
      ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

}  // namespace

bool tud_bundle_exists(const TudBundle& bundle) {
  for (const char* suffix :
       {"_A.txt", "_graph_indicator.txt", "_graph_labels.txt"}) {
    if (!fs::exists(bundle.directory / (bundle.name + suffix))) return false;
  }
  return true;
}

GraphDataset load_tud(const TudBundle& bundle) {
  const fs::path a_file = bundle.directory / (bundle.name + "_A.txt");
  const fs::path indicator_file =
      bundle.directory / (bundle.name + "_graph_indicator.txt");
  const fs::path labels_file =
      bundle.directory / (bundle.name + "_graph_labels.txt");

  const auto indicator_lines = read_lines(indicator_file);
  const long total_vertices = static_cast<long>(indicator_lines.size());
  if (total_vertices == 0)
    parse_error(indicator_file, 1, "no vertices listed");
  std::vector<int> graph_of(total_vertices);
  long graph_count = 0;
  for (long v = 0; v < total_vertices; ++v) {
    const long id = parse_long(indicator_lines[v], indicator_file, v + 1);
    if (id < 1)
      parse_error(indicator_file, v + 1, "graph ids are 1-based");
    graph_of[v] = static_cast<int>(id - 1);
    graph_count = std::max(graph_count, id);
  }

  // Local vertex ids follow ascending global ids within each graph.
  std::vector<int> local_id(total_vertices);
  std::vector<int> vertex_count(graph_count, 0);
  for (long v = 0; v < total_vertices; ++v)
    local_id[v] = vertex_count[graph_of[v]]++;
  for (long g = 0; g < graph_count; ++g)
    if (vertex_count[g] == 0)
      parse_error(indicator_file, 1,
                  "graph " + std::to_string(g + 1) + " has no vertices");

  const auto label_lines = read_lines(labels_file);
  if (static_cast<long>(label_lines.size()) != graph_count)
    parse_error(labels_file, label_lines.size() + 1,
                "expected " + std::to_string(graph_count) + " labels, got " +
                    std::to_string(label_lines.size()));
  std::vector<long> raw_labels(graph_count);
  std::map<long, int> label_map;
  for (long g = 0; g < graph_count; ++g) {
    raw_labels[g] = parse_long(label_lines[g], labels_file, g + 1);
    label_map[raw_labels[g]] = 0;
  }
  int next = 0;
  for (auto& [raw, mapped] : label_map) mapped = next++;

  std::vector<Matrix> adjacency;
  adjacency.reserve(graph_count);
  for (long g = 0; g < graph_count; ++g)
    adjacency.push_back(Matrix::Zero(vertex_count[g], vertex_count[g]));

  const auto edge_lines = read_lines(a_file);
  long stripped_self_loops = 0;
  for (std::size_t ln = 0; ln < edge_lines.size(); ++ln) {
    if (edge_lines[ln].empty()) continue;
    const auto tokens = split_tokens(edge_lines[ln]);
    if (tokens.size() != 2)
      parse_error(a_file, ln + 1, "expected an 'i, j' edge line");
    const long i = parse_long(tokens[0], a_file, ln + 1);
    const long j = parse_long(tokens[1], a_file, ln + 1);
    if (i < 1 || i > total_vertices || j < 1 || j > total_vertices)
      parse_error(a_file, ln + 1,
                  "vertex id outside [1, " + std::to_string(total_vertices) +
                      "]");
    if (i == j) {
      ++stripped_self_loops;
      continue;
    }
    const long u = i - 1;
    const long v = j - 1;
    if (graph_of[u] != graph_of[v])
      parse_error(a_file, ln + 1,
                  "edge joins different graphs (" +
                      std::to_string(graph_of[u] + 1) + " and " +
                      std::to_string(graph_of[v] + 1) + ")");
    Matrix& a = adjacency[graph_of[u]];
    a(local_id[u], local_id[v]) = 1.0;  // duplicates collapse to weight 1
    a(local_id[v], local_id[u]) = 1.0;
  }
  if (stripped_self_loops > 0)
    warn("load_tud: stripped " + std::to_string(stripped_self_loops) +
         " self-loop(s) from " + a_file.string());

  GraphDataset ds;
  ds.name = bundle.name;
  ds.class_count = static_cast<int>(label_map.size());
  ds.graphs.reserve(graph_count);
  for (long g = 0; g < graph_count; ++g)
    ds.graphs.emplace_back(std::move(adjacency[g]),
                           label_map.at(raw_labels[g]));
  validate_dataset(ds);
  return ds;
}

namespace {

constexpr const char* kKernelMatrixHeader = "HAQJSK-KM v1";

json kernel_metadata(const KernelMatrix& km, const std::string& manifest) {
  json meta;
  meta["dataset"] = km.dataset_name;
  meta["variant"] = to_string(km.config.variant);
  meta["H"] = km.config.levels;
  meta["M1"] = km.config.prototypes;
  meta["K"] = km.config.max_layer;
  meta["K_resolved"] = km.resolved_max_layer;
  meta["seed"] = km.config.seed;
  meta["mu"] = km.config.mu;
  meta["standardize"] = km.config.standardize;
  meta["labels"] = km.labels;
  meta["class_count"] = km.class_count;
  meta["min_eigenvalue"] = km.min_eigenvalue;
  meta["shift_applied"] = km.shift_applied;
  if (!manifest.empty()) meta["manifest"] = manifest;
  return meta;
}

}  // namespace

void write_kernel_matrix(const KernelMatrix& km, const fs::path& path,
                         const std::string& manifest_name) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kKernelMatrixHeader << "\n";
  out << kernel_metadata(km, manifest_name).dump() << "\n";
  const auto n = km.values.rows();
  out << n << "\n";
  char buffer[64];
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", km.values(r, c));
      if (c) out << ' ';
      out << buffer;
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

KernelMatrix read_kernel_matrix(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line))
      parse_error(path, line_no + 1,
                  std::string("truncated file, expected ") + what);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };

  next_line("header");
  if (line != kKernelMatrixHeader)
    parse_error(path, line_no, "bad header, expected '" +
                                   std::string(kKernelMatrixHeader) + "'");
  next_line("metadata");
  json meta;
  try {
    meta = json::parse(line);
  } catch (const json::exception& e) {
    parse_error(path, line_no, std::string("bad metadata: ") + e.what());
  }
  next_line("matrix size");
  const long n = parse_long(line, path, line_no);
  if (n < 1) parse_error(path, line_no, "matrix size must be positive");

  KernelMatrix km;
  km.values.resize(n, n);
  for (long r = 0; r < n; ++r) {
    next_line("matrix row");
    const char* cursor = line.c_str();
    for (long c = 0; c < n; ++c) {
      char* after = nullptr;
      const double value = std::strtod(cursor, &after);
      if (after == cursor)
        parse_error(path, line_no,
                    "row " + std::to_string(r) + " has fewer than " +
                        std::to_string(n) + " values");
      km.values(r, c) = value;
      cursor = after;
    }
    while (*cursor == ' ') ++cursor;
    if (*cursor != '\0')
      parse_error(path, line_no,
                  "row " + std::to_string(r) + " has trailing content");
  }

  try {
    km.dataset_name = meta.at("dataset").get<std::string>();
    km.config.variant =
        kernel_variant_from_string(meta.at("variant").get<std::string>());
    km.config.levels = meta.at("H").get<int>();
    km.config.prototypes = meta.at("M1").get<int>();
    km.config.max_layer = meta.at("K").get<int>();
    km.resolved_max_layer = meta.at("K_resolved").get<int>();
    km.config.seed = meta.at("seed").get<std::uint64_t>();
    km.config.mu = meta.at("mu").get<double>();
    km.config.standardize = meta.at("standardize").get<bool>();
    km.labels = meta.at("labels").get<std::vector<int>>();
    km.class_count = meta.at("class_count").get<int>();
    km.min_eigenvalue = meta.at("min_eigenvalue").get<double>();
    km.shift_applied = meta.at("shift_applied").get<bool>();
  } catch (const json::exception& e) {
    parse_error(path, 2, std::string("metadata field error: ") + e.what());
  }
  return km;
}

void write_cv_report(const CvReport& report, const KernelMatrix& km,
                     const fs::path& path, const std::string& manifest_name) {
  json j;
  j["dataset"] = km.dataset_name;
  j["variant"] = to_string(km.config.variant);
  j["H"] = km.config.levels;
  j["M1"] = km.config.prototypes;
  j["K"] = km.resolved_max_layer;
  j["seed"] = report.fold_seed;
  j["folds"] = report.folds;
  j["repeats"] = report.repeats;
  j["mean_accuracy"] = report.mean_accuracy;
  j["std_error"] = report.std_error;
  j["per_repeat"] = report.per_repeat;
  j["c_selected"] = report.c_selected;
  if (!manifest_name.empty()) j["manifest"] = manifest_name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

void write_alignment_bundle(
    const std::vector<std::vector<PrototypeSet>>& hierarchy_per_dim,
    const KernelConfig& cfg, const fs::path& directory) {
  fs::create_directories(directory);
  json manifest;
  manifest["M1"] = cfg.prototypes;
  manifest["H"] = cfg.levels;
  manifest["K"] = static_cast<int>(hierarchy_per_dim.size());
  manifest["seed"] = cfg.seed;
  json level_sizes = json::array();
  if (!hierarchy_per_dim.empty()) {
    for (const auto& protos : hierarchy_per_dim.front())
      level_sizes.push_back(protos.slot_count);
  }
  manifest["level_sizes"] = level_sizes;
  char buffer[64];
  for (std::size_t k = 0; k < hierarchy_per_dim.size(); ++k) {
    for (const auto& protos : hierarchy_per_dim[k]) {
      std::ostringstream name;
      name << "prototypes_k" << (k + 1) << "_h" << protos.level << ".txt";
      std::ofstream out(directory / name.str());
      if (!out)
        throw std::runtime_error("cannot write " +
                                 (directory / name.str()).string());
      out << protos.effective_count() << " " << protos.dim << "\n";
      for (int r = 0; r < protos.effective_count(); ++r) {
        for (int c = 0; c < protos.dim; ++c) {
          std::snprintf(buffer, sizeof(buffer), "%.17g",
                        protos.centers(r, c));
          if (c) out << ' ';
          out << buffer;
        }
        out << "\n";
      }
    }
  }
  std::ofstream out(directory / "manifest.json");
  if (!out)
    throw std::runtime_error("cannot write " +
                             (directory / "manifest.json").string());
  out << manifest.dump(2) << "\n";
}

}  // namespace haqjsk
