#include "haqjsk/kernels.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "haqjsk/embedding.hpp"

namespace haqjsk {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void validate_config(const KernelConfig& cfg) {
  if (cfg.levels < 1)
    throw std::invalid_argument("kernel config: levels (H) must be >= 1");
  if (cfg.prototypes < 1)
    throw std::invalid_argument("kernel config: prototypes (M1) must be >= 1");
  if (cfg.max_layer < 0)
    throw std::invalid_argument("kernel config: max_layer (K) must be >= 0");
  if (!(cfg.mu > 0.0))
    throw std::invalid_argument("kernel config: mu must be > 0");
}

void check_compatible(const AlignedStructures& p,
                      const AlignedStructures& q) {
  std::vector<std::string> differing;
  if (p.levels != q.levels) differing.push_back("levels");
  if (p.prototypes != q.prototypes) differing.push_back("prototypes");
  if (p.max_layer != q.max_layer) differing.push_back("max_layer");
  if (p.seed != q.seed) differing.push_back("seed");
  if (!differing.empty()) {
    std::ostringstream msg;
    msg << "haqjsk: structures built with differing parameters:";
    for (const auto& field : differing) msg << " " << field;
    throw std::invalid_argument(msg.str());
  }
}

DensityMatrix zero_pad(const DensityMatrix& rho, Eigen::Index size) {
  if (rho.rows() == size) return rho;
  DensityMatrix padded = Matrix::Zero(size, size);
  padded.topLeftCorner(rho.rows(), rho.cols()) = rho;
  return padded;
}

std::vector<CorrespondenceMatrix> level_correspondences(
    const Matrix& graph_rows,
    const std::vector<std::vector<PrototypeSet>>& hierarchy_per_dim,
    int level) {
  std::vector<CorrespondenceMatrix> over_dims;
  over_dims.reserve(hierarchy_per_dim.size());
  for (std::size_t k = 0; k < hierarchy_per_dim.size(); ++k)
    over_dims.push_back(
        correspondence_matrix(graph_rows.leftCols(int(k) + 1),
                              hierarchy_per_dim[k][level - 1]));
  return over_dims;
}

}  // namespace

std::string to_string(KernelVariant v) {
  switch (v) {
    case KernelVariant::HaqjskA: return "haqjsk-a";
    case KernelVariant::HaqjskD: return "haqjsk-d";
    case KernelVariant::Qjsu: return "qjsu";
  }
  return "unknown";
}

KernelVariant kernel_variant_from_string(const std::string& name) {
  if (name == "haqjsk-a") return KernelVariant::HaqjskA;
  if (name == "haqjsk-d") return KernelVariant::HaqjskD;
  if (name == "qjsu") return KernelVariant::Qjsu;
  throw std::invalid_argument("unknown kernel variant: " + name);
}

AlignedStructures build_aligned_structures(
    const Graph& g, const Matrix& graph_rows,
    const std::vector<std::vector<PrototypeSet>>& hierarchy_per_dim,
    const KernelConfig& cfg) {
  if (hierarchy_per_dim.empty())
    throw std::invalid_argument(
        "build_aligned_structures: empty prototype hierarchy");
  AlignedStructures s;
  s.levels = cfg.levels;
  s.prototypes = cfg.prototypes;
  s.max_layer = static_cast<int>(hierarchy_per_dim.size());
  s.seed = cfg.seed;
  const DensityMatrix rho = density_matrix_infinite(g);
  s.adjacency.reserve(cfg.levels);
  s.density.reserve(cfg.levels);
  for (int h = 1; h <= cfg.levels; ++h) {
    const auto over_dims =
        level_correspondences(graph_rows, hierarchy_per_dim, h);
    s.adjacency.push_back(hierarchical_aligned_adjacency(g, over_dims));
    s.density.push_back(hierarchical_aligned_density(rho, over_dims));
  }
  return s;
}

double haqjsk_a(const AlignedStructures& p, const AlignedStructures& q) {
  check_compatible(p, q);
  double value = 0.0;
  for (int h = 0; h < p.levels; ++h) {
    // delta mapping: evolve the CTQW on the aligned adjacency itself.
    const DensityMatrix theta_p = density_matrix_infinite(p.adjacency[h]);
    const DensityMatrix theta_q = density_matrix_infinite(q.adjacency[h]);
    value += std::exp(-qjsd(theta_p, theta_q));
  }
  return value;
}

double haqjsk_d(const AlignedStructures& p, const AlignedStructures& q) {
  check_compatible(p, q);
  double value = 0.0;
  for (int h = 0; h < p.levels; ++h)
    value += std::exp(-qjsd(p.density[h], q.density[h]));
  return value;
}

double qjsu(const Graph& gp, const Graph& gq, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("qjsu: mu must be > 0");
  const DensityMatrix rho_p = density_matrix_infinite(gp);
  const DensityMatrix rho_q = density_matrix_infinite(gq);
  const Eigen::Index size = std::max(rho_p.rows(), rho_q.rows());
  return std::exp(-mu * qjsd(zero_pad(rho_p, size), zero_pad(rho_q, size)));
}

namespace {

// Per-graph cache for the production pairwise sweep: one thin density factor
// (with entropy) per hierarchy level, or a single factor for QJSU.
struct GraphCache {
  std::vector<DensityFactor> factors;
};

GraphCache build_cache(const Graph& g, const Matrix& graph_rows,
                       const std::vector<std::vector<PrototypeSet>>& hierarchy,
                       const KernelConfig& cfg) {
  GraphCache cache;
  if (cfg.variant == KernelVariant::Qjsu) {
    cache.factors.push_back(density_factor_infinite(g.adjacency()));
    return cache;
  }
  cache.factors.reserve(cfg.levels);
  const bool use_density = cfg.variant == KernelVariant::HaqjskD;
  const DensityMatrix rho =
      use_density ? density_matrix_infinite(g) : DensityMatrix();
  for (int h = 1; h <= cfg.levels; ++h) {
    const auto over_dims = level_correspondences(graph_rows, hierarchy, h);
    if (use_density) {
      cache.factors.push_back(
          density_factor(hierarchical_aligned_density(rho, over_dims)));
    } else {
      cache.factors.push_back(density_factor_infinite(
          hierarchical_aligned_adjacency(g, over_dims)));
    }
  }
  return cache;
}

double pair_value(const GraphCache& p, const GraphCache& q,
                  const KernelConfig& cfg) {
  if (cfg.variant == KernelVariant::Qjsu)
    return std::exp(-cfg.mu * qjsd(p.factors[0], q.factors[0]));
  double value = 0.0;
  for (std::size_t h = 0; h < p.factors.size(); ++h)
    value += std::exp(-qjsd(p.factors[h], q.factors[h]));
  return value;
}

double min_eigenvalue_of(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("psd_diagnostics: eigensolver failed");
  return solver.eigenvalues()[0];
}

std::vector<int> dataset_labels(const GraphDataset& ds) {
  std::vector<int> labels;
  labels.reserve(ds.graphs.size());
  for (const Graph& g : ds.graphs) labels.push_back(g.label().value_or(-1));
  return labels;
}

}  // namespace

KernelMatrix compute_kernel_matrix(const GraphDataset& ds,
                                   const KernelConfig& cfg, Execution exec,
                                   PipelineTimings* timings) {
  validate_dataset(ds);
  validate_config(cfg);
  const int n = static_cast<int>(ds.graphs.size());
  if (n < 2)
    throw std::invalid_argument(
        "compute_kernel_matrix: at least two graphs required");
  const bool parallel = exec == Execution::Parallel;
  const auto total_start = Clock::now();
  PipelineTimings local;

  const bool hierarchical = cfg.variant != KernelVariant::Qjsu;
  const int max_layer =
      cfg.max_layer > 0 ? cfg.max_layer : auto_max_layer(ds);

  EmbeddingTable table;
  std::vector<std::vector<PrototypeSet>> hierarchy;
  if (hierarchical) {
    auto start = Clock::now();
    table = dataset_embeddings(ds, max_layer, exec);
    if (cfg.standardize) table = standardize(table);
    local.embeddings_s = seconds_since(start);

    start = Clock::now();
    hierarchy.resize(max_layer);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int k = 1; k <= max_layer; ++k)
      hierarchy[k - 1] = hierarchical_prototypes(table, k, cfg.prototypes,
                                                 cfg.levels, cfg.seed);
    local.prototypes_s = seconds_since(start);
  } else {
    table.graph_row_offsets.assign(n + 1, 0);
  }

  auto start = Clock::now();
  std::vector<GraphCache> caches(n);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int p = 0; p < n; ++p) {
    const Matrix graph_rows =
        hierarchical
            ? Matrix(table.rows.middleRows(
                  table.graph_row_offsets[p],
                  ds.graphs[p].vertex_count()))
            : Matrix();
    caches[p] = build_cache(ds.graphs[p], graph_rows, hierarchy, cfg);
  }
  local.structures_s = seconds_since(start);

  start = Clock::now();
  KernelMatrix km;
  km.values.resize(n, n);
  const double diagonal =
      cfg.variant == KernelVariant::Qjsu ? 1.0 : double(cfg.levels);
  km.values.diagonal().setConstant(diagonal);
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(std::size_t(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  const auto pair_count = static_cast<long long>(pairs.size());
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
  for (long long idx = 0; idx < pair_count; ++idx) {
    const auto [i, j] = pairs[idx];
    const double value = pair_value(caches[i], caches[j], cfg);
    km.values(i, j) = value;
    km.values(j, i) = value;
  }
  local.pairwise_s = seconds_since(start);

  start = Clock::now();
  km.min_eigenvalue = min_eigenvalue_of(km.values);
  local.diagnostics_s = seconds_since(start);

  km.config = cfg;
  km.dataset_name = ds.name;
  km.labels = dataset_labels(ds);
  km.class_count = ds.class_count;
  km.resolved_max_layer = hierarchical ? max_layer : 0;
  local.total_s = seconds_since(total_start);
  if (timings) *timings = local;
  return km;
}

KernelMatrix compute_kernel_matrix_reference(const GraphDataset& ds,
                                             const KernelConfig& cfg) {
  validate_dataset(ds);
  validate_config(cfg);
  const int n = static_cast<int>(ds.graphs.size());
  if (n < 2)
    throw std::invalid_argument(
        "compute_kernel_matrix_reference: at least two graphs required");

  KernelMatrix km;
  km.values.resize(n, n);
  km.config = cfg;
  km.dataset_name = ds.name;
  km.labels = dataset_labels(ds);
  km.class_count = ds.class_count;

  if (cfg.variant == KernelVariant::Qjsu) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double value = qjsu(ds.graphs[i], ds.graphs[j], cfg.mu);
        km.values(i, j) = value;
        km.values(j, i) = value;
      }
    km.resolved_max_layer = 0;
    km.min_eigenvalue = min_eigenvalue_of(km.values);
    return km;
  }

  const int max_layer =
      cfg.max_layer > 0 ? cfg.max_layer : auto_max_layer(ds);
  EmbeddingTable table = dataset_embeddings(ds, max_layer, Execution::Serial);
  if (cfg.standardize) table = standardize(table);
  std::vector<std::vector<PrototypeSet>> hierarchy(max_layer);
  for (int k = 1; k <= max_layer; ++k)
    hierarchy[k - 1] = hierarchical_prototypes(table, k, cfg.prototypes,
                                               cfg.levels, cfg.seed);
  std::vector<AlignedStructures> structures;
  structures.reserve(n);
  for (int p = 0; p < n; ++p)
    structures.push_back(build_aligned_structures(
        ds.graphs[p],
        table.rows.middleRows(table.graph_row_offsets[p],
                              ds.graphs[p].vertex_count()),
        hierarchy, cfg));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double value = cfg.variant == KernelVariant::HaqjskA
                               ? haqjsk_a(structures[i], structures[j])
                               : haqjsk_d(structures[i], structures[j]);
      km.values(i, j) = value;
      km.values(j, i) = value;
    }
  km.resolved_max_layer = max_layer;
  km.min_eigenvalue = min_eigenvalue_of(km.values);
  return km;
}

PsdReport psd_diagnostics(const KernelMatrix& km) {
  PsdReport report;
  report.min_eigenvalue = min_eigenvalue_of(km.values);
  report.suggested_shift = std::max(0.0, -report.min_eigenvalue) + 1e-10;
  return report;
}

void apply_diagonal_shift(KernelMatrix& km, double shift) {
  if (!(shift >= 0.0))
    throw std::invalid_argument("apply_diagonal_shift: shift must be >= 0");
  km.values.diagonal().array() += shift;
  km.min_eigenvalue += shift;
  km.shift_applied = true;
}

}  // namespace haqjsk
