#ifndef HAQJSK_KERNELS_HPP
#define HAQJSK_KERNELS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "haqjsk/alignment.hpp"
#include "haqjsk/ctqw.hpp"
#include "haqjsk/graph.hpp"
#include "haqjsk/util.hpp"

namespace haqjsk {

enum class KernelVariant { HaqjskA, HaqjskD, Qjsu };

std::string to_string(KernelVariant v);
KernelVariant kernel_variant_from_string(const std::string& name);

struct KernelConfig {
  KernelVariant variant = KernelVariant::HaqjskD;
  int levels = 5;      // H
  int prototypes = 256;  // M1, level-1 prototype count
  int max_layer = 0;   // K; 0 resolves to auto_max_layer(dataset)
  std::uint64_t seed = 42;
  double mu = 1.0;     // decay factor, QJSU only
  bool standardize = false;  // z-score embeddings before clustering
};

/// Per-graph hierarchical transitive aligned structures: for each level h,
/// the aligned adjacency (mean of C^T A C over k) and the unit-trace aligned
/// density (mean of C^T rho C over k). Carries the fit parameters so kernel
/// evaluations can reject mismatched builds.
struct AlignedStructures {
  std::vector<Matrix> adjacency;  // levels entries, slot_h x slot_h
  std::vector<Matrix> density;    // levels entries, slot_h x slot_h
  int levels = 0;
  int prototypes = 0;
  int max_layer = 0;
  std::uint64_t seed = 0;
};

/// Builds a graph's aligned structures from the fitted per-dimension
/// prototype hierarchies. graph_rows are the graph's embedding-table rows.
AlignedStructures build_aligned_structures(
    const Graph& g, const Matrix& graph_rows,
    const std::vector<std::vector<PrototypeSet>>& hierarchy_per_dim,
    const KernelConfig& cfg);

/// Definition-3.1 kernel: sum over levels of exp(-QJSD) between the CTQW
/// densities of the aligned adjacency matrices (the delta mapping).
/// Throws std::invalid_argument when the builds' parameters differ.
double haqjsk_a(const AlignedStructures& p, const AlignedStructures& q);

/// Definition-3.2 kernel: same sum on the aligned densities directly.
double haqjsk_d(const AlignedStructures& p, const AlignedStructures& q);

/// Unaligned baseline: exp(-mu * QJSD) between the graphs' CTQW densities,
/// the smaller one zero-padded to the larger size. Not permutation
/// invariant; kept as the comparison baseline.
double qjsu(const Graph& gp, const Graph& gq, double mu = 1.0);

struct KernelMatrix {
  Matrix values;
  KernelConfig config;
  std::string dataset_name;
  std::vector<int> labels;  // dataset labels, travels with the matrix
  int class_count = 0;
  int resolved_max_layer = 0;  // K actually used after auto resolution
  double min_eigenvalue = 0.0;
  bool shift_applied = false;
};

struct PipelineTimings {
  double embeddings_s = 0;
  double prototypes_s = 0;
  double structures_s = 0;
  double pairwise_s = 0;
  double diagnostics_s = 0;
  double total_s = 0;
};

/// Full pipeline: embeddings -> prototype hierarchies -> correspondences ->
/// aligned structures -> pairwise kernel, with per-graph/per-pair OpenMP
/// parallelism and factored mixture entropies. Deterministic for a fixed
/// config; Serial and Parallel execution produce bit-identical matrices.
/// Throws on datasets with fewer than two graphs.
KernelMatrix compute_kernel_matrix(const GraphDataset& ds,
                                   const KernelConfig& cfg,
                                   Execution exec = Execution::Parallel,
                                   PipelineTimings* timings = nullptr);

/// Independent single-threaded reference: dense QJSD per pair, no factoring
/// or caching. Kept for testing and the bench target.
KernelMatrix compute_kernel_matrix_reference(const GraphDataset& ds,
                                             const KernelConfig& cfg);

struct PsdReport {
  double min_eigenvalue = 0.0;
  double suggested_shift = 0.0;  // max(0, -min_eig) + 1e-10
};

/// Reports the minimum eigenvalue and a diagonal shift that would make the
/// matrix PSD; never mutates the input.
PsdReport psd_diagnostics(const KernelMatrix& km);

/// Opt-in remedy for non-PSD matrices: adds `shift` to the diagonal and
/// records it in the metadata.
void apply_diagonal_shift(KernelMatrix& km, double shift);

}  // namespace haqjsk

#endif
