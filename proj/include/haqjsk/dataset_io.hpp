#ifndef HAQJSK_DATASET_IO_HPP
#define HAQJSK_DATASET_IO_HPP

#include <filesystem>
#include <string>

#include "haqjsk/graph.hpp"
#include "haqjsk/kernels.hpp"
#include "haqjsk/svm.hpp"

namespace haqjsk {

/// TU-collection plain-text bundle: <name>_A.txt, <name>_graph_indicator.txt
/// and <name>_graph_labels.txt under one directory.
struct TudBundle {
  std::filesystem::path directory;
  std::string name;
};

bool tud_bundle_exists(const TudBundle& bundle);

/// Parses the bundle. Edge lines are 1-based global vertex ids; duplicate
/// edges collapse to weight 1, self-loops are stripped with a warning.
/// Raw labels are remapped to 0..class_count-1 in sorted order. Dangling
/// vertex ids, non-integer tokens, cross-graph edges and length mismatches
/// raise std::runtime_error naming the file and line.
GraphDataset load_tud(const TudBundle& bundle);

/// Kernel-matrix file: "HAQJSK-KM v1", one JSON metadata line, N, then N
/// rows of N values at 17 significant digits (lossless for doubles).
/// manifest_name, when non-empty, is recorded in the metadata so the output
/// references the manifest that produced it.
void write_kernel_matrix(const KernelMatrix& km,
                         const std::filesystem::path& path,
                         const std::string& manifest_name = "");

/// Round-trip inverse of write_kernel_matrix: bitwise identical values and
/// metadata. Malformed or truncated files raise std::runtime_error with the
/// offending line; no partial matrix is ever returned.
KernelMatrix read_kernel_matrix(const std::filesystem::path& path);

/// CvReport JSON with keys dataset, variant, H, M1, K, seed, folds, repeats,
/// mean_accuracy, std_error, per_repeat, c_selected.
void write_cv_report(const CvReport& report, const KernelMatrix& km,
                     const std::filesystem::path& path,
                     const std::string& manifest_name = "");

/// One plain-text matrix file per (level, dim) prototype set plus a manifest
/// recording M1, H, K, seed and the per-level sizes.
void write_alignment_bundle(
    const std::vector<std::vector<PrototypeSet>>& hierarchy_per_dim,
    const KernelConfig& cfg, const std::filesystem::path& directory);

}  // namespace haqjsk

#endif
