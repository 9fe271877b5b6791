#ifndef HAQJSK_ALIGNMENT_HPP
#define HAQJSK_ALIGNMENT_HPP

#include <cstdint>
#include <vector>

#include "haqjsk/ctqw.hpp"
#include "haqjsk/embedding.hpp"
#include "haqjsk/graph.hpp"

namespace haqjsk {

/// k-means centers at one hierarchy level. slot_count is the level's matrix
/// size in prototype space; centers may hold fewer (effective) rows when the
/// requested count exceeded the number of distinct input points, leaving
/// permanently-empty slots.
struct PrototypeSet {
  int level = 1;
  int dim = 0;
  int slot_count = 0;
  Matrix centers;  // effective_count x dim, effective_count <= slot_count
  int effective_count() const { return static_cast<int>(centers.rows()); }
};

/// Lloyd iterations with deterministic farthest-point seeding from the
/// lexicographically smallest point, canonical-order mean accumulation and
/// lowest-index tie-breaks, so the result is a function of the point
/// multiset. Empty clusters are re-seeded to the point farthest from its
/// center. `clusters` above the number of distinct points is clamped down
/// with a warning. The seed parameter is part of the interface but unused:
/// nothing in this strategy is stochastic.
PrototypeSet kmeans(const Matrix& points, int clusters, std::uint64_t seed);

/// Eq.-13-style objective value of an assignment-free evaluation: each point
/// is charged its squared distance to the nearest center.
double kmeans_objective(const Matrix& points, const PrototypeSet& protos);

/// Target slot count for level h (1-based): ceil(m1 / 2^(h-1)).
int level_size_schedule(int m1, int level);

/// Level 1 fits the k-dimensional vertex points; level h fits the level h-1
/// centers. Slot counts follow level_size_schedule clamped by the total
/// point count (k-independent, so per-level averaging across k stays
/// well-formed).
std::vector<PrototypeSet> hierarchical_prototypes(const EmbeddingTable& table,
                                                  int dim, int m1, int levels,
                                                  std::uint64_t seed);

/// One-hot rows compressed to an assignment vector; column j of the dense
/// form may be all-zero (empty prototype for this graph).
struct CorrespondenceMatrix {
  std::vector<int> assignment;  // one prototype id per vertex
  int prototype_count = 0;      // columns (level slot count)
  int rows() const { return static_cast<int>(assignment.size()); }
  Matrix dense() const;
};

/// Nearest prototype under squared Euclidean distance, ties to smallest id.
CorrespondenceMatrix correspondence_matrix(const Matrix& graph_rows,
                                           const PrototypeSet& protos);

/// C^T A C with the same C on both sides: entry (i,j) is the total edge
/// weight between the vertices assigned to prototypes i and j.
Matrix aligned_adjacency(const Graph& g, const CorrespondenceMatrix& c);

/// C^T rho C with the same C on both sides. Trace may drift for many-to-one
/// assignments; the hierarchical consumer renormalizes.
Matrix aligned_density(const DensityMatrix& rho,
                       const CorrespondenceMatrix& c);

/// Mean over the K per-dimension aligned adjacency matrices.
Matrix hierarchical_aligned_adjacency(
    const Graph& g, const std::vector<CorrespondenceMatrix>& over_dims);

/// Mean over the K per-dimension aligned density matrices, renormalized to
/// unit trace when trace > 1e-12; a zero-trace result stays the zero matrix
/// (entropy 0 downstream).
Matrix hierarchical_aligned_density(
    const DensityMatrix& rho,
    const std::vector<CorrespondenceMatrix>& over_dims);

}  // namespace haqjsk

#endif
