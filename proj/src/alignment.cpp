#include "haqjsk/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "haqjsk/util.hpp"

namespace haqjsk {

namespace {

// Lexicographic row comparison; the canonical order everything deterministic
// in this module is built on.
bool row_less(const Matrix& points, int a, int b) {
  for (Eigen::Index c = 0; c < points.cols(); ++c) {
    if (points(a, c) < points(b, c)) return true;
    if (points(a, c) > points(b, c)) return false;
  }
  return false;
}

bool row_equal(const Matrix& points, int a, int b) {
  for (Eigen::Index c = 0; c < points.cols(); ++c)
    if (points(a, c) != points(b, c)) return false;
  return true;
}

std::vector<int> canonical_order(const Matrix& points) {
  std::vector<int> order(points.rows());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return row_less(points, a, b); });
  return order;
}

int count_distinct(const Matrix& points, const std::vector<int>& order) {
  int distinct = order.empty() ? 0 : 1;
  for (std::size_t i = 1; i < order.size(); ++i)
    if (!row_equal(points, order[i - 1], order[i])) ++distinct;
  return distinct;
}

double squared_distance(const Matrix& points, int row, const Matrix& centers,
                        int center) {
  return (points.row(row) - centers.row(center)).squaredNorm();
}

// Greedy max-min seeding from the lexicographically smallest point. Ties on
// the max-min distance break toward the lexicographically smallest point,
// keeping the whole seeding a function of the point multiset.
Matrix farthest_point_seeds(const Matrix& points,
                            const std::vector<int>& order, int clusters) {
  const int n = static_cast<int>(points.rows());
  Matrix centers(clusters, points.cols());
  centers.row(0) = points.row(order.front());
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  for (int c = 1; c < clusters; ++c) {
    for (int i = 0; i < n; ++i)
      nearest[i] =
          std::min(nearest[i], squared_distance(points, i, centers, c - 1));
    int best = -1;
    for (int idx : order)
      if (best == -1 || nearest[idx] > nearest[best]) best = idx;
    centers.row(c) = points.row(best);
  }
  return centers;
}

}  // namespace

int level_size_schedule(int m1, int level) {
  int size = m1;
  for (int h = 1; h < level; ++h) size = (size + 1) / 2;
  return std::max(1, size);
}

PrototypeSet kmeans(const Matrix& points, int clusters, std::uint64_t seed) {
  (void)seed;  // interface-reserved; the strategy has no stochastic choice
  const int n = static_cast<int>(points.rows());
  if (n < 1) throw std::invalid_argument("kmeans: at least one point required");
  if (clusters < 1)
    throw std::invalid_argument("kmeans: at least one cluster required");

  const std::vector<int> order = canonical_order(points);
  const int distinct = count_distinct(points, order);
  int m = clusters;
  if (m > distinct) {
    std::ostringstream msg;
    msg << "kmeans: requested " << clusters << " clusters for " << distinct
        << " distinct points; clamping";
    warn(msg.str());
    m = distinct;
  }

  Matrix centers = farthest_point_seeds(points, order, m);
  std::vector<int> assignment(n, -1);
  constexpr int kMaxIterations = 300;
  for (int iteration = 0; iteration < kMaxIterations; ++iteration) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = squared_distance(points, i, centers, 0);
      for (int c = 1; c < m; ++c) {
        const double d = squared_distance(points, i, centers, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assignment[i] != best) {
        assignment[i] = best;
        changed = true;
      }
    }

    // Means accumulate in canonical point order so the centers come out
    // bit-identical for any row ordering of the same multiset.
    Matrix sums = Matrix::Zero(m, points.cols());
    std::vector<int> counts(m, 0);
    for (int idx : order) {
      sums.row(assignment[idx]) += points.row(idx);
      ++counts[assignment[idx]];
    }
    std::vector<int> reseeded;
    for (int c = 0; c < m; ++c) {
      if (counts[c] == 0) {
        // Re-seed an empty cluster to the point farthest from its center.
        int worst = -1;
        double worst_d = -1.0;
        for (int idx : order) {
          if (std::find(reseeded.begin(), reseeded.end(), idx) !=
              reseeded.end())
            continue;
          const double d =
              squared_distance(points, idx, centers, assignment[idx]);
          if (d > worst_d) {
            worst_d = d;
            worst = idx;
          }
        }
        centers.row(c) = points.row(worst);
        reseeded.push_back(worst);
        changed = true;
      } else {
        centers.row(c) = sums.row(c) / counts[c];
      }
    }
    if (!changed) break;
  }

  PrototypeSet result;
  result.level = 1;
  result.dim = static_cast<int>(points.cols());
  result.slot_count = clusters;
  result.centers = std::move(centers);
  return result;
}

double kmeans_objective(const Matrix& points, const PrototypeSet& protos) {
  double objective = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < protos.effective_count(); ++c)
      best = std::min(best,
                      squared_distance(points, static_cast<int>(i),
                                       protos.centers, c));
    objective += best;
  }
  return objective;
}

std::vector<PrototypeSet> hierarchical_prototypes(const EmbeddingTable& table,
                                                  int dim, int m1, int levels,
                                                  std::uint64_t seed) {
  if (levels < 1)
    throw std::invalid_argument("hierarchical_prototypes: levels must be >= 1");
  if (m1 < 1)
    throw std::invalid_argument("hierarchical_prototypes: m1 must be >= 1");
  if (dim < 1 || dim > table.max_layer)
    throw std::invalid_argument(
        "hierarchical_prototypes: dim outside [1, max_layer]");
  const int total_points = static_cast<int>(table.rows.rows());
  const Matrix points = table.rows.leftCols(dim);

  std::vector<PrototypeSet> hierarchy;
  hierarchy.reserve(levels);
  for (int level = 1; level <= levels; ++level) {
    // Slot counts are clamped by the total point count, not the per-dim
    // distinct count, so every dim shares the same level sizes.
    const int slots =
        std::min(level_size_schedule(m1, level), total_points);
    const Matrix& input = level == 1 ? points : hierarchy.back().centers;
    PrototypeSet protos =
        kmeans(input, std::min(slots, static_cast<int>(input.rows())),
               substream_seed(seed, "kmeans", level));
    protos.level = level;
    protos.slot_count = slots;
    hierarchy.push_back(std::move(protos));
  }
  return hierarchy;
}

Matrix CorrespondenceMatrix::dense() const {
  Matrix c = Matrix::Zero(rows(), prototype_count);
  for (int i = 0; i < rows(); ++i) c(i, assignment[i]) = 1.0;
  return c;
}

CorrespondenceMatrix correspondence_matrix(const Matrix& graph_rows,
                                           const PrototypeSet& protos) {
  if (graph_rows.cols() != protos.centers.cols())
    throw std::invalid_argument(
        "correspondence_matrix: point and prototype dimensions differ");
  CorrespondenceMatrix c;
  c.prototype_count = protos.slot_count;
  c.assignment.resize(graph_rows.rows());
  for (Eigen::Index i = 0; i < graph_rows.rows(); ++i) {
    int best = 0;
    double best_d =
        (graph_rows.row(i) - protos.centers.row(0)).squaredNorm();
    for (int j = 1; j < protos.effective_count(); ++j) {
      const double d =
          (graph_rows.row(i) - protos.centers.row(j)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    c.assignment[i] = best;
  }
  return c;
}

namespace {

Matrix congruence(const Matrix& x, const CorrespondenceMatrix& c) {
  Matrix out = Matrix::Zero(c.prototype_count, c.prototype_count);
  for (Eigen::Index u = 0; u < x.rows(); ++u)
    for (Eigen::Index v = 0; v < x.cols(); ++v)
      out(c.assignment[u], c.assignment[v]) += x(u, v);
  return out;
}

void check_rows(const char* op, Eigen::Index have,
                const CorrespondenceMatrix& c) {
  if (c.rows() != have) {
    std::ostringstream msg;
    msg << op << ": correspondence has " << c.rows() << " rows for a "
        << have << "-vertex input";
    throw std::invalid_argument(msg.str());
  }
}

int common_column_count(const std::vector<CorrespondenceMatrix>& over_dims) {
  if (over_dims.empty())
    throw std::invalid_argument(
        "hierarchical alignment: at least one correspondence required");
  const int columns = over_dims.front().prototype_count;
  for (const auto& c : over_dims)
    if (c.prototype_count != columns)
      throw std::invalid_argument(
          "hierarchical alignment: correspondence column counts differ");
  return columns;
}

}  // namespace

Matrix aligned_adjacency(const Graph& g, const CorrespondenceMatrix& c) {
  check_rows("aligned_adjacency", g.vertex_count(), c);
  return congruence(g.adjacency(), c);
}

Matrix aligned_density(const DensityMatrix& rho,
                       const CorrespondenceMatrix& c) {
  check_rows("aligned_density", rho.rows(), c);
  return congruence(rho, c);
}

Matrix hierarchical_aligned_adjacency(
    const Graph& g, const std::vector<CorrespondenceMatrix>& over_dims) {
  const int columns = common_column_count(over_dims);
  Matrix mean = Matrix::Zero(columns, columns);
  for (const auto& c : over_dims) mean += aligned_adjacency(g, c);
  return mean / double(over_dims.size());
}

Matrix hierarchical_aligned_density(
    const DensityMatrix& rho,
    const std::vector<CorrespondenceMatrix>& over_dims) {
  const int columns = common_column_count(over_dims);
  Matrix mean = Matrix::Zero(columns, columns);
  for (const auto& c : over_dims) mean += aligned_density(rho, c);
  mean /= double(over_dims.size());
  const double trace = mean.trace();
  if (trace > 1e-12) mean /= trace;
  else mean.setZero();  // pathological zero-trace case: entropy 0 downstream
  return mean;
}

}  // namespace haqjsk
