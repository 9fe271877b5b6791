#ifndef HAQJSK_GRAPH_HPP
#define HAQJSK_GRAPH_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace haqjsk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Undirected graph stored as a dense symmetric matrix of non-negative edge
/// weights with a zero diagonal. Benchmark inputs are unweighted (0/1);
/// fractional weights appear only in the aligned transforms.
class Graph {
 public:
  /// Validates squareness, exact symmetry, zero diagonal and non-negative
  /// entries; throws std::invalid_argument otherwise.
  explicit Graph(Matrix adjacency, std::optional<int> label = std::nullopt);

  int vertex_count() const { return static_cast<int>(adjacency_.rows()); }
  const Matrix& adjacency() const { return adjacency_; }
  const std::optional<int>& label() const { return label_; }

 private:
  Matrix adjacency_;
  std::optional<int> label_;
};

struct GraphDataset {
  std::vector<Graph> graphs;
  int class_count = 0;
  std::string name;
};

/// Throws std::invalid_argument unless the dataset is non-empty and every
/// present label lies in [0, class_count).
void validate_dataset(const GraphDataset& ds);

/// Entry u is the row sum of adjacency row u.
Vector degree_vector(const Graph& g);

/// L = diag(degree_vector) - adjacency.
Matrix laplacian(const Graph& g);

/// Hop-count sentinel for unreachable vertex pairs.
inline constexpr int kUnreachable = -1;

/// BFS hop counts from every source; every positive-weight edge is one hop.
Eigen::MatrixXi shortest_path_distances(const Graph& g);

/// Vertices at hop distance <= layer from root, ascending vertex order.
std::vector<int> expansion_vertices(const Graph& g, int root, int layer);

/// Induced subgraph on expansion_vertices(g, root, layer).
Graph expansion_subgraph(const Graph& g, int root, int layer);

/// Largest finite hop distance in the graph (0 for a single vertex).
int graph_diameter_hops(const Graph& g);

}  // namespace haqjsk

#endif
