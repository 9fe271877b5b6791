#include "haqjsk/graph.hpp"

#include <deque>
#include <sstream>
#include <stdexcept>

namespace haqjsk {

Graph::Graph(Matrix adjacency, std::optional<int> label)
    : adjacency_(std::move(adjacency)), label_(label) {
  const auto n = adjacency_.rows();
  if (n == 0) throw std::invalid_argument("graph: at least one vertex required");
  if (adjacency_.cols() != n) {
    std::ostringstream msg;
    msg << "graph: adjacency must be square, got " << n << "x"
        << adjacency_.cols();
    throw std::invalid_argument(msg.str());
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (adjacency_(i, i) != 0.0) {
      std::ostringstream msg;
      msg << "graph: self-loop at vertex " << i << " (weight "
          << adjacency_(i, i) << ")";
      throw std::invalid_argument(msg.str());
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = adjacency_(i, j);
      if (!(w >= 0.0) || !std::isfinite(w)) {
        std::ostringstream msg;
        msg << "graph: edge weight (" << i << "," << j
            << ") must be finite and non-negative, got " << w;
        throw std::invalid_argument(msg.str());
      }
      if (w != adjacency_(j, i)) {
        std::ostringstream msg;
        msg << "graph: adjacency not symmetric at (" << i << "," << j << "): "
            << w << " vs " << adjacency_(j, i);
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

void validate_dataset(const GraphDataset& ds) {
  if (ds.graphs.empty())
    throw std::invalid_argument("dataset: at least one graph required");
  if (ds.class_count <= 0)
    throw std::invalid_argument("dataset: class_count must be positive");
  for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
    const auto& label = ds.graphs[i].label();
    if (label && (*label < 0 || *label >= ds.class_count)) {
      std::ostringstream msg;
      msg << "dataset: graph " << i << " label " << *label
          << " outside [0, " << ds.class_count << ")";
      throw std::invalid_argument(msg.str());
    }
  }
}

Vector degree_vector(const Graph& g) {
  return g.adjacency().rowwise().sum();
}

Matrix laplacian(const Graph& g) {
  Matrix l = -g.adjacency();
  l.diagonal() = degree_vector(g);
  return l;
}

namespace {

// BFS over positive-weight edges from one source, hop counts into `dist`.
void bfs_hops(const Matrix& a, int source, Eigen::VectorXi& dist) {
  dist.setConstant(kUnreachable);
  dist[source] = 0;
  std::deque<int> queue{source};
  const int n = static_cast<int>(a.rows());
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v = 0; v < n; ++v) {
      if (a(u, v) > 0.0 && dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
}

}  // namespace

Eigen::MatrixXi shortest_path_distances(const Graph& g) {
  const int n = g.vertex_count();
  Eigen::MatrixXi d(n, n);
  Eigen::VectorXi row(n);
  for (int u = 0; u < n; ++u) {
    bfs_hops(g.adjacency(), u, row);
    d.row(u) = row.transpose();
  }
  return d;
}

std::vector<int> expansion_vertices(const Graph& g, int root, int layer) {
  const int n = g.vertex_count();
  if (root < 0 || root >= n)
    throw std::invalid_argument("expansion_subgraph: root out of range");
  if (layer < 1)
    throw std::invalid_argument("expansion_subgraph: layer must be >= 1");
  Eigen::VectorXi dist(n);
  bfs_hops(g.adjacency(), root, dist);
  std::vector<int> vertices;
  for (int v = 0; v < n; ++v)
    if (dist[v] != kUnreachable && dist[v] <= layer) vertices.push_back(v);
  return vertices;
}

Graph expansion_subgraph(const Graph& g, int root, int layer) {
  const std::vector<int> vertices = expansion_vertices(g, root, layer);
  const int m = static_cast<int>(vertices.size());
  Matrix sub(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      sub(i, j) = g.adjacency()(vertices[i], vertices[j]);
  return Graph(std::move(sub), g.label());
}

int graph_diameter_hops(const Graph& g) {
  const Eigen::MatrixXi d = shortest_path_distances(g);
  return d.maxCoeff();  // unreachable sentinel is -1, never the max for n>=1
}

}  // namespace haqjsk
