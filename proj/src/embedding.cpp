#include "haqjsk/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace haqjsk {

namespace {

// Shannon entropy of the degree-normalized distribution, summed over a
// value-sorted copy so the result is independent of vertex order.
double degree_entropy(std::vector<double> degrees) {
  std::sort(degrees.begin(), degrees.end());
  double total = 0.0;
  for (double d : degrees) total += d;
  if (total <= 0.0) return 0.0;
  double weighted_log = 0.0;  // sum d ln d
  for (double d : degrees)
    if (d > 0.0) weighted_log += d * std::log(d);
  const double h = std::log(total) - weighted_log / total;
  return std::max(0.0, h);
}

}  // namespace

double subgraph_entropy(const Graph& g, int root, int layer) {
  const Graph sub = expansion_subgraph(g, root, layer);
  if (sub.vertex_count() == 1) return 0.0;
  const Vector degrees = degree_vector(sub);
  return degree_entropy(
      std::vector<double>(degrees.data(), degrees.data() + degrees.size()));
}

namespace {

// All layers for one root in O(n^2): vertices join in BFS-distance order and
// each join updates the member degrees incrementally.
void root_embedding(const Graph& g, const Eigen::MatrixXi& dist, int root,
                    int max_layer, Matrix& out) {
  const int n = g.vertex_count();
  const Matrix& a = g.adjacency();
  std::vector<std::vector<int>> by_distance(n);
  int eccentricity = 0;
  for (int v = 0; v < n; ++v) {
    const int d = dist(root, v);
    if (d == kUnreachable) continue;
    by_distance[d].push_back(v);
    eccentricity = std::max(eccentricity, d);
  }
  std::vector<int> members = {root};
  std::vector<double> degrees(n, 0.0);
  double saturated = 0.0;
  for (int layer = 1; layer <= max_layer; ++layer) {
    if (layer <= eccentricity) {
      for (int v : by_distance[layer]) {
        for (int u : members) {
          const double w = a(u, v);
          degrees[u] += w;
          degrees[v] += w;
        }
        members.push_back(v);
      }
      std::vector<double> member_degrees;
      member_degrees.reserve(members.size());
      for (int u : members) member_degrees.push_back(degrees[u]);
      saturated = members.size() == 1 ? 0.0
                                      : degree_entropy(std::move(member_degrees));
    }
    out(root, layer - 1) = saturated;
  }
}

}  // namespace

Matrix graph_embeddings(const Graph& g, int max_layer) {
  if (max_layer < 1)
    throw std::invalid_argument("graph_embeddings: max_layer must be >= 1");
  const int n = g.vertex_count();
  const Eigen::MatrixXi dist = shortest_path_distances(g);
  Matrix out(n, max_layer);
  for (int root = 0; root < n; ++root)
    root_embedding(g, dist, root, max_layer, out);
  return out;
}

Vector db_representation(const Graph& g, int root, int max_layer) {
  if (max_layer < 1)
    throw std::invalid_argument("db_representation: max_layer must be >= 1");
  if (root < 0 || root >= g.vertex_count())
    throw std::invalid_argument("db_representation: root out of range");
  const Eigen::MatrixXi dist = shortest_path_distances(g);
  Matrix out = Matrix::Zero(g.vertex_count(), max_layer);
  root_embedding(g, dist, root, max_layer, out);
  return out.row(root).transpose();
}

EmbeddingTable dataset_embeddings(const GraphDataset& ds, int max_layer,
                                  Execution exec) {
  validate_dataset(ds);
  if (max_layer < 1)
    throw std::invalid_argument("dataset_embeddings: max_layer must be >= 1");
  const int graph_count = static_cast<int>(ds.graphs.size());
  EmbeddingTable table;
  table.max_layer = max_layer;
  table.graph_row_offsets.resize(graph_count + 1, 0);
  for (int p = 0; p < graph_count; ++p)
    table.graph_row_offsets[p + 1] =
        table.graph_row_offsets[p] + ds.graphs[p].vertex_count();
  const int total = table.graph_row_offsets.back();
  table.rows.resize(total, max_layer);
  table.owners.resize(total);

  const bool parallel = exec == Execution::Parallel;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int p = 0; p < graph_count; ++p) {
    const Matrix rows = graph_embeddings(ds.graphs[p], max_layer);
    const int offset = table.graph_row_offsets[p];
    table.rows.middleRows(offset, rows.rows()) = rows;
    for (int v = 0; v < rows.rows(); ++v)
      table.owners[offset + v] = EmbeddingOwner{p, v};
  }
  return table;
}

int auto_max_layer(const GraphDataset& ds, int cap) {
  validate_dataset(ds);
  int longest = 0;
  for (const Graph& g : ds.graphs)
    longest = std::max(longest, graph_diameter_hops(g));
  return std::max(1, std::min(longest, cap));
}

void write_embedding_table(const EmbeddingTable& table, std::ostream& out) {
  char buffer[64];
  for (Eigen::Index r = 0; r < table.rows.rows(); ++r) {
    out << table.owners[r].graph_index << '\t' << table.owners[r].vertex_index;
    for (Eigen::Index c = 0; c < table.rows.cols(); ++c) {
      std::snprintf(buffer, sizeof(buffer), "%.12g", table.rows(r, c));
      out << '\t' << buffer;
    }
    out << '\n';
  }
}

EmbeddingTable standardize(const EmbeddingTable& table) {
  EmbeddingTable out = table;
  const auto rows = out.rows.rows();
  if (rows < 2) return out;
  for (Eigen::Index c = 0; c < out.rows.cols(); ++c) {
    const double mean = out.rows.col(c).mean();
    const double var =
        (out.rows.col(c).array() - mean).square().sum() / double(rows - 1);
    const double sd = std::sqrt(var);
    if (sd > 0.0) out.rows.col(c) = (out.rows.col(c).array() - mean) / sd;
  }
  return out;
}

}  // namespace haqjsk
