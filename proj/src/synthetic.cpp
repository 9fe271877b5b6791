#include "haqjsk/synthetic.hpp"

#include <algorithm>
#include <numeric>

namespace haqjsk {

Graph erdos_renyi(int n, double p, std::mt19937_64& rng) {
  Matrix a = Matrix::Zero(n, n);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng) < p) a(i, j) = a(j, i) = 1.0;
  return Graph(std::move(a));
}

namespace {

bool is_connected(const Graph& g) {
  return shortest_path_distances(g).minCoeff() != kUnreachable;
}

}  // namespace

Graph random_connected_graph(int n, double p, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Graph g = erdos_renyi(n, p, rng);
    if (is_connected(g)) return g;
  }
  // Stitch a random spanning path through the last sample.
  Matrix a = erdos_renyi(n, p, rng).adjacency();
  std::vector<int> order = random_permutation(n, rng);
  for (int i = 0; i + 1 < n; ++i) a(order[i], order[i + 1]) = a(order[i + 1], order[i]) = 1.0;
  return Graph(std::move(a));
}

GraphDataset random_dataset(int graphs, int min_vertices, int max_vertices,
                            double p, int class_count, std::mt19937_64& rng) {
  GraphDataset ds;
  ds.name = "synthetic";
  ds.class_count = class_count;
  std::uniform_int_distribution<int> size(min_vertices, max_vertices);
  for (int i = 0; i < graphs; ++i) {
    Graph g = erdos_renyi(size(rng), p, rng);
    ds.graphs.emplace_back(g.adjacency(), i % class_count);
  }
  return ds;
}

std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

Graph permute_graph(const Graph& g, const std::vector<int>& perm) {
  const int n = g.vertex_count();
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(perm[i], perm[j]) = g.adjacency()(i, j);
  return Graph(std::move(a), g.label());
}

}  // namespace haqjsk
