#ifndef HAQJSK_TEST_HELPERS_HPP
#define HAQJSK_TEST_HELPERS_HPP

#include <vector>

#include "haqjsk/graph.hpp"

namespace haqjsk::testing {

inline Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges,
                        std::optional<int> label = std::nullopt) {
  Matrix a = Matrix::Zero(n, n);
  for (auto [u, v] : edges) a(u, v) = a(v, u) = 1.0;
  return Graph(std::move(a), label);
}

inline Graph k2() { return from_edges(2, {{0, 1}}); }

inline Graph path3() { return from_edges(3, {{0, 1}, {1, 2}}); }

inline Graph star(int leaves) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
  return from_edges(leaves + 1, edges);
}

inline Graph cycle(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return from_edges(n, edges);
}

inline Graph complete(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return from_edges(n, edges);
}

inline Graph edgeless(int n) { return Graph(Matrix::Zero(n, n)); }

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace haqjsk::testing

#endif
