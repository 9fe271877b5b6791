#ifndef HAQJSK_SYNTHETIC_HPP
#define HAQJSK_SYNTHETIC_HPP

#include <cstdint>
#include <random>

#include "haqjsk/graph.hpp"

namespace haqjsk {

/// Erdos-Renyi G(n, p) with unit edge weights.
Graph erdos_renyi(int n, double p, std::mt19937_64& rng);

/// Erdos-Renyi conditioned on connectivity (rejection sampling; falls back
/// to adding a random spanning path after 1000 rejections).
Graph random_connected_graph(int n, double p, std::mt19937_64& rng);

/// Dataset of ER graphs with vertex counts in [min_vertices, max_vertices]
/// and labels assigned round-robin over class_count classes.
GraphDataset random_dataset(int graphs, int min_vertices, int max_vertices,
                            double p, int class_count, std::mt19937_64& rng);

/// Uniformly random permutation of 0..n-1.
std::vector<int> random_permutation(int n, std::mt19937_64& rng);

/// Relabels vertices: adjacency(perm[i], perm[j]) = old(i, j).
Graph permute_graph(const Graph& g, const std::vector<int>& perm);

}  // namespace haqjsk

#endif
