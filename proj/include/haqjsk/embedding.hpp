#ifndef HAQJSK_EMBEDDING_HPP
#define HAQJSK_EMBEDDING_HPP

#include <iosfwd>
#include <vector>

#include "haqjsk/graph.hpp"
#include "haqjsk/util.hpp"

namespace haqjsk {

/// Shannon entropy (nats) of the degree distribution of the layer-expansion
/// subgraph rooted at `root`; 0 for single-vertex or edgeless subgraphs.
double subgraph_entropy(const Graph& g, int root, int layer);

/// Depth-based vertex representation: entry k-1 is subgraph_entropy at layer
/// k. Beyond the root's eccentricity the value saturates at the connected
/// component's entropy.
Vector db_representation(const Graph& g, int root, int max_layer);

/// All rows of db_representation for one graph, vertex_count x max_layer.
Matrix graph_embeddings(const Graph& g, int max_layer);

struct EmbeddingOwner {
  int graph_index = 0;
  int vertex_index = 0;
};

/// Stacked depth-based representations for a whole dataset, rows ordered by
/// (graph index, vertex index).
struct EmbeddingTable {
  Matrix rows;  // total vertex count x max_layer
  std::vector<EmbeddingOwner> owners;
  std::vector<int> graph_row_offsets;  // size graphs+1; rows of graph p are [offsets[p], offsets[p+1])
  int max_layer = 0;
};

EmbeddingTable dataset_embeddings(const GraphDataset& ds, int max_layer,
                                  Execution exec = Execution::Parallel);

/// K choice: min(greatest shortest-path length over all graphs, cap).
int auto_max_layer(const GraphDataset& ds, int cap = 10);

/// Tab-separated dump: graph_index, vertex_index, then the K values with 12
/// significant digits, one vertex per line.
void write_embedding_table(const EmbeddingTable& table, std::ostream& out);

/// Column-wise z-scoring (constant columns pass through). Off by default in
/// the pipeline; exposed as a config knob.
EmbeddingTable standardize(const EmbeddingTable& table);

}  // namespace haqjsk

#endif
