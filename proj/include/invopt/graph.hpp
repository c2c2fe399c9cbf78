#pragma once

#include <array>
#include <vector>

namespace invopt {

// Directed multigraph. Arc ids are dense 0..arc_count-1 in insertion order;
// parallel arcs and self-loops are allowed.
struct Digraph {
  int node_count = 0;
  std::vector<std::array<int, 2>> arcs;  // {tail, head}

  int arc_count() const { return static_cast<int>(arcs.size()); }
  int tail(int a) const { return arcs[a][0]; }
  int head(int a) const { return arcs[a][1]; }
};

// Undirected bipartite graph; edge ids dense in insertion order,
// no duplicate (left, right) pairs.
struct BipartiteGraph {
  int left_count = 0;
  int right_count = 0;
  std::vector<std::array<int, 2>> edges;  // {left, right}

  int edge_count() const { return static_cast<int>(edges.size()); }
  int left(int e) const { return edges[e][0]; }
  int right(int e) const { return edges[e][1]; }
};

using WeightVector = std::vector<double>;

}  // namespace invopt
