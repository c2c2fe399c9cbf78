#pragma once

#include <span>
#include <vector>

#include "invopt/graph.hpp"
#include "invopt/inverse.hpp"

namespace invopt {

// Contracted auxiliary digraph over the left vertices: one arc per
// non-matching edge (z, y), from x = M^-1(y) to z, excluding z == x.
// Symbolic length: w'(matched edge of x) - w'(edge (z, M(x))).
struct AuxArc {
  int tail = 0;           // x
  int head = 0;           // z
  int matched_edge = 0;   // edge id of (x, M(x))
  int other_edge = 0;     // edge id of (z, M(x))
};

struct AuxGraphH {
  int left_count = 0;
  std::vector<int> matched_edge_of_left;  // per left vertex, edge id into M
  std::vector<AuxArc> arcs;

  Digraph digraph() const;
};

AuxGraphH build_aux_graph(const BipartiteGraph& g,
                          std::span<const int> matching);

InverseBuild build_inverse_perfect_matching(const BipartiteGraph& g,
                                            std::span<const int> matching,
                                            double delta);

InverseResult inverse_perfect_matching(const BipartiteGraph& g,
                                       const WeightVector& w,
                                       std::span<const int> matching,
                                       double delta, const QpSettings& qs = {});

void require_perfect_matching(const BipartiteGraph& g,
                              std::span<const int> matching);

}  // namespace invopt
