#pragma once

#include <span>
#include <vector>

#include "invopt/graph.hpp"
#include "invopt/inverse.hpp"

namespace invopt {

struct FlowInstance {
  Digraph graph;
  std::vector<double> capacities;
  std::vector<double> flow;
  int source = 0;
  int sink = 0;
};

// Throws ValidationError unless 0 <= f <= c, conservation holds at every
// node except source/sink, and f is maximum (no residual s->t path).
// Returns warnings (e.g. arcs with f = c = 0 contribute no residual arcs).
std::vector<std::string> validate_flow_instance(const FlowInstance& fi);

// Forward arc per f(e) < c(e) with length +w'(e); backward arc per f(e) > 0
// with length -w'(e). Presence follows the strict inequalities exactly.
struct ResidualArc {
  int tail = 0;
  int head = 0;
  int arc = 0;           // original arc id
  bool forward = false;  // true: +w'(arc), false: -w'(arc)
};

struct ResidualGraph {
  int node_count = 0;
  std::vector<ResidualArc> arcs;

  Digraph digraph() const;
};

ResidualGraph build_residual(const FlowInstance& fi);

InverseBuild build_inverse_min_cost_flow(const FlowInstance& fi, double delta);

// Minimization orientation: every residual cycle length under w' >= delta.
InverseResult inverse_min_cost_flow(const FlowInstance& fi,
                                    const WeightVector& w, double delta,
                                    const QpSettings& qs = {});

// Shortest path tree, direct program: d_r = 0; d_a + w'(a,b) = d_b on tree
// arcs; d_a + w'(a,b) >= d_b + delta off the tree. d variables are free.
InverseBuild build_inverse_sp_tree(const Digraph& g,
                                   std::span<const int> tree_arcs, int root,
                                   double delta);
InverseResult inverse_sp_tree(const Digraph& g, const WeightVector& w,
                              int root, std::span<const int> tree_arcs,
                              double delta, const QpSettings& qs = {});

void require_spanning_out_tree(const Digraph& g,
                               std::span<const int> tree_arcs, int root);

}  // namespace invopt
