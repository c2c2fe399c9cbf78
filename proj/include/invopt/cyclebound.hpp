#pragma once

#include <vector>

#include "invopt/constraints.hpp"

namespace invopt {

// Result of compiling a SymbolicDigraph into constraints appended to a base
// system. Variable ids refer into `sys`.
struct CompiledCycleBound {
  ConstraintSystem sys;
  std::vector<int> length_var;  // per arc
  std::vector<int> dist_var;    // n*n, row-major [x*n + z]; empty for R1
  int first_emitted_row = 0;    // rows before this index came from `base`
};

// Compact region R2: binds l_a to each arc term, then emits
//   d_xy <= l_(xy)                 for every arc (x,y)
//   d_xz <= d_xy + l_(yz)          for every x in V and every arc (y,z)
//   d_xx >= delta                  for every x in V
// over fresh l (per arc) and d (per ordered node pair) variables.
// Row count excluding bindings is m + m*n + n; distance vars number n^2.
CompiledCycleBound r2_constraints(const SymbolicDigraph& g, double delta,
                                  const ConstraintSystem& base);

// Exponential reference region R1: the same bindings plus one row
//   sum_{a in C} l_a >= delta
// per simple directed cycle C (vertex-simple; parallel arcs give distinct
// cycles; self-loops are cycles). Guarded at max_cycles.
CompiledCycleBound r1_constraints_enumerated(const SymbolicDigraph& g,
                                             double delta,
                                             const ConstraintSystem& base,
                                             long max_cycles = 100000);

// All simple directed cycles as arc-id lists, deterministic order (DFS from
// each least-indexed node, adjacency by arc id). Guarded at max_cycles.
std::vector<std::vector<int>> enumerate_simple_cycles(const Digraph& g,
                                                      long max_cycles = 100000);

}  // namespace invopt
