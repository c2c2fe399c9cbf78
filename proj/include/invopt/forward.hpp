#pragma once

#include <optional>
#include <vector>

#include "invopt/graph.hpp"
#include "invopt/matroid.hpp"

namespace invopt {

struct ForwardResult {
  double value = 0.0;
  std::vector<int> elements;  // sorted ascending
};

// Matroid greedy (weight desc, id asc). Among maximum-weight bases this
// returns the one whose sorted id sequence is lexicographically smallest.
ForwardResult max_weight_basis(const MatroidOracle& m, const WeightVector& w);

// Chu-Liu/Edmonds value recursion plus an id-ascending forcing pass for the
// lexicographic tie rule. nullopt when no spanning r-arborescence exists.
std::optional<ForwardResult> max_weight_arborescence(const Digraph& g,
                                                     const WeightVector& w,
                                                     int root);

// Value of the best arborescence using only `allowed` arcs; nullopt if none.
std::optional<double> max_arborescence_value(const Digraph& g,
                                             const WeightVector& w, int root,
                                             const std::vector<char>& allowed);

// Potential-based assignment (shortest augmenting paths) plus the same
// forcing pass. Requires left_count == right_count; nullopt when no perfect
// matching exists.
std::optional<ForwardResult> max_weight_perfect_matching(
    const BipartiteGraph& g, const WeightVector& w);

std::optional<double> max_perfect_matching_value(
    const BipartiteGraph& g, const WeightVector& w,
    const std::vector<char>& allowed);

}  // namespace invopt
