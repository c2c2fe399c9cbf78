#pragma once

#include <optional>
#include <span>
#include <vector>

#include "invopt/constraints.hpp"
#include "invopt/instance.hpp"
#include "invopt/matroid.hpp"
#include "invopt/qp.hpp"
#include "invopt/result.hpp"

namespace invopt {

// Directed bipartite swap graph over the ground elements: node i = element i.
// A1 arcs (x in B -> y outside) certify B - x + y independent in the first
// matroid and carry length +w'(x); A2 arcs (y -> x) certify independence in
// the second matroid and carry length -w'(y).
struct ExchangeArc {
  int tail = 0;
  int head = 0;
  bool from_first = false;  // true: A1 (tail in B), false: A2 (tail outside)
};

struct ExchangeGraph {
  int ground_size = 0;
  std::vector<char> in_basis;  // per element
  std::vector<ExchangeArc> arcs;

  Digraph digraph() const;
};

ExchangeGraph exchange_graph(const MatroidOracle& m1, const MatroidOracle& m2,
                             std::span<const int> basis);

// A fully assembled inverse formulation, before solving. `weight_var[e]` is
// -1 for elements pinned to a constant (fixed_value) instead of a variable.
struct InverseBuild {
  ConstraintSystem sys;
  std::vector<int> weight_var;
  std::vector<double> fixed_value;
  std::optional<SymbolicDigraph> aux;  // the graph R2 was applied to, if any
  std::vector<int> length_var;
  std::vector<int> dist_var;

  QpProblem problem(const WeightVector& w) const;
  std::vector<double> extract_weights(const QpSolution& s) const;
};

// Single matroid: margin rows w'(e) - w'(f) >= delta for every
// f outside B and every e != f in the fundamental circuit C_B(f).
InverseBuild build_inverse_matroid(const MatroidOracle& m,
                                   std::span<const int> basis, double delta);
InverseResult inverse_matroid(const MatroidOracle& m, const WeightVector& w,
                              std::span<const int> basis, double delta,
                              const QpSettings& qs = {});

// Matroid intersection: exchange graph + R2 cycle bounds. Elements with
// fixed[e] set are pinned to fixed_values[e] (no variable, no anchor).
InverseBuild build_inverse_matroid_intersection(
    const MatroidOracle& m1, const MatroidOracle& m2,
    std::span<const int> basis, double delta,
    const std::vector<char>& fixed = {},
    const std::vector<double>& fixed_values = {});
InverseResult inverse_matroid_intersection(const MatroidOracle& m1,
                                           const MatroidOracle& m2,
                                           const WeightVector& w,
                                           std::span<const int> basis,
                                           double delta,
                                           const QpSettings& qs = {});

// Arborescence = graphic /\ partition intersection; sense=Min solves on
// negated weights and negates back.
InverseResult inverse_arborescence(const Digraph& g, const WeightVector& w,
                                   std::span<const int> tree_arcs, int root,
                                   double delta, OptSense sense = OptSense::Max,
                                   const QpSettings& qs = {});

// Shortest s-t path via the augmented min-arborescence reduction; the added
// zero-weight arcs from t are constants, never perturbed. Returns w' on the
// original arcs.
InverseResult inverse_st_path(const Digraph& g, const WeightVector& w, int s,
                              int t, std::span<const int> path_arcs,
                              double delta, const QpSettings& qs = {});

// The augmented instance the s-t path reduction solves (exposed for oracle
// cross-checks): digraph with appended zero-weight arcs from t, the
// designated arborescence, and the fixed-element mask.
struct StPathReduction {
  Digraph augmented;
  std::vector<int> designated;   // path arcs + augmented coverage arcs
  std::vector<char> fixed;       // per augmented-graph element
  std::vector<double> fixed_values;
  int root = 0;                  // = s
};
StPathReduction st_path_reduction(const Digraph& g, int s, int t,
                                  std::span<const int> path_arcs);

// Validation helpers shared with instance loading.
void require_arborescence(const Digraph& g, std::span<const int> tree_arcs,
                          int root);
// Returns the arcs of the path in s->t order.
std::vector<int> require_st_path(const Digraph& g, int s, int t,
                                 std::span<const int> path_arcs);

}  // namespace invopt
