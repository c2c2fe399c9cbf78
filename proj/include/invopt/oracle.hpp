#pragma once

#include <vector>

#include "invopt/instance.hpp"
#include "invopt/qp.hpp"

namespace invopt {

// One competitor of the designated solution, reduced to the margin row it
// induces: diff . w' >= delta, where diff is oriented so larger is better
// for the designated solution (max and min kinds both normalize this way).
struct CompetitorRow {
  std::vector<double> diff;      // per original element
  std::vector<int> display;      // competitor support, for reporting
};

// Exhaustive competitor enumeration for the instance's natural
// feasible set (bases, common bases, perfect matchings, simple s-t paths,
// integral maximum flows, per-vertex root paths). Desk-scale guards:
// <= 12 matroid ground elements, <= 6+6 bipartite, <= 6-node digraphs,
// <= 100000 competitors.
std::vector<CompetitorRow> enumerate_competitor_rows(const Instance& inst,
                                                     OptSense sense = OptSense::Max);

struct VerifyReport {
  bool ok = false;
  std::vector<int> worst_competitor;
  double margin = 0.0;  // +infinity when the designated solution is the
                        // unique feasible one
};

// ok iff every competitor loses to the designated solution by at least
// delta - tol under w_prime; returns the competitor attaining the minimum.
VerifyReport verify_delta_optimal(const Instance& inst,
                                  const WeightVector& w_prime, double tol,
                                  OptSense sense = OptSense::Max);

// Reference objective: the same least-distance QP solved over directly
// enumerated competitor-difference rows, bypassing all auxiliary-graph
// machinery. For st-path the enumeration runs on the augmented
// min-arborescence instance the solver actually targets.
double oracle_objective(const Instance& inst, OptSense sense = OptSense::Max,
                        const QpSettings& qs = {});

// Enumeration helpers (desk-scale, guarded).
std::vector<std::vector<int>> enumerate_perfect_matchings(
    const BipartiteGraph& g);
std::vector<std::vector<int>> enumerate_simple_paths(const Digraph& g, int s,
                                                     int t);
std::vector<std::vector<double>> enumerate_integral_max_flows(
    const Digraph& g, const std::vector<double>& capacities, int source,
    int sink, double max_value);

}  // namespace invopt
