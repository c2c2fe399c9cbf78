#pragma once

// Shared test helpers: deterministic RNG wrappers, instance generators, and
// independent completions used by the oracle-style checks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "invopt/constraints.hpp"
#include "invopt/graph.hpp"
#include "invopt/instance.hpp"

namespace invopt::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Evaluates arc lengths of a SymbolicDigraph at a weight assignment, where
// x maps variable ids to values.
inline std::vector<double> arc_lengths(const SymbolicDigraph& g,
                                       const std::vector<double>& x) {
  std::vector<double> l;
  l.reserve(g.terms.size());
  for (const auto& t : g.terms) l.push_back(t.eval(x));
  return l;
}

// Bellman-Ford walk distances from src over explicit arc lengths; requires
// no negative cycle reachable from src (the caller guarantees it).
inline std::vector<double> walk_distances(const Digraph& g,
                                          const std::vector<double>& len,
                                          int src) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.node_count, inf);
  dist[src] = 0.0;
  for (int round = 0; round < g.node_count; ++round)
    for (int a = 0; a < g.arc_count(); ++a)
      if (dist[g.tail(a)] < inf)
        dist[g.head(a)] =
            std::min(dist[g.head(a)], dist[g.tail(a)] + len[a]);
  return dist;
}

// A feasible completion of the distance variables for R2, given arc lengths
// whose cycles all measure >= delta: reachable pairs take true walk
// distances, unreachable pairs take a large cap shifted by a global
// potential so triangle rows still hold.
inline std::vector<double> r2_distance_completion(
    const Digraph& g, const std::vector<double>& len, double delta) {
  const double inf = std::numeric_limits<double>::infinity();
  const int n = g.node_count;
  double scale = delta;
  for (double l : len) scale += std::abs(l);
  const double cap = 4.0 * scale + 1000.0;

  // Global potential: distances from a super-source with zero arcs to all.
  std::vector<double> phi(n, 0.0);
  for (int round = 0; round < n; ++round)
    for (int a = 0; a < g.arc_count(); ++a)
      phi[g.head(a)] = std::min(phi[g.head(a)], phi[g.tail(a)] + len[a]);

  std::vector<double> d(static_cast<size_t>(n) * n);
  for (int x = 0; x < n; ++x) {
    std::vector<double> dist = walk_distances(g, len, x);
    for (int z = 0; z < n; ++z)
      d[static_cast<size_t>(x) * n + z] =
          dist[z] < inf ? dist[z] : cap + phi[z];
    // d_xx must reflect closed walks, not the trivial zero.
    double closed = inf;
    for (int a = 0; a < g.arc_count(); ++a)
      if (g.head(a) == x && dist[g.tail(a)] < inf)
        closed = std::min(closed, dist[g.tail(a)] + len[a]);
    d[static_cast<size_t>(x) * n + x] = closed < inf ? closed : cap + phi[x];
  }
  return d;
}

// Random connected digraph on n nodes with arc density in [lo, hi].
inline Digraph random_digraph(Rng& rng, int n, double density_lo,
                              double density_hi) {
  Digraph g;
  g.node_count = n;
  double density = uniform(rng, density_lo, density_hi);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      if (uniform(rng, 0.0, 1.0) < density) g.arcs.push_back({u, v});
    }
  return g;
}

// Random connected undirected graph encoded as a digraph (arc per edge).
inline Digraph random_connected_graph(Rng& rng, int n, int extra_edges) {
  Digraph g;
  g.node_count = n;
  for (int v = 1; v < n; ++v) {
    int u = uniform_int(rng, 0, v - 1);
    g.arcs.push_back({u, v});
  }
  for (int e = 0; e < extra_edges; ++e) {
    int u = uniform_int(rng, 0, n - 1);
    int v = uniform_int(rng, 0, n - 1);
    if (u == v) continue;
    g.arcs.push_back({u, v});
  }
  return g;
}

inline WeightVector random_weights(Rng& rng, int n, double lo, double hi) {
  WeightVector w(n);
  for (double& v : w) v = uniform(rng, lo, hi);
  return w;
}

// ---- Instance generators (also used by the acceptance suite) ----

// Random matroid instance: graphic on a small connected multigraph, with a
// random basis designated.
inline Instance random_matroid_instance(Rng& rng, double delta_lo = 0.0,
                                        double delta_hi = 2.0) {
  Instance inst;
  inst.kind = Kind::Matroid;
  int n = uniform_int(rng, 3, 5);
  Digraph g = random_connected_graph(rng, n, uniform_int(rng, 1, 4));
  while (g.arc_count() > 10) g.arcs.pop_back();
  inst.digraph = g;
  inst.weights = random_weights(rng, g.arc_count(), 0.0, 4.0);
  inst.delta = uniform(rng, delta_lo, delta_hi);
  // Designate a random basis: greedy under fresh random weights.
  WeightVector pick = random_weights(rng, g.arc_count(), 0.0, 1.0);
  std::vector<int> order(g.arc_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return pick[a] > pick[b]; });
  std::vector<int> acc;
  // Greedy forest construction mirrors graphic independence.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (int e : order) {
    int ru = find(g.tail(e)), rv = find(g.head(e));
    if (ru == rv) continue;
    parent[ru] = rv;
    acc.push_back(e);
  }
  std::sort(acc.begin(), acc.end());
  inst.designated = acc;
  return inst;
}

// Random digraph that contains at least one r-arborescence, plus a random
// designated arborescence grown by reachability.
inline std::optional<Instance> random_arborescence_instance(
    Rng& rng, double delta_lo = 0.0, double delta_hi = 2.0) {
  Instance inst;
  inst.kind = Kind::Arborescence;
  int n = uniform_int(rng, 3, 4);
  Digraph g = random_digraph(rng, n, 0.4, 0.8);
  if (g.arc_count() == 0 || g.arc_count() > 12) return std::nullopt;
  inst.root = 0;
  // Grow a designated arborescence by random reachable expansion.
  std::vector<int> tree;
  std::vector<char> covered(n, 0);
  covered[0] = 1;
  for (int step = 0; step < n - 1; ++step) {
    std::vector<int> frontier;
    for (int a = 0; a < g.arc_count(); ++a)
      if (covered[g.tail(a)] && !covered[g.head(a)]) frontier.push_back(a);
    if (frontier.empty()) return std::nullopt;
    int a = frontier[uniform_int(rng, 0, int(frontier.size()) - 1)];
    tree.push_back(a);
    covered[g.head(a)] = 1;
  }
  std::sort(tree.begin(), tree.end());
  inst.digraph = g;
  inst.designated = tree;
  inst.weights = random_weights(rng, g.arc_count(), 0.0, 4.0);
  inst.delta = uniform(rng, delta_lo, delta_hi);
  return inst;
}

// Random generic matroid-intersection instance: reuse the arborescence
// structure but expose it as an explicit graphic + partition pair.
inline std::optional<Instance> random_intersection_instance(
    Rng& rng, double delta_lo = 0.0, double delta_hi = 2.0) {
  std::optional<Instance> arb =
      random_arborescence_instance(rng, delta_lo, delta_hi);
  if (!arb) return std::nullopt;
  Instance inst = *arb;
  inst.kind = Kind::MatroidIntersection;
  PartitionSpec spec;
  const Digraph& g = *inst.digraph;
  std::vector<std::vector<int>> in_arcs(g.node_count);
  for (int a = 0; a < g.arc_count(); ++a) in_arcs[g.head(a)].push_back(a);
  for (int v = 0; v < g.node_count; ++v) {
    if (in_arcs[v].empty()) continue;
    spec.classes.push_back(in_arcs[v]);
    spec.limits.push_back(v == inst.root ? 0 : 1);
  }
  inst.partition = std::move(spec);
  inst.root = -1;
  return inst;
}

// Random perfect-matching instance on a k x k bipartite graph containing
// the diagonal matching.
inline Instance random_matching_instance(Rng& rng, int k, double delta_lo,
                                         double delta_hi) {
  Instance inst;
  inst.kind = Kind::PerfectMatching;
  BipartiteGraph g;
  g.left_count = g.right_count = k;
  std::vector<int> matching;
  for (int i = 0; i < k; ++i) {
    matching.push_back(static_cast<int>(g.edges.size()));
    g.edges.push_back({i, i});
  }
  for (int l = 0; l < k; ++l)
    for (int r = 0; r < k; ++r) {
      if (l == r) continue;
      if (uniform(rng, 0.0, 1.0) < 0.6) g.edges.push_back({l, r});
    }
  inst.bipartite = g;
  inst.designated = matching;
  inst.weights = random_weights(rng, g.edge_count(), 0.0, 4.0);
  inst.delta = uniform(rng, delta_lo, delta_hi);
  return inst;
}

// Layered bundle digraph: every s-t path visits all layers, so the
// augmented-arborescence competitors coincide with the s-t paths.
inline Instance random_st_path_instance(Rng& rng, double delta_lo,
                                        double delta_hi) {
  Instance inst;
  inst.kind = Kind::StPath;
  int layers = uniform_int(rng, 2, 4);  // nodes = layers + 1
  Digraph g;
  g.node_count = layers + 1;
  std::vector<int> designated;
  for (int layer = 0; layer < layers; ++layer) {
    int bundle = uniform_int(rng, 1, 3);
    int pick = uniform_int(rng, 0, bundle - 1);
    for (int b = 0; b < bundle; ++b) {
      if (b == pick) designated.push_back(g.arc_count());
      g.arcs.push_back({layer, layer + 1});
    }
  }
  inst.digraph = g;
  inst.source = 0;
  inst.sink = layers;
  std::sort(designated.begin(), designated.end());
  inst.designated = designated;
  inst.weights = random_weights(rng, g.arc_count(), 0.0, 4.0);
  inst.delta = uniform(rng, delta_lo, delta_hi);
  return inst;
}

// Integral maximum flow by unit augmenting paths.
inline std::vector<double> integral_max_flow(const Digraph& g,
                                             const std::vector<int>& caps,
                                             int s, int t) {
  std::vector<int> flow(g.arc_count(), 0);
  while (true) {
    // BFS over residual arcs, one unit at a time.
    std::vector<int> via_arc(g.node_count, -1), via_dir(g.node_count, 0);
    std::vector<char> seen(g.node_count, 0);
    std::vector<int> queue = {s};
    seen[s] = 1;
    for (size_t qi = 0; qi < queue.size() && !seen[t]; ++qi) {
      int v = queue[qi];
      for (int a = 0; a < g.arc_count(); ++a) {
        if (g.tail(a) == v && flow[a] < caps[a] && !seen[g.head(a)]) {
          seen[g.head(a)] = 1;
          via_arc[g.head(a)] = a;
          via_dir[g.head(a)] = +1;
          queue.push_back(g.head(a));
        }
        if (g.head(a) == v && flow[a] > 0 && !seen[g.tail(a)]) {
          seen[g.tail(a)] = 1;
          via_arc[g.tail(a)] = a;
          via_dir[g.tail(a)] = -1;
          queue.push_back(g.tail(a));
        }
      }
    }
    if (!seen[t]) break;
    for (int v = t; v != s;) {
      int a = via_arc[v];
      flow[a] += via_dir[v];
      v = via_dir[v] > 0 ? g.tail(a) : g.head(a);
    }
  }
  return std::vector<double>(flow.begin(), flow.end());
}

// Random min-cost-flow instance with integral capacities and an extremal
// maximum flow (every arc empty or saturated), so a delta > 0 margin is
// attainable.
inline std::optional<Instance> random_flow_instance(Rng& rng, double delta_lo,
                                                    double delta_hi) {
  Instance inst;
  inst.kind = Kind::MinCostFlow;
  int n = uniform_int(rng, 3, 5);
  Digraph g = random_digraph(rng, n, 0.3, 0.6);
  if (g.arc_count() == 0 || g.arc_count() > 9) return std::nullopt;
  std::vector<int> caps(g.arc_count());
  for (int& c : caps) c = uniform_int(rng, 1, 2);
  inst.source = 0;
  inst.sink = n - 1;
  std::vector<double> f = integral_max_flow(g, caps, inst.source, inst.sink);
  double value = 0.0;
  for (int a = 0; a < g.arc_count(); ++a) {
    if (g.tail(a) == inst.source) value += f[a];
    if (g.head(a) == inst.source) value -= f[a];
  }
  if (value <= 0.0) return std::nullopt;
  for (int a = 0; a < g.arc_count(); ++a)
    if (f[a] > 0.0 && f[a] < caps[a]) return std::nullopt;  // not extremal
  inst.digraph = g;
  inst.capacities.assign(caps.begin(), caps.end());
  inst.flow = f;
  inst.weights = random_weights(rng, g.arc_count(), 0.0, 4.0);
  inst.delta = uniform(rng, delta_lo, delta_hi);
  return inst;
}

// Random DAG shortest-path-tree instance: arcs only go from lower to higher
// indices, so the enumerated path competitors match the compact program.
inline Instance random_sp_tree_instance(Rng& rng, double delta_lo,
                                        double delta_hi) {
  Instance inst;
  inst.kind = Kind::SpTree;
  int n = uniform_int(rng, 3, 5);
  Digraph g;
  g.node_count = n;
  std::vector<int> tree;
  for (int v = 1; v < n; ++v) {
    tree.push_back(g.arc_count());
    g.arcs.push_back({uniform_int(rng, 0, v - 1), v});
  }
  int extras = uniform_int(rng, 1, 4);
  for (int e = 0; e < extras; ++e) {
    int u = uniform_int(rng, 0, n - 2);
    int v = uniform_int(rng, u + 1, n - 1);
    g.arcs.push_back({u, v});
  }
  inst.digraph = g;
  inst.root = 0;
  std::sort(tree.begin(), tree.end());
  inst.designated = tree;
  inst.weights = random_weights(rng, g.arc_count(), 0.0, 3.0);
  inst.delta = uniform(rng, delta_lo, delta_hi);
  return inst;
}

}  // namespace invopt::testing
