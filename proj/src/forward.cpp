#include "invopt/forward.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "invopt/errors.hpp"

namespace invopt {

ForwardResult max_weight_basis(const MatroidOracle& m, const WeightVector& w) {
  if (static_cast<int>(w.size()) != m.ground_size())
    throw ValidationError("weight vector length mismatch");
  std::vector<int> order(m.ground_size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (w[a] != w[b]) return w[a] > w[b];
    return a < b;
  });
  ForwardResult res;
  std::vector<int> acc;
  for (int e : order) {
    acc.push_back(e);
    if (m.independent(acc)) {
      res.value += w[e];
    } else {
      acc.pop_back();
    }
  }
  res.elements = std::move(acc);
  std::sort(res.elements.begin(), res.elements.end());
  return res;
}

namespace {

struct CleArc {
  int tail;
  int head;
  double weight;
  int id;
};

// Value of the maximum arborescence via the contraction recursion.
std::optional<double> cle_value(int n, std::vector<CleArc> arcs, int root) {
  double base = 0.0;
  while (true) {
    std::vector<int> best(n, -1);
    for (size_t i = 0; i < arcs.size(); ++i) {
      const CleArc& a = arcs[i];
      if (a.tail == a.head || a.head == root) continue;
      int b = best[a.head];
      if (b < 0 || a.weight > arcs[b].weight ||
          (a.weight == arcs[b].weight && a.id < arcs[b].id))
        best[a.head] = static_cast<int>(i);
    }
    for (int v = 0; v < n; ++v)
      if (v != root && best[v] < 0) return std::nullopt;

    // Look for a cycle among the chosen in-arcs.
    std::vector<int> color(n, 0);  // 0 new, 1 in progress, 2 done
    std::vector<int> cycle;
    for (int v = 0; v < n && cycle.empty(); ++v) {
      int u = v;
      std::vector<int> path;
      while (u != root && color[u] == 0) {
        color[u] = 1;
        path.push_back(u);
        u = arcs[best[u]].tail;
      }
      if (u != root && color[u] == 1) {
        auto it = std::find(path.begin(), path.end(), u);
        cycle.assign(it, path.end());
      }
      for (int x : path) color[x] = 2;
    }
    if (cycle.empty()) {
      double total = base;
      for (int v = 0; v < n; ++v)
        if (v != root) total += arcs[best[v]].weight;
      return total;
    }

    // Contract the cycle into a fresh node and adjust entering weights.
    std::vector<char> in_cycle(n, 0);
    for (int v : cycle) {
      in_cycle[v] = 1;
      base += arcs[best[v]].weight;
    }
    std::vector<int> remap(n);
    int next = 0;
    for (int v = 0; v < n; ++v)
      if (!in_cycle[v]) remap[v] = next++;
    int cycle_node = next++;
    for (int v = 0; v < n; ++v)
      if (in_cycle[v]) remap[v] = cycle_node;

    std::vector<CleArc> reduced;
    for (const CleArc& a : arcs) {
      int tu = remap[a.tail], hv = remap[a.head];
      if (tu == hv) continue;
      double wgt = a.weight;
      if (hv == cycle_node) wgt -= arcs[best[a.head]].weight;
      reduced.push_back({tu, hv, wgt, a.id});
    }
    n = next;
    root = remap[root];
    arcs = std::move(reduced);
  }
}

std::vector<CleArc> allowed_arcs(const Digraph& g, const WeightVector& w,
                                 const std::vector<char>& allowed) {
  std::vector<CleArc> arcs;
  for (int a = 0; a < g.arc_count(); ++a)
    if (allowed.empty() || allowed[a])
      arcs.push_back({g.tail(a), g.head(a), w[a], a});
  return arcs;
}

// Greedy id-ascending forcing: keep an arc whenever the optimum is still
// attainable with it pinned, which yields the lexicographically smallest
// optimal structure.
template <typename Feasible, typename Value>
std::optional<ForwardResult> lex_force(int num_elements, int structure_size,
                                       Feasible can_force, Value value) {
  std::vector<char> allowed(num_elements, 1);
  std::optional<double> opt = value(allowed);
  if (!opt) return std::nullopt;
  const double tol = 1e-9 * (1.0 + std::abs(*opt));
  ForwardResult res;
  res.value = *opt;
  for (int e = 0; e < num_elements &&
                  static_cast<int>(res.elements.size()) < structure_size;
       ++e) {
    if (!allowed[e]) continue;
    std::vector<char> candidate = allowed;
    if (!can_force(e, candidate)) continue;
    std::optional<double> forced = value(candidate);
    if (forced && *forced >= *opt - tol) {
      res.elements.push_back(e);
      allowed = std::move(candidate);
    }
  }
  if (static_cast<int>(res.elements.size()) != structure_size)
    throw ValidationError("forcing pass failed to complete a structure");
  return res;
}

}  // namespace

std::optional<double> max_arborescence_value(const Digraph& g,
                                             const WeightVector& w, int root,
                                             const std::vector<char>& allowed) {
  return cle_value(g.node_count, allowed_arcs(g, w, allowed), root);
}

std::optional<ForwardResult> max_weight_arborescence(const Digraph& g,
                                                     const WeightVector& w,
                                                     int root) {
  if (static_cast<int>(w.size()) != g.arc_count())
    throw ValidationError("weight vector length mismatch");
  if (root < 0 || root >= g.node_count)
    throw ValidationError("root out of range");
  auto can_force = [&](int a, std::vector<char>& candidate) {
    if (g.tail(a) == g.head(a) || g.head(a) == root) return false;
    for (int b = 0; b < g.arc_count(); ++b)
      if (b != a && g.head(b) == g.head(a)) candidate[b] = 0;
    return true;
  };
  auto value = [&](const std::vector<char>& allowed) {
    return max_arborescence_value(g, w, root, allowed);
  };
  return lex_force(g.arc_count(), g.node_count - 1, can_force, value);
}

namespace {

constexpr double kBig = 1e9;

// Potential-based shortest augmenting path assignment on the negated
// weights; deterministic column scan order.
std::optional<double> assignment_value(int n,
                                       const std::vector<std::vector<double>>&
                                           cost) {
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kBig * 4);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      double delta = kBig * 4;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (j1 < 0) return std::nullopt;
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j) {
    double c = cost[p[j] - 1][j - 1];
    if (c >= kBig / 2) return std::nullopt;  // used a missing edge
    total += c;
  }
  return -total;
}

}  // namespace

std::optional<double> max_perfect_matching_value(
    const BipartiteGraph& g, const WeightVector& w,
    const std::vector<char>& allowed) {
  if (g.left_count != g.right_count || g.left_count == 0) return std::nullopt;
  int n = g.left_count;
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, kBig));
  for (int e = 0; e < g.edge_count(); ++e)
    if (allowed.empty() || allowed[e]) cost[g.left(e)][g.right(e)] = -w[e];
  return assignment_value(n, cost);
}

std::optional<ForwardResult> max_weight_perfect_matching(
    const BipartiteGraph& g, const WeightVector& w) {
  if (static_cast<int>(w.size()) != g.edge_count())
    throw ValidationError("weight vector length mismatch");
  if (g.left_count != g.right_count) return std::nullopt;
  auto can_force = [&](int e, std::vector<char>& candidate) {
    for (int b = 0; b < g.edge_count(); ++b)
      if (b != e &&
          (g.left(b) == g.left(e) || g.right(b) == g.right(e)))
        candidate[b] = 0;
    return true;
  };
  auto value = [&](const std::vector<char>& allowed) {
    return max_perfect_matching_value(g, w, allowed);
  };
  return lex_force(g.edge_count(), g.left_count, can_force, value);
}

}  // namespace invopt
