#include "invopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "invopt/errors.hpp"
#include "invopt/flowpath.hpp"
#include "invopt/inverse.hpp"
#include "invopt/matching.hpp"
#include "invopt/matroid.hpp"

namespace invopt {
namespace {

constexpr long kCompetitorGuard = 100000;
constexpr int kMatroidGroundGuard = 12;
constexpr int kBipartiteSideGuard = 6;
constexpr int kDigraphNodeGuard = 6;

void guard_count(size_t n) {
  if (static_cast<long>(n) > kCompetitorGuard)
    throw GuardError("competitor enumeration exceeded guard");
}

void guard_digraph(const Digraph& g) {
  if (g.node_count > kDigraphNodeGuard)
    throw GuardError("digraph enumeration guarded at " +
                     std::to_string(kDigraphNodeGuard) + " nodes");
}

std::vector<double> indicator(int n, std::span<const int> ids) {
  std::vector<double> v(n, 0.0);
  for (int e : ids) v[e] = 1.0;
  return v;
}

// diff = plus - minus.
std::vector<double> diff_of(const std::vector<double>& plus,
                            const std::vector<double>& minus) {
  std::vector<double> d(plus.size());
  for (size_t i = 0; i < d.size(); ++i) d[i] = plus[i] - minus[i];
  return d;
}

void append_set_competitors(
    const std::vector<std::vector<int>>& feasible,
    const std::vector<int>& designated, int n, OptSense sense,
    std::vector<CompetitorRow>& rows) {
  std::vector<double> phi_s = indicator(n, designated);
  std::vector<int> sorted_designated = designated;
  std::sort(sorted_designated.begin(), sorted_designated.end());
  for (const auto& competitor : feasible) {
    if (competitor == sorted_designated) continue;
    std::vector<double> phi_c = indicator(n, competitor);
    CompetitorRow row;
    row.diff = sense == OptSense::Max ? diff_of(phi_s, phi_c)
                                   : diff_of(phi_c, phi_s);
    row.display = competitor;
    rows.push_back(std::move(row));
  }
  guard_count(rows.size());
}

std::vector<int> tree_path_arcs(const Digraph& g,
                                std::span<const int> tree_arcs, int root,
                                int v) {
  std::vector<int> in_arc(g.node_count, -1);
  for (int a : tree_arcs) in_arc[g.head(a)] = a;
  std::vector<int> path;
  for (int at = v; at != root;) {
    int a = in_arc[at];
    path.push_back(a);
    at = g.tail(a);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

std::vector<std::vector<int>> enumerate_perfect_matchings(
    const BipartiteGraph& g) {
  if (g.left_count != g.right_count)
    throw ValidationError("perfect matchings need equal sides");
  if (g.left_count > kBipartiteSideGuard)
    throw GuardError("bipartite enumeration guarded at " +
                     std::to_string(kBipartiteSideGuard) + "+");
  std::vector<std::vector<std::pair<int, int>>> adj(g.left_count);
  for (int e = 0; e < g.edge_count(); ++e)
    adj[g.left(e)].emplace_back(g.right(e), e);

  std::vector<std::vector<int>> out;
  std::vector<int> chosen;
  std::vector<char> used(g.right_count, 0);
  auto rec = [&](auto&& self, int l) -> void {
    if (l == g.left_count) {
      std::vector<int> m = chosen;
      std::sort(m.begin(), m.end());
      out.push_back(std::move(m));
      guard_count(out.size());
      return;
    }
    for (const auto& [r, e] : adj[l]) {
      if (used[r]) continue;
      used[r] = 1;
      chosen.push_back(e);
      self(self, l + 1);
      chosen.pop_back();
      used[r] = 0;
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> enumerate_simple_paths(const Digraph& g, int s,
                                                     int t) {
  guard_digraph(g);
  std::vector<std::vector<std::pair<int, int>>> adj(g.node_count);
  for (int a = 0; a < g.arc_count(); ++a)
    adj[g.tail(a)].emplace_back(g.head(a), a);
  std::vector<std::vector<int>> out;
  std::vector<int> arc_stack;
  std::vector<char> seen(g.node_count, 0);
  seen[s] = 1;
  auto rec = [&](auto&& self, int v) -> void {
    if (v == t) {
      out.push_back(arc_stack);
      guard_count(out.size());
      return;
    }
    for (const auto& [u, a] : adj[v]) {
      if (seen[u]) continue;
      seen[u] = 1;
      arc_stack.push_back(a);
      self(self, u);
      arc_stack.pop_back();
      seen[u] = 0;
    }
  };
  rec(rec, s);
  return out;
}

std::vector<std::vector<double>> enumerate_integral_max_flows(
    const Digraph& g, const std::vector<double>& capacities, int source,
    int sink, double max_value) {
  guard_digraph(g);
  std::vector<int> caps(g.arc_count());
  long combos = 1;
  for (int a = 0; a < g.arc_count(); ++a) {
    double c = capacities[a];
    if (std::abs(c - std::round(c)) > 1e-9)
      throw GuardError("integral flow enumeration needs integer capacities");
    caps[a] = static_cast<int>(std::round(c));
    combos *= caps[a] + 1;
    if (combos > kCompetitorGuard)
      throw GuardError("integral flow enumeration exceeded guard");
  }
  long target = std::lround(max_value);
  if (std::abs(max_value - static_cast<double>(target)) > 1e-9)
    throw GuardError("integral flow enumeration needs an integer flow value");

  std::vector<std::vector<double>> out;
  std::vector<int> f(g.arc_count(), 0);
  auto rec = [&](auto&& self, int a) -> void {
    if (a == g.arc_count()) {
      std::vector<long> net(g.node_count, 0);
      for (int i = 0; i < g.arc_count(); ++i) {
        net[g.tail(i)] += f[i];
        net[g.head(i)] -= f[i];
      }
      for (int v = 0; v < g.node_count; ++v)
        if (v != source && v != sink && net[v] != 0) return;
      if (net[source] != target) return;
      out.emplace_back(f.begin(), f.end());
      guard_count(out.size());
      return;
    }
    for (int val = 0; val <= caps[a]; ++val) {
      f[a] = val;
      self(self, a + 1);
    }
    f[a] = 0;
  };
  rec(rec, 0);
  return out;
}

std::vector<CompetitorRow> enumerate_competitor_rows(const Instance& inst,
                                                     OptSense sense) {
  const int n = inst.num_elements();
  std::vector<CompetitorRow> rows;
  switch (inst.kind) {
    case Kind::Matroid: {
      if (n > kMatroidGroundGuard)
        throw GuardError("matroid oracle guarded at 12 elements");
      auto m = instance_matroid(inst);
      append_set_competitors(enumerate_bases(*m), inst.designated, n,
                             OptSense::Max, rows);
      break;
    }
    case Kind::MatroidIntersection: {
      if (n > kMatroidGroundGuard)
        throw GuardError("matroid oracle guarded at 12 elements");
      auto [m1, m2] = instance_matroid_pair(inst);
      append_set_competitors(enumerate_common_bases(*m1, *m2), inst.designated,
                             n, OptSense::Max, rows);
      break;
    }
    case Kind::Arborescence: {
      guard_digraph(*inst.digraph);
      auto [m1, m2] = instance_matroid_pair(inst);
      append_set_competitors(enumerate_common_bases(*m1, *m2), inst.designated,
                             n, sense, rows);
      break;
    }
    case Kind::StPath: {
      auto paths =
          enumerate_simple_paths(*inst.digraph, inst.source, inst.sink);
      std::vector<std::vector<int>> sorted_paths;
      for (auto& p : paths) {
        std::sort(p.begin(), p.end());
        sorted_paths.push_back(p);
      }
      append_set_competitors(sorted_paths, inst.designated, n, OptSense::Min,
                             rows);
      break;
    }
    case Kind::PerfectMatching: {
      append_set_competitors(enumerate_perfect_matchings(*inst.bipartite),
                             inst.designated, n, OptSense::Max, rows);
      break;
    }
    case Kind::MinCostFlow: {
      double value = 0.0;
      for (int a = 0; a < inst.digraph->arc_count(); ++a) {
        if (inst.digraph->tail(a) == inst.source) value += inst.flow[a];
        if (inst.digraph->head(a) == inst.source) value -= inst.flow[a];
      }
      auto flows = enumerate_integral_max_flows(
          *inst.digraph, inst.capacities, inst.source, inst.sink, value);
      for (const auto& f : flows) {
        bool same = true;
        for (int a = 0; a < n && same; ++a)
          if (std::abs(f[a] - inst.flow[a]) > 1e-9) same = false;
        if (same) continue;
        CompetitorRow row;
        row.diff.resize(n);
        for (int a = 0; a < n; ++a) row.diff[a] = f[a] - inst.flow[a];
        for (int a = 0; a < n; ++a)
          if (f[a] > 0) row.display.push_back(a);
        rows.push_back(std::move(row));
      }
      guard_count(rows.size());
      break;
    }
    case Kind::SpTree: {
      guard_digraph(*inst.digraph);
      for (int v = 0; v < inst.digraph->node_count; ++v) {
        if (v == inst.root) continue;
        std::vector<int> tree_path =
            tree_path_arcs(*inst.digraph, inst.designated, inst.root, v);
        std::vector<int> tree_sorted = tree_path;
        std::sort(tree_sorted.begin(), tree_sorted.end());
        std::vector<double> phi_tree = indicator(n, tree_sorted);
        for (auto& p :
             enumerate_simple_paths(*inst.digraph, inst.root, v)) {
          std::sort(p.begin(), p.end());
          if (p == tree_sorted) continue;
          CompetitorRow row;
          row.diff = diff_of(indicator(n, p), phi_tree);
          row.display = p;
          rows.push_back(std::move(row));
        }
        guard_count(rows.size());
      }
      break;
    }
  }
  return rows;
}

VerifyReport verify_delta_optimal(const Instance& inst,
                                  const WeightVector& w_prime, double tol,
                                  OptSense sense) {
  if (static_cast<int>(w_prime.size()) != inst.num_elements())
    throw ValidationError("weight vector length mismatch");
  std::vector<CompetitorRow> rows = enumerate_competitor_rows(inst, sense);
  VerifyReport report;
  if (rows.empty()) {
    report.ok = true;
    report.margin = std::numeric_limits<double>::infinity();
    return report;
  }
  double worst = std::numeric_limits<double>::infinity();
  const CompetitorRow* arg = nullptr;
  for (const auto& row : rows) {
    double margin = 0.0;
    for (size_t e = 0; e < row.diff.size(); ++e)
      margin += row.diff[e] * w_prime[e];
    if (margin < worst) {
      worst = margin;
      arg = &row;
    }
  }
  report.margin = worst;
  report.worst_competitor = arg->display;
  report.ok = worst >= inst.delta - tol;
  return report;
}

namespace {

// St-path oracle: competitor enumeration over the reduced augmented
// min-arborescence instance the solver targets; coverage arcs stay at zero.
std::vector<CompetitorRow> st_path_reduced_rows(const Instance& inst) {
  const Digraph& g = *inst.digraph;
  StPathReduction red =
      st_path_reduction(g, inst.source, inst.sink, inst.designated);
  auto [m1, m2] = arborescence_matroids(red.augmented, red.root);
  auto bases = enumerate_common_bases(m1, m2);
  std::vector<int> designated = red.designated;
  std::sort(designated.begin(), designated.end());
  std::vector<CompetitorRow> rows;
  const int n = g.arc_count();
  std::vector<double> phi_s(n, 0.0);
  for (int a : designated)
    if (a < n) phi_s[a] = 1.0;
  for (const auto& basis : bases) {
    if (basis == designated) continue;
    CompetitorRow row;
    row.diff.assign(n, 0.0);
    for (int a : basis)
      if (a < n) {
        row.diff[a] += 1.0;  // min sense: competitor minus designated
        row.display.push_back(a);
      }
    for (int a = 0; a < n; ++a) row.diff[a] -= phi_s[a];
    rows.push_back(std::move(row));
  }
  guard_count(rows.size());
  return rows;
}

}  // namespace

double oracle_objective(const Instance& inst, OptSense sense,
                        const QpSettings& qs) {
  std::vector<CompetitorRow> rows = inst.kind == Kind::StPath
                                        ? st_path_reduced_rows(inst)
                                        : enumerate_competitor_rows(inst, sense);
  QpProblem p;
  p.num_vars = inst.num_elements();
  for (int e = 0; e < p.num_vars; ++e)
    p.anchors.emplace_back(e, inst.weights[e]);
  for (const auto& row : rows) {
    LinRow lr;
    for (int e = 0; e < p.num_vars; ++e)
      if (row.diff[e] != 0.0) lr.terms.emplace_back(e, row.diff[e]);
    lr.sense = Sense::Ge;
    lr.rhs = inst.delta;
    // A competitor with an identical cost functional is vacuous at delta = 0
    // and makes the margin unattainable otherwise.
    if (lr.terms.empty() && inst.delta <= 0.0) continue;
    p.rows.push_back(std::move(lr));
  }
  QpSolution sol = solve(p, qs);
  if (sol.status != SolveStatus::Optimal)
    throw ValidationError("oracle objective solve failed: " +
                          to_string(sol.status));
  return sol.objective;
}

}  // namespace invopt
