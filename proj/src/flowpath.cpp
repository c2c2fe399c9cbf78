#include "invopt/flowpath.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "invopt/cyclebound.hpp"
#include "invopt/errors.hpp"

namespace invopt {

namespace {
constexpr double kConservationTol = 1e-9;
}

std::vector<std::string> validate_flow_instance(const FlowInstance& fi) {
  const Digraph& g = fi.graph;
  if (static_cast<int>(fi.capacities.size()) != g.arc_count() ||
      static_cast<int>(fi.flow.size()) != g.arc_count())
    throw ValidationError("flow/capacity arrays must cover every arc");
  if (fi.source < 0 || fi.source >= g.node_count || fi.sink < 0 ||
      fi.sink >= g.node_count || fi.source == fi.sink)
    throw ValidationError("invalid source/sink");
  std::vector<std::string> warnings;
  for (int a = 0; a < g.arc_count(); ++a) {
    if (!(fi.capacities[a] >= 0) || !std::isfinite(fi.capacities[a]))
      throw ValidationError("capacities must be finite and >= 0");
    if (!(fi.flow[a] >= 0) || fi.flow[a] > fi.capacities[a])
      throw ValidationError("flow must satisfy 0 <= f <= c");
    if (fi.flow[a] == 0 && fi.capacities[a] == 0)
      warnings.push_back("arc " + std::to_string(a) +
                         " has f = c = 0 and contributes no residual arcs");
  }
  std::vector<double> net(g.node_count, 0.0);
  for (int a = 0; a < g.arc_count(); ++a) {
    net[g.tail(a)] += fi.flow[a];
    net[g.head(a)] -= fi.flow[a];
  }
  for (int v = 0; v < g.node_count; ++v) {
    if (v == fi.source || v == fi.sink) continue;
    if (std::abs(net[v]) > kConservationTol)
      throw ValidationError("flow conservation violated at node " +
                            std::to_string(v));
  }
  // Maximality: the residual graph must not reach the sink from the source.
  std::vector<std::vector<int>> res_adj(g.node_count);
  for (int a = 0; a < g.arc_count(); ++a) {
    if (fi.flow[a] < fi.capacities[a]) res_adj[g.tail(a)].push_back(g.head(a));
    if (fi.flow[a] > 0) res_adj[g.head(a)].push_back(g.tail(a));
  }
  std::vector<char> seen(g.node_count, 0);
  std::vector<int> stack = {fi.source};
  seen[fi.source] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (v == fi.sink)
      throw ValidationError("flow is not maximum (residual s-t path exists)");
    for (int u : res_adj[v])
      if (!seen[u]) {
        seen[u] = 1;
        stack.push_back(u);
      }
  }
  return warnings;
}

Digraph ResidualGraph::digraph() const {
  Digraph g;
  g.node_count = node_count;
  for (const auto& a : arcs) g.arcs.push_back({a.tail, a.head});
  return g;
}

ResidualGraph build_residual(const FlowInstance& fi) {
  validate_flow_instance(fi);
  ResidualGraph res;
  res.node_count = fi.graph.node_count;
  for (int a = 0; a < fi.graph.arc_count(); ++a) {
    if (fi.flow[a] < fi.capacities[a])
      res.arcs.push_back({fi.graph.tail(a), fi.graph.head(a), a, true});
    if (fi.flow[a] > 0)
      res.arcs.push_back({fi.graph.head(a), fi.graph.tail(a), a, false});
  }
  return res;
}

InverseBuild build_inverse_min_cost_flow(const FlowInstance& fi,
                                         double delta) {
  if (delta < 0) throw ValidationError("delta must be >= 0");
  ResidualGraph residual = build_residual(fi);

  InverseBuild build;
  ConstraintSystem sys;
  const int m = fi.graph.arc_count();
  build.weight_var.assign(m, -1);
  build.fixed_value.assign(m, 0.0);
  for (int a = 0; a < m; ++a)
    build.weight_var[a] =
        sys.add_variable(VarRole::Weight, "w_" + std::to_string(a));
  build.sys = std::move(sys);

  SymbolicDigraph sym;
  sym.graph = residual.digraph();
  for (const auto& arc : residual.arcs)
    sym.terms.push_back(LengthTerm::signed_ref(build.weight_var[arc.arc],
                                               arc.forward ? 1.0 : -1.0));
  CompiledCycleBound compiled = r2_constraints(sym, delta, build.sys);
  build.sys = std::move(compiled.sys);
  build.length_var = std::move(compiled.length_var);
  build.dist_var = std::move(compiled.dist_var);
  build.aux = std::move(sym);
  return build;
}

InverseResult inverse_min_cost_flow(const FlowInstance& fi,
                                    const WeightVector& w, double delta,
                                    const QpSettings& qs) {
  if (static_cast<int>(w.size()) != fi.graph.arc_count())
    throw ValidationError("weight vector length mismatch");
  std::vector<std::string> warnings = validate_flow_instance(fi);
  InverseBuild build = build_inverse_min_cost_flow(fi, delta);
  InverseResult res;
  res.problem = build.problem(w);
  res.solution = solve(res.problem, qs);
  res.weights = build.extract_weights(res.solution);
  res.warnings = std::move(warnings);
  return res;
}

void require_spanning_out_tree(const Digraph& g,
                               std::span<const int> tree_arcs, int root) {
  require_arborescence(g, tree_arcs, root);
}

InverseBuild build_inverse_sp_tree(const Digraph& g,
                                   std::span<const int> tree_arcs, int root,
                                   double delta) {
  if (delta < 0) throw ValidationError("delta must be >= 0");
  require_spanning_out_tree(g, tree_arcs, root);

  InverseBuild build;
  ConstraintSystem sys;
  build.weight_var.assign(g.arc_count(), -1);
  build.fixed_value.assign(g.arc_count(), 0.0);
  for (int a = 0; a < g.arc_count(); ++a)
    build.weight_var[a] =
        sys.add_variable(VarRole::Weight, "w_" + std::to_string(a));
  std::vector<int> dist(g.node_count);
  for (int v = 0; v < g.node_count; ++v)
    dist[v] = sys.add_variable(VarRole::Distance, "d_" + std::to_string(v));

  std::vector<char> in_tree(g.arc_count(), 0);
  for (int a : tree_arcs) in_tree[a] = 1;

  sys.add_row({{dist[root], 1.0}}, Sense::Eq, 0.0, RowKind::RootZero);
  for (int a = 0; a < g.arc_count(); ++a) {
    std::vector<std::pair<int, double>> terms = {
        {dist[g.tail(a)], 1.0},
        {build.weight_var[a], 1.0},
        {dist[g.head(a)], -1.0}};
    if (in_tree[a])
      sys.add_row(std::move(terms), Sense::Eq, 0.0, RowKind::TreeEq);
    else
      sys.add_row(std::move(terms), Sense::Ge, delta, RowKind::TreeMargin);
  }
  build.sys = std::move(sys);
  build.dist_var = std::move(dist);
  return build;
}

InverseResult inverse_sp_tree(const Digraph& g, const WeightVector& w,
                              int root, std::span<const int> tree_arcs,
                              double delta, const QpSettings& qs) {
  if (static_cast<int>(w.size()) != g.arc_count())
    throw ValidationError("weight vector length mismatch");
  for (double v : w)
    if (v < 0) throw ValidationError("sp-tree requires nonnegative weights");
  InverseBuild build = build_inverse_sp_tree(g, tree_arcs, root, delta);
  InverseResult res;
  res.problem = build.problem(w);
  res.solution = solve(res.problem, qs);
  res.weights = build.extract_weights(res.solution);
  if (res.status() == SolveStatus::Optimal)
    for (int a = 0; a < g.arc_count(); ++a)
      if (res.weights[a] < 0) {
        res.warnings.push_back("perturbed weight of arc " + std::to_string(a) +
                               " is negative");
        break;
      }
  return res;
}

}  // namespace invopt
