#include "invopt/inverse.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "invopt/cyclebound.hpp"
#include "invopt/errors.hpp"

namespace invopt {

Digraph ExchangeGraph::digraph() const {
  Digraph g;
  g.node_count = ground_size;
  for (const auto& a : arcs) g.arcs.push_back({a.tail, a.head});
  return g;
}

ExchangeGraph exchange_graph(const MatroidOracle& m1, const MatroidOracle& m2,
                             std::span<const int> basis) {
  if (m1.ground_size() != m2.ground_size())
    throw ValidationError("exchange_graph: ground sets differ");
  if (!is_basis(m1, basis) || !is_basis(m2, basis))
    throw ValidationError("exchange_graph: B is not a common basis");

  ExchangeGraph ex;
  ex.ground_size = m1.ground_size();
  ex.in_basis.assign(ex.ground_size, 0);
  for (int e : basis) ex.in_basis[e] = 1;

  std::vector<int> swapped(basis.begin(), basis.end());
  for (size_t i = 0; i < swapped.size(); ++i) {
    int x = swapped[i];
    for (int y = 0; y < ex.ground_size; ++y) {
      if (ex.in_basis[y]) continue;
      swapped[i] = y;  // probe B - x + y
      if (m1.independent(swapped)) ex.arcs.push_back({x, y, true});
      if (m2.independent(swapped)) ex.arcs.push_back({y, x, false});
      swapped[i] = x;
    }
  }
  // Canonical order: by tail, then head, A1 before A2.
  std::sort(ex.arcs.begin(), ex.arcs.end(),
            [](const ExchangeArc& a, const ExchangeArc& b) {
              if (a.tail != b.tail) return a.tail < b.tail;
              if (a.head != b.head) return a.head < b.head;
              return a.from_first > b.from_first;
            });
  return ex;
}

QpProblem InverseBuild::problem(const WeightVector& w) const {
  if (w.size() != weight_var.size())
    throw ValidationError("weight vector length mismatch");
  std::vector<std::pair<int, double>> anchors;
  for (size_t e = 0; e < weight_var.size(); ++e)
    if (weight_var[e] >= 0) anchors.emplace_back(weight_var[e], w[e]);
  return QpProblem::from_system(sys, std::move(anchors));
}

std::vector<double> InverseBuild::extract_weights(const QpSolution& s) const {
  std::vector<double> w(weight_var.size());
  for (size_t e = 0; e < weight_var.size(); ++e)
    w[e] = weight_var[e] >= 0 ? s.values[weight_var[e]] : fixed_value[e];
  return w;
}

namespace {

InverseResult run(const InverseBuild& build, const WeightVector& w,
                  const QpSettings& qs) {
  InverseResult res;
  res.problem = build.problem(w);
  res.solution = solve(res.problem, qs);
  res.weights = build.extract_weights(res.solution);
  return res;
}

ConstraintSystem weight_var_base(int ground_size,
                                 const std::vector<char>& fixed,
                                 std::vector<int>& weight_var) {
  ConstraintSystem sys;
  weight_var.assign(ground_size, -1);
  for (int e = 0; e < ground_size; ++e)
    if (fixed.empty() || !fixed[e])
      weight_var[e] =
          sys.add_variable(VarRole::Weight, "w_" + std::to_string(e));
  return sys;
}

}  // namespace

InverseBuild build_inverse_matroid(const MatroidOracle& m,
                                   std::span<const int> basis, double delta) {
  if (delta < 0) throw ValidationError("delta must be >= 0");
  if (!is_basis(m, basis))
    throw ValidationError("inverse_matroid: designated set is not a basis");

  InverseBuild build;
  build.sys = weight_var_base(m.ground_size(), {}, build.weight_var);
  build.fixed_value.assign(m.ground_size(), 0.0);

  std::vector<char> in(m.ground_size(), 0);
  for (int e : basis) in[e] = 1;
  for (int f = 0; f < m.ground_size(); ++f) {
    if (in[f]) continue;
    for (int e : circuit(m, basis, f)) {
      if (e == f) continue;  // exchange pairs only
      build.sys.add_row(
          {{build.weight_var[e], 1.0}, {build.weight_var[f], -1.0}}, Sense::Ge,
          delta, RowKind::MarginPair);
    }
  }
  return build;
}

InverseResult inverse_matroid(const MatroidOracle& m, const WeightVector& w,
                              std::span<const int> basis, double delta,
                              const QpSettings& qs) {
  return run(build_inverse_matroid(m, basis, delta), w, qs);
}

InverseBuild build_inverse_matroid_intersection(
    const MatroidOracle& m1, const MatroidOracle& m2,
    std::span<const int> basis, double delta, const std::vector<char>& fixed,
    const std::vector<double>& fixed_values) {
  if (delta < 0) throw ValidationError("delta must be >= 0");
  ExchangeGraph ex = exchange_graph(m1, m2, basis);

  InverseBuild build;
  build.sys = weight_var_base(ex.ground_size, fixed, build.weight_var);
  build.fixed_value = fixed_values;
  build.fixed_value.resize(ex.ground_size, 0.0);

  SymbolicDigraph sym;
  sym.graph = ex.digraph();
  for (const auto& arc : ex.arcs) {
    double sign = arc.from_first ? 1.0 : -1.0;
    int var = build.weight_var[arc.tail];
    sym.terms.push_back(var >= 0 ? LengthTerm::signed_ref(var, sign)
                                 : LengthTerm::constant_term(
                                       sign * build.fixed_value[arc.tail]));
  }
  CompiledCycleBound compiled = r2_constraints(sym, delta, build.sys);
  build.sys = std::move(compiled.sys);
  build.length_var = std::move(compiled.length_var);
  build.dist_var = std::move(compiled.dist_var);
  build.aux = std::move(sym);
  return build;
}

InverseResult inverse_matroid_intersection(const MatroidOracle& m1,
                                           const MatroidOracle& m2,
                                           const WeightVector& w,
                                           std::span<const int> basis,
                                           double delta, const QpSettings& qs) {
  return run(build_inverse_matroid_intersection(m1, m2, basis, delta), w, qs);
}

void require_arborescence(const Digraph& g, std::span<const int> tree_arcs,
                          int root) {
  if (root < 0 || root >= g.node_count)
    throw ValidationError("arborescence root out of range");
  std::vector<int> in_deg(g.node_count, 0);
  std::vector<std::vector<int>> children(g.node_count);
  std::set<int> seen_arcs;
  for (int a : tree_arcs) {
    if (a < 0 || a >= g.arc_count() || !seen_arcs.insert(a).second)
      throw ValidationError("invalid or duplicate tree arc id");
    ++in_deg[g.head(a)];
    children[g.tail(a)].push_back(g.head(a));
  }
  if (in_deg[root] != 0)
    throw ValidationError("designated set has an arc into the root");
  for (int v = 0; v < g.node_count; ++v)
    if (v != root && in_deg[v] != 1)
      throw ValidationError(
          "designated set is not an arborescence (in-degree != 1)");
  // Reachability from the root covers all nodes iff acyclic here.
  std::vector<char> seen(g.node_count, 0);
  std::vector<int> stack = {root};
  seen[root] = 1;
  int covered = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : children[v])
      if (!seen[u]) {
        seen[u] = 1;
        ++covered;
        stack.push_back(u);
      }
  }
  if (covered != g.node_count)
    throw ValidationError("designated set does not span from the root");
}

InverseResult inverse_arborescence(const Digraph& g, const WeightVector& w,
                                   std::span<const int> tree_arcs, int root,
                                   double delta, OptSense sense,
                                   const QpSettings& qs) {
  require_arborescence(g, tree_arcs, root);
  if (static_cast<int>(w.size()) != g.arc_count())
    throw ValidationError("weight vector length mismatch");
  auto [graphic, partition] = arborescence_matroids(g, root);
  if (sense == OptSense::Max)
    return inverse_matroid_intersection(graphic, partition, w, tree_arcs,
                                        delta, qs);
  WeightVector negated(w.size());
  for (size_t i = 0; i < w.size(); ++i) negated[i] = -w[i];
  InverseResult res = inverse_matroid_intersection(graphic, partition, negated,
                                                   tree_arcs, delta, qs);
  for (double& v : res.weights) v = -v;
  return res;
}

std::vector<int> require_st_path(const Digraph& g, int s, int t,
                                 std::span<const int> path_arcs) {
  if (s < 0 || s >= g.node_count || t < 0 || t >= g.node_count || s == t)
    throw ValidationError("invalid s/t terminals");
  std::set<int> remaining(path_arcs.begin(), path_arcs.end());
  if (remaining.size() != path_arcs.size())
    throw ValidationError("duplicate path arc ids");
  for (int a : path_arcs)
    if (a < 0 || a >= g.arc_count())
      throw ValidationError("path arc id out of range");
  std::vector<int> ordered;
  std::set<int> visited = {s};
  int at = s;
  while (at != t) {
    int next_arc = -1;
    for (int a : remaining)
      if (g.tail(a) == at) {
        if (next_arc != -1)
          throw ValidationError("designated arcs branch; not a simple path");
        next_arc = a;
      }
    if (next_arc == -1)
      throw ValidationError("designated arcs do not form an s-t path");
    remaining.erase(next_arc);
    ordered.push_back(next_arc);
    at = g.head(next_arc);
    if (!visited.insert(at).second)
      throw ValidationError("designated path revisits a vertex");
  }
  if (!remaining.empty())
    throw ValidationError("designated set has arcs beyond the s-t path");
  return ordered;
}

StPathReduction st_path_reduction(const Digraph& g, int s, int t,
                                  std::span<const int> path_arcs) {
  std::vector<int> ordered = require_st_path(g, s, t, path_arcs);
  StPathReduction red;
  red.augmented = g;
  red.root = s;
  red.designated.assign(path_arcs.begin(), path_arcs.end());
  red.fixed.assign(g.arc_count(), 0);
  red.fixed_values.assign(g.arc_count(), 0.0);

  std::vector<char> on_path(g.node_count, 0);
  on_path[s] = 1;
  for (int a : ordered) on_path[g.head(a)] = 1;

  // Zero-weight coverage arcs from t to every vertex other than t and s
  // (arcs into the root can never sit in an s-arborescence).
  for (int v = 0; v < g.node_count; ++v) {
    if (v == t || v == s) continue;
    int arc_id = red.augmented.arc_count();
    red.augmented.arcs.push_back({t, v});
    red.fixed.push_back(1);
    red.fixed_values.push_back(0.0);
    if (!on_path[v]) red.designated.push_back(arc_id);
  }
  std::sort(red.designated.begin(), red.designated.end());
  return red;
}

InverseResult inverse_st_path(const Digraph& g, const WeightVector& w, int s,
                              int t, std::span<const int> path_arcs,
                              double delta, const QpSettings& qs) {
  if (delta < 0) throw ValidationError("delta must be >= 0");
  if (static_cast<int>(w.size()) != g.arc_count())
    throw ValidationError("weight vector length mismatch");
  for (double v : w)
    if (v < 0) throw ValidationError("st-path requires nonnegative weights");
  StPathReduction red = st_path_reduction(g, s, t, path_arcs);
  require_arborescence(red.augmented, red.designated, red.root);

  // Min-sense on the augmented graph: negate the perturbable weights
  // (the zero-weight coverage arcs stay pinned at zero).
  WeightVector negated(red.augmented.arc_count(), 0.0);
  for (int a = 0; a < g.arc_count(); ++a) negated[a] = -w[a];

  auto [graphic, partition] = arborescence_matroids(red.augmented, red.root);
  InverseBuild build = build_inverse_matroid_intersection(
      graphic, partition, red.designated, delta, red.fixed, red.fixed_values);
  InverseResult res = run(build, negated, qs);
  // Report w' on the original arcs only, negated back to min orientation.
  res.weights.resize(g.arc_count());
  for (double& v : res.weights) v = -v;
  return res;
}

}  // namespace invopt
