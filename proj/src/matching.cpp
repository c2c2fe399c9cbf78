#include "invopt/matching.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "invopt/cyclebound.hpp"
#include "invopt/errors.hpp"

namespace invopt {

Digraph AuxGraphH::digraph() const {
  Digraph g;
  g.node_count = left_count;
  for (const auto& a : arcs) g.arcs.push_back({a.tail, a.head});
  return g;
}

void require_perfect_matching(const BipartiteGraph& g,
                              std::span<const int> matching) {
  if (g.left_count != g.right_count)
    throw ValidationError("perfect matching requires equal sides");
  std::vector<int> left_deg(g.left_count, 0), right_deg(g.right_count, 0);
  std::set<int> seen;
  for (int e : matching) {
    if (e < 0 || e >= g.edge_count() || !seen.insert(e).second)
      throw ValidationError("invalid or duplicate matching edge id");
    ++left_deg[g.left(e)];
    ++right_deg[g.right(e)];
  }
  for (int v = 0; v < g.left_count; ++v)
    if (left_deg[v] != 1 || right_deg[v] != 1)
      throw ValidationError("designated edges are not a perfect matching");
}

AuxGraphH build_aux_graph(const BipartiteGraph& g,
                          std::span<const int> matching) {
  require_perfect_matching(g, matching);
  AuxGraphH h;
  h.left_count = g.left_count;
  h.matched_edge_of_left.assign(g.left_count, -1);
  std::vector<int> left_of_right(g.right_count, -1);
  std::vector<int> matched_edge_of_right(g.right_count, -1);
  for (int e : matching) {
    h.matched_edge_of_left[g.left(e)] = e;
    left_of_right[g.right(e)] = g.left(e);
    matched_edge_of_right[g.right(e)] = e;
  }
  std::vector<char> in_matching(g.edge_count(), 0);
  for (int e : matching) in_matching[e] = 1;

  // One arc per non-matching edge (z, y): from x = M^-1(y) to z. The z == x
  // case would be a zero-length self-loop encoding no alternating cycle.
  for (int e = 0; e < g.edge_count(); ++e) {
    if (in_matching[e]) continue;
    int z = g.left(e), y = g.right(e);
    int x = left_of_right[y];
    if (z == x) continue;
    h.arcs.push_back({x, z, matched_edge_of_right[y], e});
  }
  std::sort(h.arcs.begin(), h.arcs.end(), [](const AuxArc& a, const AuxArc& b) {
    if (a.tail != b.tail) return a.tail < b.tail;
    if (a.head != b.head) return a.head < b.head;
    return a.other_edge < b.other_edge;
  });
  return h;
}

InverseBuild build_inverse_perfect_matching(const BipartiteGraph& g,
                                            std::span<const int> matching,
                                            double delta) {
  if (delta < 0) throw ValidationError("delta must be >= 0");
  AuxGraphH h = build_aux_graph(g, matching);

  InverseBuild build;
  ConstraintSystem sys;
  build.weight_var.assign(g.edge_count(), -1);
  build.fixed_value.assign(g.edge_count(), 0.0);
  for (int e = 0; e < g.edge_count(); ++e)
    build.weight_var[e] =
        sys.add_variable(VarRole::Weight, "w_" + std::to_string(e));
  build.sys = std::move(sys);

  SymbolicDigraph sym;
  sym.graph = h.digraph();
  for (const auto& arc : h.arcs) {
    LengthTerm term;
    term.refs = {{build.weight_var[arc.matched_edge], 1.0},
                 {build.weight_var[arc.other_edge], -1.0}};
    sym.terms.push_back(std::move(term));
  }
  CompiledCycleBound compiled = r2_constraints(sym, delta, build.sys);
  build.sys = std::move(compiled.sys);
  build.length_var = std::move(compiled.length_var);
  build.dist_var = std::move(compiled.dist_var);
  build.aux = std::move(sym);
  return build;
}

InverseResult inverse_perfect_matching(const BipartiteGraph& g,
                                       const WeightVector& w,
                                       std::span<const int> matching,
                                       double delta, const QpSettings& qs) {
  if (static_cast<int>(w.size()) != g.edge_count())
    throw ValidationError("weight vector length mismatch");
  InverseBuild build = build_inverse_perfect_matching(g, matching, delta);
  InverseResult res;
  res.problem = build.problem(w);
  res.solution = solve(res.problem, qs);
  res.weights = build.extract_weights(res.solution);
  return res;
}

}  // namespace invopt
