#include "invopt/cyclebound.hpp"

#include <string>

#include "invopt/errors.hpp"

namespace invopt {
namespace {

// Appends l variables and their binding equalities: l_a - term(a) = 0,
// i.e. 1*l_a - sum coeff*var = constant.
std::vector<int> bind_lengths(const SymbolicDigraph& g, ConstraintSystem& sys) {
  std::vector<int> length_var;
  length_var.reserve(g.terms.size());
  for (size_t a = 0; a < g.terms.size(); ++a) {
    int l = sys.add_variable(VarRole::ArcLength, "l_" + std::to_string(a));
    length_var.push_back(l);
    std::vector<std::pair<int, double>> terms = {{l, 1.0}};
    for (const auto& [var, c] : g.terms[a].refs) terms.emplace_back(var, -c);
    sys.add_row(std::move(terms), Sense::Eq, g.terms[a].constant,
                RowKind::Binding);
  }
  return length_var;
}

}  // namespace

CompiledCycleBound r2_constraints(const SymbolicDigraph& g, double delta,
                                  const ConstraintSystem& base) {
  if (delta < 0) throw ValidationError("r2_constraints: delta must be >= 0");
  if (g.terms.size() != g.graph.arcs.size())
    throw ValidationError("r2_constraints: one length term per arc required");
  CompiledCycleBound out;
  out.sys = base;
  out.length_var = bind_lengths(g, out.sys);

  const int n = g.graph.node_count;
  const int m = g.graph.arc_count();
  out.dist_var.assign(static_cast<size_t>(n) * n, -1);
  for (int x = 0; x < n; ++x)
    for (int z = 0; z < n; ++z)
      out.dist_var[static_cast<size_t>(x) * n + z] = out.sys.add_variable(
          VarRole::Distance,
          "d_" + std::to_string(x) + "_" + std::to_string(z));
  auto d = [&](int x, int z) {
    return out.dist_var[static_cast<size_t>(x) * n + z];
  };

  out.first_emitted_row = out.sys.num_rows();
  for (int a = 0; a < m; ++a)
    out.sys.add_row({{d(g.graph.tail(a), g.graph.head(a)), 1.0},
                     {out.length_var[a], -1.0}},
                    Sense::Le, 0.0, RowKind::ArcBound);
  for (int x = 0; x < n; ++x)
    for (int a = 0; a < m; ++a) {
      int y = g.graph.tail(a), z = g.graph.head(a);
      out.sys.add_row(
          {{d(x, z), 1.0}, {d(x, y), -1.0}, {out.length_var[a], -1.0}},
          Sense::Le, 0.0, RowKind::Triangle);
    }
  for (int x = 0; x < n; ++x)
    out.sys.add_row({{d(x, x), 1.0}}, Sense::Ge, delta, RowKind::CycleMargin);
  return out;
}

std::vector<std::vector<int>> enumerate_simple_cycles(const Digraph& g,
                                                      long max_cycles) {
  // DFS from each least-indexed start node; only nodes >= start may appear,
  // so every cycle is found exactly once, at its minimum node. Arc-level:
  // parallel arcs yield distinct cycles, self-loops are 1-cycles.
  std::vector<std::vector<std::pair<int, int>>> out_arcs(g.node_count);
  for (int a = 0; a < g.arc_count(); ++a)
    out_arcs[g.tail(a)].emplace_back(g.head(a), a);

  std::vector<std::vector<int>> cycles;
  std::vector<int> arc_stack;
  std::vector<char> on_path(g.node_count, 0);

  auto guard = [&]() {
    if (static_cast<long>(cycles.size()) > max_cycles)
      throw GuardError("simple-cycle enumeration exceeded guard of " +
                       std::to_string(max_cycles) + " cycles");
  };

  // Iterative DFS to keep deep instances safe.
  struct Frame {
    int node;
    size_t next = 0;
  };
  for (int start = 0; start < g.node_count; ++start) {
    std::vector<Frame> stack = {{start}};
    on_path[start] = 1;
    while (!stack.empty()) {
      Frame& fr = stack.back();
      if (fr.next < out_arcs[fr.node].size()) {
        auto [to, arc] = out_arcs[fr.node][fr.next++];
        if (to == start) {
          arc_stack.push_back(arc);
          cycles.push_back(arc_stack);
          guard();
          arc_stack.pop_back();
        } else if (to > start && !on_path[to]) {
          on_path[to] = 1;
          arc_stack.push_back(arc);
          stack.push_back({to});
        }
      } else {
        if (fr.node != start) {
          on_path[fr.node] = 0;
          arc_stack.pop_back();
        }
        stack.pop_back();
      }
    }
    on_path[start] = 0;
  }
  return cycles;
}

CompiledCycleBound r1_constraints_enumerated(const SymbolicDigraph& g,
                                             double delta,
                                             const ConstraintSystem& base,
                                             long max_cycles) {
  if (delta < 0) throw ValidationError("r1_constraints: delta must be >= 0");
  CompiledCycleBound out;
  out.sys = base;
  out.length_var = bind_lengths(g, out.sys);
  out.first_emitted_row = out.sys.num_rows();
  for (const auto& cycle : enumerate_simple_cycles(g.graph, max_cycles)) {
    std::vector<std::pair<int, double>> terms;
    terms.reserve(cycle.size());
    for (int a : cycle) terms.emplace_back(out.length_var[a], 1.0);
    out.sys.add_row(std::move(terms), Sense::Ge, delta, RowKind::CycleSum);
  }
  return out;
}

}  // namespace invopt
