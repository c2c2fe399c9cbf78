#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "invopt/cyclebound.hpp"
#include "invopt/errors.hpp"
#include "invopt/qp.hpp"
#include "support.hpp"

using namespace invopt;
using namespace invopt::testing;

namespace {

// A symbolic digraph whose arcs carry fresh weight variables (l_a = w_a),
// so the tests can anchor arbitrary objectives on arc lengths.
struct FreeLengths {
  ConstraintSystem base;
  SymbolicDigraph sym;
  std::vector<int> weight_var;
};

FreeLengths free_lengths(const Digraph& g) {
  FreeLengths out;
  out.sym.graph = g;
  for (int a = 0; a < g.arc_count(); ++a) {
    int v = out.base.add_variable(VarRole::Weight, "w_" + std::to_string(a));
    out.weight_var.push_back(v);
    out.sym.terms.push_back(LengthTerm::signed_ref(v, 1.0));
  }
  return out;
}

double optimize(const CompiledCycleBound& compiled,
                const std::vector<int>& weight_var,
                const std::vector<double>& anchors) {
  std::vector<std::pair<int, double>> anchor_pairs;
  for (size_t i = 0; i < weight_var.size(); ++i)
    anchor_pairs.emplace_back(weight_var[i], anchors[i]);
  QpProblem p = QpProblem::from_system(compiled.sys, anchor_pairs);
  QpSolution s = solve(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  return s.objective;
}

}  // namespace

TEST_CASE("r2 on the 2-node 2-arc cycle: m + mn + n rows, n^2 dist vars") {
  Digraph g;
  g.node_count = 2;
  g.arcs = {{0, 1}, {1, 0}};
  FreeLengths f = free_lengths(g);
  CompiledCycleBound r2 = r2_constraints(f.sym, 1.0, f.base);
  CHECK(r2.sys.num_rows() - r2.sys.count_rows(RowKind::Binding) == 2 + 4 + 2);
  CHECK(r2.dist_var.size() == 4);
  CHECK(r2.sys.count_rows(RowKind::Binding) == 2);
  CHECK(r2.sys.count_rows(RowKind::ArcBound) == 2);
  CHECK(r2.sys.count_rows(RowKind::Triangle) == 4);
  CHECK(r2.sys.count_rows(RowKind::CycleMargin) == 2);
}

TEST_CASE("r2 on an arcless graph keeps only the d_xx rows") {
  Digraph g;
  g.node_count = 3;
  FreeLengths f = free_lengths(g);
  CompiledCycleBound r2 = r2_constraints(f.sym, 2.0, f.base);
  CHECK(r2.sys.num_rows() == 3);
  CHECK(r2.sys.count_rows(RowKind::CycleMargin) == 3);
  CHECK(r2.dist_var.size() == 9);
  // Trivially satisfiable: d_xx free.
  std::vector<double> x(r2.sys.num_vars(), 0.0);
  for (int v : r2.dist_var) x[v] = 2.0;
  CHECK(r2.sys.worst_slack(x) >= 0.0);
}

TEST_CASE("r2 with a fixed self-loop of length 5 admits delta = 3") {
  Digraph g;
  g.node_count = 1;
  g.arcs = {{0, 0}};
  SymbolicDigraph sym;
  sym.graph = g;
  sym.terms = {LengthTerm::constant_term(5.0)};
  CompiledCycleBound r2 = r2_constraints(sym, 3.0, ConstraintSystem{});
  // Assignment: l = 5, d_00 = 4 satisfies every row.
  std::vector<double> x(r2.sys.num_vars(), 0.0);
  x[r2.length_var[0]] = 5.0;
  x[r2.dist_var[0]] = 4.0;
  CHECK(r2.sys.worst_slack(x) >= 0.0);
}

TEST_CASE("r1 enumerates one row per simple cycle") {
  Digraph two;
  two.node_count = 2;
  two.arcs = {{0, 1}, {1, 0}};
  FreeLengths f2 = free_lengths(two);
  CompiledCycleBound r1 = r1_constraints_enumerated(f2.sym, 1.5, f2.base);
  CHECK(r1.sys.count_rows(RowKind::CycleSum) == 1);

  // Complete digraph on 3 nodes: three 2-cycles and two 3-cycles.
  Digraph k3;
  k3.node_count = 3;
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v)
      if (u != v) k3.arcs.push_back({u, v});
  CHECK(enumerate_simple_cycles(k3).size() == 5);
  FreeLengths f3 = free_lengths(k3);
  CompiledCycleBound r13 = r1_constraints_enumerated(f3.sym, 1.0, f3.base);
  CHECK(r13.sys.count_rows(RowKind::CycleSum) == 5);

  // Acyclic DAG: zero cycle rows, any l feasible.
  Digraph dag;
  dag.node_count = 3;
  dag.arcs = {{0, 1}, {0, 2}, {1, 2}};
  CHECK(enumerate_simple_cycles(dag).empty());
}

TEST_CASE("parallel arcs and self-loops are distinct simple cycles") {
  Digraph g;
  g.node_count = 2;
  g.arcs = {{0, 1}, {0, 1}, {1, 0}, {1, 1}};
  // Cycles: (arc0, arc2), (arc1, arc2), self-loop (arc3).
  CHECK(enumerate_simple_cycles(g).size() == 3);
}

TEST_CASE("cycle enumeration guard") {
  Digraph k6;
  k6.node_count = 6;
  for (int u = 0; u < 6; ++u)
    for (int v = 0; v < 6; ++v)
      if (u != v) k6.arcs.push_back({u, v});
  CHECK_THROWS_AS(enumerate_simple_cycles(k6, 10), GuardError);
}

TEST_CASE("debug dump format is stable") {
  ConstraintSystem sys;
  int a = sys.add_variable(VarRole::Weight, "w_0");
  int b = sys.add_variable(VarRole::ArcLength, "l_0");
  sys.add_row({{a, 1.0}, {b, -1.0}}, Sense::Ge, 0.5);
  sys.add_row({{b, 1.0}}, Sense::Eq, 2.0);
  CHECK(sys.dump() == "1*w_0 -1*l_0 >= 0.5\n1*l_0 = 2\n");
}

TEST_CASE("R2-feasible lengths satisfy every enumerated cycle row exactly") {
  // Constructed rational inputs; implication must hold with zero tolerance.
  Digraph g;
  g.node_count = 4;
  g.arcs = {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 2}, {1, 1}};
  const double delta = 0.75;
  std::vector<double> len = {0.5, -0.25, 0.75, 1.25, -0.5, 1.0};
  // All cycles: 0-1-2 (1.0), 2-3 (0.75), self-loop (1.0) -- all >= delta.
  std::vector<double> d = r2_distance_completion(g, len, delta);
  // First confirm (len, d) lies in R2.
  const int n = g.node_count;
  for (int arc = 0; arc < g.arc_count(); ++arc)
    CHECK(d[g.tail(arc) * n + g.head(arc)] <= len[arc]);
  for (int x = 0; x < n; ++x)
    for (int arc = 0; arc < g.arc_count(); ++arc)
      CHECK(d[x * n + g.head(arc)] <= d[x * n + g.tail(arc)] + len[arc]);
  for (int x = 0; x < n; ++x) CHECK(d[x * n + x] >= delta);
  // Then every enumerated cycle obeys the R1 row with zero tolerance.
  for (const auto& cycle : enumerate_simple_cycles(g)) {
    double total = 0.0;
    for (int arc : cycle) total += len[arc];
    CHECK(total >= delta);
  }
}

TEST_CASE("R1-feasible lengths extend to a feasible point of R2") {
  Rng rng(20240817);
  for (int trial = 0; trial < 30; ++trial) {
    Digraph g = random_digraph(rng, uniform_int(rng, 2, 6), 0.3, 0.8);
    auto cycles = enumerate_simple_cycles(g);
    const double delta = uniform(rng, 0.0, 2.0);
    // Draw lengths, then push them up until every cycle clears delta.
    std::vector<double> len = random_weights(rng, g.arc_count(), -1.0, 2.0);
    for (int round = 0; round < 50; ++round) {
      bool ok = true;
      for (const auto& cycle : cycles) {
        double total = 0.0;
        for (int arc : cycle) total += len[arc];
        if (total < delta) {
          ok = false;
          for (int arc : cycle)
            len[arc] += (delta - total) / cycle.size() + 1e-9;
        }
      }
      if (ok) break;
    }
    std::vector<double> d = r2_distance_completion(g, len, delta);
    const int n = g.node_count;
    for (int arc = 0; arc < g.arc_count(); ++arc)
      CHECK(d[g.tail(arc) * n + g.head(arc)] <= len[arc] + 1e-12);
    for (int x = 0; x < n; ++x)
      for (int arc = 0; arc < g.arc_count(); ++arc)
        CHECK(d[x * n + g.head(arc)] <=
              d[x * n + g.tail(arc)] + len[arc] + 1e-12);
    for (int x = 0; x < n; ++x) CHECK(d[x * n + x] >= delta - 1e-12);
  }
}

TEST_CASE("projection equivalence: R1 and R2 optima agree") {
  Rng rng(77001);
  int solved = 0;
  for (int trial = 0; trial < 25; ++trial) {
    Digraph g = random_digraph(rng, uniform_int(rng, 2, 7), 0.3, 0.8);
    if (g.arc_count() == 0) continue;
    double delta = uniform(rng, 0.0, 3.0);
    std::vector<double> anchors =
        random_weights(rng, g.arc_count(), -2.0, 2.0);
    FreeLengths f = free_lengths(g);
    CompiledCycleBound r2 = r2_constraints(f.sym, delta, f.base);
    CompiledCycleBound r1 = r1_constraints_enumerated(f.sym, delta, f.base);
    double obj2 = optimize(r2, f.weight_var, anchors);
    double obj1 = optimize(r1, f.weight_var, anchors);
    CHECK(std::abs(obj1 - obj2) <= 1e-6);
    ++solved;
  }
  CHECK(solved >= 20);
}
