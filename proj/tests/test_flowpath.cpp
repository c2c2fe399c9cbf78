#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "invopt/cyclebound.hpp"
#include "invopt/errors.hpp"
#include "invopt/flowpath.hpp"
#include "invopt/inverse.hpp"
#include "invopt/oracle.hpp"
#include "support.hpp"

using namespace invopt;
using namespace invopt::testing;

namespace {

// Feeder bottleneck plus three parallel arcs; the designated flow fills the
// first two parallel arcs.
FlowInstance three_parallel() {
  Digraph g;
  g.node_count = 3;
  g.arcs = {{0, 1}, {1, 2}, {1, 2}, {1, 2}};
  return FlowInstance{g, {2.0, 1.0, 1.0, 1.0}, {2.0, 1.0, 1.0, 0.0}, 0, 2};
}

// Residual rule reimplemented from scratch for the property test.
std::vector<std::tuple<int, int, int, bool>> residual_reference(
    const FlowInstance& fi) {
  std::vector<std::tuple<int, int, int, bool>> arcs;
  for (int a = 0; a < fi.graph.arc_count(); ++a) {
    if (fi.flow[a] < fi.capacities[a])
      arcs.emplace_back(fi.graph.tail(a), fi.graph.head(a), a, true);
    if (fi.flow[a] > 0)
      arcs.emplace_back(fi.graph.head(a), fi.graph.tail(a), a, false);
  }
  return arcs;
}

}  // namespace

TEST_CASE("residual arcs on the three-parallel instance") {
  ResidualGraph res = build_residual(three_parallel());
  // Feeder saturated: backward only. Parallel arcs 1,2 saturated: backward.
  // Parallel arc 3 empty: forward only.
  int forwards = 0, backwards = 0;
  for (const auto& arc : res.arcs) {
    forwards += arc.forward;
    backwards += !arc.forward;
    if (arc.arc == 3) CHECK(arc.forward);
    if (arc.arc == 1 || arc.arc == 2) CHECK_FALSE(arc.forward);
  }
  CHECK(forwards == 1);
  CHECK(backwards == 3);
}

TEST_CASE("all-saturated flows have backward arcs only") {
  Digraph g;
  g.node_count = 2;
  g.arcs = {{0, 1}, {0, 1}};
  FlowInstance fi{g, {1.0, 2.0}, {1.0, 2.0}, 0, 1};
  ResidualGraph res = build_residual(fi);
  for (const auto& arc : res.arcs) CHECK_FALSE(arc.forward);
  CHECK(enumerate_simple_cycles(res.digraph()).empty());
}

TEST_CASE("flow validation errors") {
  Digraph g;
  g.node_count = 3;
  g.arcs = {{0, 1}, {1, 2}};
  // Conservation violated at node 1.
  FlowInstance bad{g, {1.0, 1.0}, {1.0, 0.0}, 0, 2};
  CHECK_THROWS_AS(validate_flow_instance(bad), ValidationError);
  // Not maximum: an augmenting path remains.
  FlowInstance non_max{g, {1.0, 1.0}, {0.0, 0.0}, 0, 2};
  CHECK_THROWS_AS(validate_flow_instance(non_max), ValidationError);
  // Flow above capacity.
  FlowInstance overfull{g, {1.0, 1.0}, {2.0, 2.0}, 0, 2};
  CHECK_THROWS_AS(validate_flow_instance(overfull), ValidationError);
  // Degenerate f = c = 0 arcs are allowed but warned about.
  Digraph g2;
  g2.node_count = 2;
  g2.arcs = {{0, 1}, {0, 1}};
  FlowInstance degen{g2, {1.0, 0.0}, {1.0, 0.0}, 0, 1};
  CHECK_FALSE(validate_flow_instance(degen).empty());
}

TEST_CASE("residual rule matches the independent reimplementation") {
  Rng rng(60601);
  int done = 0;
  for (int trial = 0; trial < 80 && done < 15; ++trial) {
    std::optional<Instance> inst = random_flow_instance(rng, 0.0, 1.0);
    if (!inst) continue;
    ++done;
    FlowInstance fi{*inst->digraph, inst->capacities, inst->flow,
                    inst->source, inst->sink};
    ResidualGraph res = build_residual(fi);
    std::vector<std::tuple<int, int, int, bool>> got;
    for (const auto& a : res.arcs)
      got.emplace_back(a.tail, a.head, a.arc, a.forward);
    CHECK(got == residual_reference(fi));
  }
  CHECK(done == 15);
}

TEST_CASE("inverse_min_cost_flow: three-parallel golden") {
  FlowInstance fi = three_parallel();
  InverseResult res = inverse_min_cost_flow(fi, {0.0, 1.0, 3.0, 2.0}, 0.0);
  REQUIRE(res.status() == SolveStatus::Optimal);
  CHECK(std::abs(res.objective() - 0.5) <= 1e-6);
  CHECK(std::abs(res.weights[1] - 1.0) <= 1e-6);
  CHECK(std::abs(res.weights[2] - 2.5) <= 1e-6);
  CHECK(std::abs(res.weights[3] - 2.5) <= 1e-6);
}

TEST_CASE("already min-cost flows stay put") {
  FlowInstance fi = three_parallel();
  InverseResult res = inverse_min_cost_flow(fi, {0.0, 1.0, 2.0, 3.0}, 0.5);
  REQUIRE(res.status() == SolveStatus::Optimal);
  CHECK(res.objective() <= 1e-9);
}

TEST_CASE("random integral flows: exhaustive competitor check") {
  Rng rng(424243);
  int done = 0;
  for (int trial = 0; trial < 120 && done < 12; ++trial) {
    std::optional<Instance> inst = random_flow_instance(rng, 0.1, 1.0);
    if (!inst) continue;
    ++done;
    FlowInstance fi{*inst->digraph, inst->capacities, inst->flow,
                    inst->source, inst->sink};
    InverseResult res = inverse_min_cost_flow(fi, inst->weights, inst->delta);
    REQUIRE(res.status() == SolveStatus::Optimal);
    double value = 0.0;
    for (int a = 0; a < fi.graph.arc_count(); ++a) {
      if (fi.graph.tail(a) == fi.source) value += fi.flow[a];
      if (fi.graph.head(a) == fi.source) value -= fi.flow[a];
    }
    double ours = 0.0;
    for (int a = 0; a < fi.graph.arc_count(); ++a)
      ours += fi.flow[a] * res.weights[a];
    for (const auto& f : enumerate_integral_max_flows(
             fi.graph, fi.capacities, fi.source, fi.sink, value)) {
      bool same = true;
      for (size_t a = 0; a < f.size(); ++a)
        if (std::abs(f[a] - fi.flow[a]) > 1e-9) same = false;
      if (same) continue;
      double theirs = 0.0;
      for (size_t a = 0; a < f.size(); ++a) theirs += f[a] * res.weights[a];
      CHECK(ours <= theirs - inst->delta + 1e-6);
    }
  }
  CHECK(done == 12);
}

TEST_CASE("intermediate arcs make a positive margin unattainable") {
  // An arc with 0 < f < c puts a zero-length forward+backward two-cycle in
  // the residual graph: delta > 0 is then infeasible, delta = 0 is free.
  Digraph chain;
  chain.node_count = 3;
  chain.arcs = {{0, 1}, {1, 2}};
  FlowInstance fi{chain, {2.0, 1.0}, {1.0, 1.0}, 0, 2};
  InverseResult margin = inverse_min_cost_flow(fi, {1.0, 1.0}, 0.5);
  CHECK(margin.status() == SolveStatus::Infeasible);
  InverseResult loose = inverse_min_cost_flow(fi, {1.0, 1.0}, 0.0);
  REQUIRE(loose.status() == SolveStatus::Optimal);
  CHECK(loose.objective() <= 1e-9);
}

TEST_CASE("inverse_sp_tree: chain plus shortcut golden") {
  Digraph g;
  g.node_count = 3;
  g.arcs = {{0, 1}, {1, 2}, {0, 2}};
  InverseResult res =
      inverse_sp_tree(g, {1.0, 1.0, 1.5}, 0, std::vector<int>{0, 1}, 1.0);
  REQUIRE(res.status() == SolveStatus::Optimal);
  CHECK(std::abs(res.weights[0] - 0.5) <= 1e-6);
  CHECK(std::abs(res.weights[1] - 0.5) <= 1e-6);
  CHECK(std::abs(res.weights[2] - 2.0) <= 1e-6);
  CHECK(std::abs(res.objective() - 0.75) <= 1e-6);
}

TEST_CASE("sp-tree warns when perturbed weights go negative") {
  Digraph g;
  g.node_count = 3;
  g.arcs = {{0, 1}, {1, 2}, {0, 2}};
  InverseResult res =
      inverse_sp_tree(g, {1.0, 1.0, 1.5}, 0, std::vector<int>{0, 1}, 3.0);
  REQUIRE(res.status() == SolveStatus::Optimal);
  CHECK(res.weights[0] < 0.0);
  CHECK_FALSE(res.warnings.empty());
}

TEST_CASE("sp-tree with no alternative arcs stays put") {
  Digraph g;
  g.node_count = 3;
  g.arcs = {{0, 1}, {1, 2}};
  InverseResult res =
      inverse_sp_tree(g, {2.0, 3.0}, 0, std::vector<int>{0, 1}, 4.0);
  REQUIRE(res.status() == SolveStatus::Optimal);
  CHECK(res.objective() <= 1e-10);
}

TEST_CASE("random sp-trees: per-vertex exhaustive path check") {
  Rng rng(5150);
  for (int trial = 0; trial < 12; ++trial) {
    Instance inst = random_sp_tree_instance(rng, 0.3, 0.3);
    InverseResult res = inverse_sp_tree(*inst.digraph, inst.weights,
                                        inst.root, inst.designated, 0.3);
    REQUIRE(res.status() == SolveStatus::Optimal);
    const Digraph& g = *inst.digraph;
    std::vector<int> in_arc(g.node_count, -1);
    for (int a : inst.designated) in_arc[g.head(a)] = a;
    for (int v = 0; v < g.node_count; ++v) {
      if (v == inst.root) continue;
      double tree_len = 0.0;
      std::vector<int> tree_path;
      for (int at = v; at != inst.root;) {
        tree_len += res.weights[in_arc[at]];
        tree_path.push_back(in_arc[at]);
        at = g.tail(in_arc[at]);
      }
      std::sort(tree_path.begin(), tree_path.end());
      for (auto p : enumerate_simple_paths(g, inst.root, v)) {
        std::sort(p.begin(), p.end());
        if (p == tree_path) continue;
        double len = 0.0;
        for (int a : p) len += res.weights[a];
        CHECK(tree_len <= len - 0.3 + 1e-6);
      }
    }
  }
}

TEST_CASE("sp-tree necessity: hand-built feasible weights satisfy the rows") {
  // Chain 0->1->2 with shortcut 0->2; weights already delta-optimal for
  // delta = 0.5: tree paths cost 1, 2; shortcut costs 3 >= 2 + 0.5.
  Digraph g;
  g.node_count = 3;
  g.arcs = {{0, 1}, {1, 2}, {0, 2}};
  std::vector<int> tree = {0, 1};
  const double delta = 0.5;
  WeightVector w_feasible = {1.0, 1.0, 3.0};
  InverseBuild build = build_inverse_sp_tree(g, tree, 0, delta);
  std::vector<double> x(build.sys.num_vars(), 0.0);
  for (int a = 0; a < 3; ++a) x[build.weight_var[a]] = w_feasible[a];
  // True shortest distances under the feasible weights.
  x[build.dist_var[0]] = 0.0;
  x[build.dist_var[1]] = 1.0;
  x[build.dist_var[2]] = 2.0;
  CHECK(build.sys.worst_slack(x) >= 0.0);
}

TEST_CASE("objective is non-decreasing in delta") {
  Rng rng(3131);
  Instance inst = random_sp_tree_instance(rng, 0.0, 0.0);
  double prev = -1.0;
  for (double delta : {0.0, 0.25, 0.5, 1.0, 1.7, 2.5}) {
    InverseResult res = inverse_sp_tree(*inst.digraph, inst.weights,
                                        inst.root, inst.designated, delta);
    REQUIRE(res.status() == SolveStatus::Optimal);
    CHECK(res.objective() >= prev - 1e-7);
    prev = res.objective();
  }

  prev = -1.0;
  for (double delta : {0.0, 0.3, 0.6, 1.2}) {
    InverseResult res =
        inverse_min_cost_flow(three_parallel(), {0.0, 1.0, 3.0, 2.0}, delta);
    REQUIRE(res.status() == SolveStatus::Optimal);
    CHECK(res.objective() >= prev - 1e-7);
    prev = res.objective();
  }
}

TEST_CASE("st-path and sp-tree routes agree on the margin predicate") {
  // A chain instance valid for both: designated path = designated tree.
  Digraph g;
  g.node_count = 3;
  g.arcs = {{0, 1}, {1, 2}, {0, 2}};
  WeightVector w = {1.0, 1.0, 1.5};
  const double delta = 0.8;
  std::vector<int> chain = {0, 1};
  InverseResult via_tree = inverse_sp_tree(g, w, 0, chain, delta);
  InverseResult via_path = inverse_st_path(g, w, 0, 2, chain, delta);
  REQUIRE(via_tree.status() == SolveStatus::Optimal);
  REQUIRE(via_path.status() == SolveStatus::Optimal);
  for (const InverseResult* res : {&via_tree, &via_path}) {
    double ours = res->weights[0] + res->weights[1];
    double theirs = res->weights[2];
    CHECK(ours <= theirs - delta + 1e-6);
  }
}
