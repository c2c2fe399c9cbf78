#include "invopt/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <set>

#include "invopt/errors.hpp"
#include "invopt/flowpath.hpp"
#include "invopt/inverse.hpp"
#include "invopt/matching.hpp"
#include "invopt/matroid.hpp"
#include "json.hpp"

namespace invopt {

using nlohmann::json;

std::string to_string(Kind k) {
  switch (k) {
    case Kind::Matroid:
      return "matroid";
    case Kind::MatroidIntersection:
      return "matroid-intersection";
    case Kind::Arborescence:
      return "arborescence";
    case Kind::StPath:
      return "st-path";
    case Kind::PerfectMatching:
      return "perfect-matching";
    case Kind::MinCostFlow:
      return "min-cost-flow";
    case Kind::SpTree:
      return "sp-tree";
  }
  return "unknown";
}

Kind kind_from_string(const std::string& s) {
  if (s == "matroid") return Kind::Matroid;
  if (s == "matroid-intersection") return Kind::MatroidIntersection;
  if (s == "arborescence") return Kind::Arborescence;
  if (s == "st-path") return Kind::StPath;
  if (s == "perfect-matching") return Kind::PerfectMatching;
  if (s == "min-cost-flow") return Kind::MinCostFlow;
  if (s == "sp-tree") return Kind::SpTree;
  throw ValidationError("unknown instance kind: " + s);
}

namespace {

void check_node(int v, int n, const char* what) {
  if (v < 0 || v >= n)
    throw ValidationError(std::string(what) + " out of range");
}

}  // namespace

std::unique_ptr<MatroidOracle> instance_matroid(const Instance& inst) {
  if (inst.digraph && inst.partition)
    throw ValidationError(
        "matroid kind takes exactly one of digraph or partition");
  if (inst.digraph)
    return std::make_unique<GraphicMatroid>(
        GraphicMatroid::from_digraph(*inst.digraph));
  if (inst.partition)
    return std::make_unique<PartitionMatroid>(inst.num_elements(),
                                              inst.partition->classes,
                                              inst.partition->limits);
  throw ValidationError("matroid kind requires a digraph or partition payload");
}

std::pair<std::unique_ptr<MatroidOracle>, std::unique_ptr<MatroidOracle>>
instance_matroid_pair(const Instance& inst) {
  if (inst.kind == Kind::Arborescence) {
    if (!inst.digraph) throw ValidationError("arborescence requires digraph");
    auto [g, p] = arborescence_matroids(*inst.digraph, inst.root);
    return {std::make_unique<GraphicMatroid>(std::move(g)),
            std::make_unique<PartitionMatroid>(std::move(p))};
  }
  if (!inst.digraph || !inst.partition)
    throw ValidationError(
        "matroid-intersection requires digraph and partition payloads");
  return {std::make_unique<GraphicMatroid>(
              GraphicMatroid::from_digraph(*inst.digraph)),
          std::make_unique<PartitionMatroid>(inst.num_elements(),
                                             inst.partition->classes,
                                             inst.partition->limits)};
}

void validate_instance(const Instance& inst) {
  if (!(inst.delta >= 0.0) || !std::isfinite(inst.delta))
    throw ValidationError("delta must be a finite number >= 0");
  for (double w : inst.weights)
    if (!std::isfinite(w)) throw ValidationError("weights must be finite");

  const int n_elems = inst.num_elements();
  std::set<int> designated(inst.designated.begin(), inst.designated.end());
  if (designated.size() != inst.designated.size())
    throw ValidationError("designated ids contain duplicates");
  for (int e : inst.designated) check_node(e, n_elems, "designated id");

  if (inst.digraph) {
    const Digraph& g = *inst.digraph;
    if (g.node_count <= 0) throw ValidationError("digraph needs nodes > 0");
    for (const auto& a : g.arcs) {
      check_node(a[0], g.node_count, "arc tail");
      check_node(a[1], g.node_count, "arc head");
    }
  }
  if (inst.bipartite) {
    const BipartiteGraph& g = *inst.bipartite;
    std::set<std::pair<int, int>> seen;
    for (const auto& e : g.edges) {
      check_node(e[0], g.left_count, "edge left endpoint");
      check_node(e[1], g.right_count, "edge right endpoint");
      if (!seen.insert({e[0], e[1]}).second)
        throw ValidationError("duplicate bipartite edge");
    }
  }

  auto require_weight_count = [&](int expect, const char* payload) {
    if (n_elems != expect)
      throw ValidationError(std::string("weights length must match ") +
                            payload);
  };

  switch (inst.kind) {
    case Kind::Matroid: {
      auto m = instance_matroid(inst);
      if (inst.digraph) require_weight_count(inst.digraph->arc_count(), "arcs");
      if (m->ground_size() != n_elems)
        throw ValidationError("ground set size mismatch");
      if (!is_basis(*m, inst.designated))
        throw ValidationError("designated set is not a basis");
      break;
    }
    case Kind::MatroidIntersection: {
      require_weight_count(inst.digraph ? inst.digraph->arc_count() : -1,
                           "arcs");
      auto [m1, m2] = instance_matroid_pair(inst);
      if (!is_basis(*m1, inst.designated) || !is_basis(*m2, inst.designated))
        throw ValidationError("designated set is not a common basis");
      break;
    }
    case Kind::Arborescence: {
      if (!inst.digraph) throw ValidationError("arborescence requires digraph");
      require_weight_count(inst.digraph->arc_count(), "arcs");
      check_node(inst.root, inst.digraph->node_count, "root");
      require_arborescence(*inst.digraph, inst.designated, inst.root);
      break;
    }
    case Kind::StPath: {
      if (!inst.digraph) throw ValidationError("st-path requires digraph");
      require_weight_count(inst.digraph->arc_count(), "arcs");
      check_node(inst.source, inst.digraph->node_count, "source");
      check_node(inst.sink, inst.digraph->node_count, "sink");
      for (double w : inst.weights)
        if (w < 0)
          throw ValidationError("st-path requires nonnegative weights");
      require_st_path(*inst.digraph, inst.source, inst.sink, inst.designated);
      break;
    }
    case Kind::PerfectMatching: {
      if (!inst.bipartite)
        throw ValidationError("perfect-matching requires bipartite payload");
      require_weight_count(inst.bipartite->edge_count(), "edges");
      require_perfect_matching(*inst.bipartite, inst.designated);
      break;
    }
    case Kind::MinCostFlow: {
      if (!inst.digraph) throw ValidationError("min-cost-flow requires digraph");
      require_weight_count(inst.digraph->arc_count(), "arcs");
      if (static_cast<int>(inst.capacities.size()) !=
          inst.digraph->arc_count())
        throw ValidationError("min-cost-flow requires capacities per arc");
      if (static_cast<int>(inst.flow.size()) != inst.digraph->arc_count())
        throw ValidationError("min-cost-flow requires a flow per arc");
      check_node(inst.source, inst.digraph->node_count, "source");
      check_node(inst.sink, inst.digraph->node_count, "sink");
      FlowInstance fi{*inst.digraph, inst.capacities, inst.flow, inst.source,
                      inst.sink};
      validate_flow_instance(fi);
      break;
    }
    case Kind::SpTree: {
      if (!inst.digraph) throw ValidationError("sp-tree requires digraph");
      require_weight_count(inst.digraph->arc_count(), "arcs");
      check_node(inst.root, inst.digraph->node_count, "root");
      for (double w : inst.weights)
        if (w < 0) throw ValidationError("sp-tree requires nonnegative weights");
      require_spanning_out_tree(*inst.digraph, inst.designated, inst.root);
      break;
    }
  }
}

namespace {

json parse_json(const std::string& bytes) {
  try {
    return json::parse(bytes);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
T field_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  }
}

Digraph parse_digraph(const json& j) {
  Digraph g;
  g.node_count = field_as<int>(j, "nodes");
  for (const auto& arc : j.value("arcs", json::array())) {
    if (!arc.is_array() || arc.size() != 2)
      throw ParseError("arcs must be [tail, head] pairs");
    g.arcs.push_back({arc[0].get<int>(), arc[1].get<int>()});
  }
  return g;
}

BipartiteGraph parse_bipartite(const json& j) {
  BipartiteGraph g;
  g.left_count = field_as<int>(j, "left");
  g.right_count = field_as<int>(j, "right");
  for (const auto& e : j.value("edges", json::array())) {
    if (!e.is_array() || e.size() != 2)
      throw ParseError("edges must be [left, right] pairs");
    g.edges.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  return g;
}

}  // namespace

Instance load_instance(const std::string& bytes) {
  json j = parse_json(bytes);
  if (!j.is_object()) throw ParseError("instance document must be an object");
  Instance inst;
  inst.kind = kind_from_string(field_as<std::string>(j, "kind"));
  inst.delta = field_as<double>(j, "delta");
  inst.weights = field_as<std::vector<double>>(j, "weights");
  inst.designated = j.contains("designated")
                        ? field_as<std::vector<int>>(j, "designated")
                        : std::vector<int>{};
  std::sort(inst.designated.begin(), inst.designated.end());
  if (j.contains("digraph")) inst.digraph = parse_digraph(j.at("digraph"));
  if (j.contains("bipartite"))
    inst.bipartite = parse_bipartite(j.at("bipartite"));
  if (j.contains("partition")) {
    const json& p = j.at("partition");
    PartitionSpec spec;
    spec.classes =
        field_as<std::vector<std::vector<int>>>(p, "classes");
    spec.limits = field_as<std::vector<int>>(p, "limits");
    inst.partition = std::move(spec);
  }
  if (j.contains("capacities"))
    inst.capacities = field_as<std::vector<double>>(j, "capacities");
  if (j.contains("flow")) inst.flow = field_as<std::vector<double>>(j, "flow");
  if (j.contains("root")) inst.root = field_as<int>(j, "root");
  if (j.contains("source")) inst.source = field_as<int>(j, "source");
  if (j.contains("sink")) inst.sink = field_as<int>(j, "sink");
  validate_instance(inst);
  return inst;
}

std::string save_instance(const Instance& inst) {
  json j;
  j["kind"] = to_string(inst.kind);
  j["delta"] = inst.delta;
  j["weights"] = inst.weights;
  j["designated"] = inst.designated;
  if (inst.digraph) {
    json arcs = json::array();
    for (const auto& a : inst.digraph->arcs) arcs.push_back({a[0], a[1]});
    j["digraph"] = {{"nodes", inst.digraph->node_count}, {"arcs", arcs}};
  }
  if (inst.bipartite) {
    json edges = json::array();
    for (const auto& e : inst.bipartite->edges) edges.push_back({e[0], e[1]});
    j["bipartite"] = {{"left", inst.bipartite->left_count},
                      {"right", inst.bipartite->right_count},
                      {"edges", edges}};
  }
  if (inst.partition)
    j["partition"] = {{"classes", inst.partition->classes},
                      {"limits", inst.partition->limits}};
  if (!inst.capacities.empty()) j["capacities"] = inst.capacities;
  if (!inst.flow.empty()) j["flow"] = inst.flow;
  if (inst.root >= 0) j["root"] = inst.root;
  if (inst.source >= 0) j["source"] = inst.source;
  if (inst.sink >= 0) j["sink"] = inst.sink;
  return j.dump(2) + "\n";
}

std::string save_solution(const Instance& inst, const InverseResult& result) {
  json j;
  j["kind"] = to_string(inst.kind);
  j["delta"] = inst.delta;
  j["status"] = to_string(result.status());
  j["iterations"] = result.solution.iterations;
  j["primal_residual"] = result.solution.primal_residual;
  j["dual_residual"] = result.solution.dual_residual;
  j["weights_original"] = inst.weights;
  if (result.status() == SolveStatus::Optimal) {
    j["objective"] = result.objective();
    j["weights_perturbed"] = result.weights;
    double worst = std::numeric_limits<double>::infinity();
    for (size_t r = 0; r < result.problem.rows.size(); ++r) {
      const LinRow& row = result.problem.rows[r];
      double lhs = 0.0;
      for (const auto& [var, c] : row.terms)
        lhs += c * result.solution.values[var];
      double slack = row.sense == Sense::Ge   ? lhs - row.rhs
                     : row.sense == Sense::Le ? row.rhs - lhs
                                              : -std::abs(lhs - row.rhs);
      worst = std::min(worst, slack);
    }
    j["worst_slack"] = result.problem.rows.empty() ? 0.0 : worst;
    KktResiduals kkt = check_kkt(result.problem, result.solution);
    j["kkt"] = {{"stationarity", kkt.stationarity},
                {"complementarity", kkt.complementarity}};
  }
  if (!result.warnings.empty()) j["warnings"] = result.warnings;
  return j.dump(2) + "\n";
}

}  // namespace invopt
