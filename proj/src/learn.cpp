#include "invopt/learn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "invopt/errors.hpp"
#include "invopt/flowpath.hpp"
#include "invopt/forward.hpp"
#include "invopt/inverse.hpp"
#include "invopt/matching.hpp"
#include "invopt/matroid.hpp"
#include "json.hpp"

namespace invopt {

using nlohmann::json;

std::string to_string(StructureKind k) {
  switch (k) {
    case StructureKind::SpanningTree:
      return "spanning-tree";
    case StructureKind::Arborescence:
      return "arborescence";
    case StructureKind::PerfectMatching:
      return "perfect-matching";
  }
  return "unknown";
}

StructureKind structure_kind_from_string(const std::string& s) {
  if (s == "spanning-tree") return StructureKind::SpanningTree;
  if (s == "arborescence") return StructureKind::Arborescence;
  if (s == "perfect-matching") return StructureKind::PerfectMatching;
  throw ValidationError("unknown structure kind: " + s);
}

int LearnStructure::num_elements() const {
  if (digraph) return digraph->arc_count();
  if (bipartite) return bipartite->edge_count();
  return 0;
}

void validate_example(const FeaturizedExample& ex, int feature_dim) {
  const int n = ex.structure.num_elements();
  if (static_cast<int>(ex.features.size()) != n)
    throw ValidationError("one feature vector per element required");
  for (const auto& f : ex.features)
    if (static_cast<int>(f.size()) != feature_dim)
      throw ValidationError("feature dimension mismatch");
  switch (ex.structure.kind) {
    case StructureKind::SpanningTree: {
      if (!ex.structure.digraph)
        throw ValidationError("spanning-tree example requires digraph");
      GraphicMatroid m = GraphicMatroid::from_digraph(*ex.structure.digraph);
      if (!is_basis(m, ex.truth))
        throw ValidationError("truth is not a spanning tree");
      break;
    }
    case StructureKind::Arborescence:
      if (!ex.structure.digraph)
        throw ValidationError("arborescence example requires digraph");
      require_arborescence(*ex.structure.digraph, ex.truth,
                           ex.structure.root);
      break;
    case StructureKind::PerfectMatching:
      if (!ex.structure.bipartite)
        throw ValidationError("perfect-matching example requires bipartite");
      require_perfect_matching(*ex.structure.bipartite, ex.truth);
      break;
  }
}

WeightVector induced_weights(const Model& model, const FeaturizedExample& ex) {
  WeightVector w(ex.features.size(), 0.0);
  for (size_t e = 0; e < ex.features.size(); ++e) {
    if (ex.features[e].size() != model.theta.size())
      throw ValidationError("feature/model dimension mismatch");
    double dot = 0.0;
    for (size_t k = 0; k < model.theta.size(); ++k)
      dot += model.theta[k] * ex.features[e][k];
    w[e] = dot;
  }
  return w;
}

std::vector<int> predict(const Model& model, const FeaturizedExample& ex) {
  WeightVector w = induced_weights(model, ex);
  switch (ex.structure.kind) {
    case StructureKind::SpanningTree: {
      GraphicMatroid m = GraphicMatroid::from_digraph(*ex.structure.digraph);
      return max_weight_basis(m, w).elements;
    }
    case StructureKind::Arborescence: {
      auto res =
          max_weight_arborescence(*ex.structure.digraph, w, ex.structure.root);
      if (!res) throw ValidationError("no arborescence exists");
      return res->elements;
    }
    case StructureKind::PerfectMatching: {
      auto res = max_weight_perfect_matching(*ex.structure.bipartite, w);
      if (!res) throw ValidationError("no perfect matching exists");
      return res->elements;
    }
  }
  throw ValidationError("unhandled structure kind");
}

double hamming_loss(const std::vector<int>& y_true,
                    const std::vector<int>& y_hat) {
  std::set<int> a(y_true.begin(), y_true.end());
  std::set<int> b(y_hat.begin(), y_hat.end());
  int sym = 0;
  for (int e : a) sym += !b.count(e);
  for (int e : b) sym += !a.count(e);
  return static_cast<double>(sym);
}

double zero_one_loss(const std::vector<int>& y_true,
                     const std::vector<int>& y_hat) {
  std::set<int> a(y_true.begin(), y_true.end());
  std::set<int> b(y_hat.begin(), y_hat.end());
  return a == b ? 0.0 : 1.0;
}

LiftedSystem lift_constraints(
    const ConstraintSystem& edge_system, const std::vector<int>& weight_var,
    const std::vector<std::vector<double>>& features) {
  if (weight_var.size() != features.size())
    throw ValidationError("lift: one feature vector per element required");
  const int feature_dim =
      features.empty() ? 0 : static_cast<int>(features.front().size());
  std::vector<int> element_of(edge_system.num_vars(), -1);
  for (size_t e = 0; e < weight_var.size(); ++e)
    if (weight_var[e] >= 0) element_of[weight_var[e]] = static_cast<int>(e);

  LiftedSystem lifted;
  lifted.theta_var.resize(feature_dim);
  for (int k = 0; k < feature_dim; ++k)
    lifted.theta_var[k] = lifted.sys.add_variable(
        VarRole::Parameter, "theta_" + std::to_string(k));
  lifted.aux_map.assign(edge_system.num_vars(), -1);
  for (int v = 0; v < edge_system.num_vars(); ++v)
    if (element_of[v] < 0)
      lifted.aux_map[v] =
          lifted.sys.add_variable(edge_system.role(v), edge_system.name(v));

  for (const LinRow& row : edge_system.rows()) {
    std::vector<std::pair<int, double>> terms;
    for (const auto& [var, c] : row.terms) {
      int e = element_of[var];
      if (e >= 0) {
        for (int k = 0; k < feature_dim; ++k)
          terms.emplace_back(lifted.theta_var[k], c * features[e][k]);
      } else {
        terms.emplace_back(lifted.aux_map[var], c);
      }
    }
    lifted.sys.add_row(std::move(terms), row.sense, row.rhs, row.kind,
                       /*allow_empty=*/true);
  }
  return lifted;
}

namespace {

InverseBuild edge_build(const FeaturizedExample& ex, double delta) {
  switch (ex.structure.kind) {
    case StructureKind::SpanningTree: {
      GraphicMatroid m = GraphicMatroid::from_digraph(*ex.structure.digraph);
      return build_inverse_matroid(m, ex.truth, delta);
    }
    case StructureKind::Arborescence: {
      auto [m1, m2] =
          arborescence_matroids(*ex.structure.digraph, ex.structure.root);
      return build_inverse_matroid_intersection(m1, m2, ex.truth, delta);
    }
    case StructureKind::PerfectMatching:
      return build_inverse_perfect_matching(*ex.structure.bipartite, ex.truth,
                                            delta);
  }
  throw ValidationError("unhandled structure kind");
}

}  // namespace

UpdateResult update(const Model& model, const FeaturizedExample& ex,
                    double delta_t, const QpSettings& qs) {
  if (delta_t < 0) throw ValidationError("delta_t must be >= 0");
  InverseBuild build = edge_build(ex, delta_t);
  LiftedSystem lifted =
      lift_constraints(build.sys, build.weight_var, ex.features);

  UpdateResult out;
  out.model = model;
  std::vector<std::pair<int, double>> anchors;
  for (size_t k = 0; k < model.theta.size(); ++k)
    anchors.emplace_back(lifted.theta_var[k], model.theta[k]);
  out.problem = QpProblem::from_system(lifted.sys, std::move(anchors));
  out.solution = solve(out.problem, qs);
  out.status = out.solution.status;
  if (out.status == SolveStatus::Optimal) {
    for (size_t k = 0; k < model.theta.size(); ++k)
      out.model.theta[k] = out.solution.values[lifted.theta_var[k]];
    out.objective = out.solution.objective;
    out.updated = true;
  }
  return out;
}

namespace {

// Best score over structures missing a given truth element; the union over
// truth elements covers every competitor exactly when all structures share
// one cardinality.
std::optional<double> best_excluding(const FeaturizedExample& ex,
                                     const WeightVector& w, int banned) {
  switch (ex.structure.kind) {
    case StructureKind::SpanningTree: {
      GraphicMatroid m = GraphicMatroid::from_digraph(*ex.structure.digraph);
      int rank = matroid_rank(m);
      std::vector<int> order(m.ground_size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (w[a] != w[b]) return w[a] > w[b];
        return a < b;
      });
      std::vector<int> acc;
      double value = 0.0;
      for (int e : order) {
        if (e == banned) continue;
        acc.push_back(e);
        if (m.independent(acc))
          value += w[e];
        else
          acc.pop_back();
      }
      if (static_cast<int>(acc.size()) != rank) return std::nullopt;
      return value;
    }
    case StructureKind::Arborescence: {
      std::vector<char> allowed(ex.structure.digraph->arc_count(), 1);
      allowed[banned] = 0;
      return max_arborescence_value(*ex.structure.digraph, w,
                                    ex.structure.root, allowed);
    }
    case StructureKind::PerfectMatching: {
      std::vector<char> allowed(ex.structure.bipartite->edge_count(), 1);
      allowed[banned] = 0;
      return max_perfect_matching_value(*ex.structure.bipartite, w, allowed);
    }
  }
  return std::nullopt;
}

}  // namespace

double hinge_loss(const Model& model, const FeaturizedExample& ex,
                  double delta) {
  WeightVector w = induced_weights(model, ex);
  double truth_score = 0.0;
  for (int e : ex.truth) truth_score += w[e];
  bool any = false;
  double best = 0.0;
  for (int e : ex.truth) {
    std::optional<double> v = best_excluding(ex, w, e);
    if (v && (!any || *v > best)) {
      best = *v;
      any = true;
    }
  }
  if (!any) return 0.0;  // the truth is the unique feasible structure
  return std::max(0.0, delta - (truth_score - best));
}

TrainResult train_online(const std::vector<FeaturizedExample>& examples,
                         const LossFn& loss, int feature_dim,
                         std::optional<Model> initial, const QpSettings& qs) {
  TrainResult out;
  out.model = initial.value_or(Model{std::vector<double>(feature_dim, 0.0)});
  if (static_cast<int>(out.model.theta.size()) != feature_dim)
    throw ValidationError("initial model dimension mismatch");
  int t = 0;
  for (const FeaturizedExample& ex : examples) {
    validate_example(ex, feature_dim);
    ++t;
    RoundRecord rec;
    rec.round = t;
    rec.prediction = predict(out.model, ex);
    rec.loss = loss(ex.truth, rec.prediction);
    rec.hinge = hinge_loss(out.model, ex, rec.loss);
    if (rec.loss > 0.0) {
      UpdateResult up = update(out.model, ex, rec.loss, qs);
      rec.status = up.status;
      rec.update_objective = up.objective;
      rec.infeasible = !up.updated;
      out.model = up.model;
    } else {
      rec.skipped = true;  // theta' = theta_t is already optimal
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

FeaturizedExample parse_example(const std::string& json_line) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid example JSON: ") + e.what());
  }
  FeaturizedExample ex;
  try {
    ex.structure.kind =
        structure_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("digraph")) {
      Digraph g;
      g.node_count = j.at("digraph").at("nodes").get<int>();
      for (const auto& a : j.at("digraph").at("arcs"))
        g.arcs.push_back({a[0].get<int>(), a[1].get<int>()});
      ex.structure.digraph = std::move(g);
    }
    if (j.contains("bipartite")) {
      BipartiteGraph g;
      g.left_count = j.at("bipartite").at("left").get<int>();
      g.right_count = j.at("bipartite").at("right").get<int>();
      for (const auto& e : j.at("bipartite").at("edges"))
        g.edges.push_back({e[0].get<int>(), e[1].get<int>()});
      ex.structure.bipartite = std::move(g);
    }
    if (j.contains("root")) ex.structure.root = j.at("root").get<int>();
    ex.features = j.at("features").get<std::vector<std::vector<double>>>();
    ex.truth = j.at("truth").get<std::vector<int>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad example fields: ") + e.what());
  }
  std::sort(ex.truth.begin(), ex.truth.end());
  return ex;
}

std::string serialize_record(const RoundRecord& rec) {
  json j;
  j["round"] = rec.round;
  j["prediction"] = rec.prediction;
  j["loss"] = rec.loss;
  j["hinge"] = rec.hinge;
  j["update_objective"] = rec.update_objective;
  j["skipped"] = rec.skipped;
  j["infeasible"] = rec.infeasible;
  j["status"] = rec.skipped ? "skipped" : to_string(rec.status);
  return j.dump();
}

}  // namespace invopt
