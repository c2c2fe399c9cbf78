#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "invopt/constraints.hpp"
#include "invopt/graph.hpp"
#include "invopt/qp.hpp"

namespace invopt {

enum class StructureKind { SpanningTree, Arborescence, PerfectMatching };

std::string to_string(StructureKind k);
StructureKind structure_kind_from_string(const std::string& s);

// Structural instance without weights; weights come from theta . f_e.
struct LearnStructure {
  StructureKind kind = StructureKind::SpanningTree;
  std::optional<Digraph> digraph;      // spanning-tree, arborescence
  std::optional<BipartiteGraph> bipartite;  // perfect-matching
  int root = -1;                       // arborescence

  int num_elements() const;
};

struct FeaturizedExample {
  LearnStructure structure;
  std::vector<std::vector<double>> features;  // per element, length F
  std::vector<int> truth;                     // sorted ascending
};

void validate_example(const FeaturizedExample& ex, int feature_dim);

struct Model {
  std::vector<double> theta;
};

WeightVector induced_weights(const Model& model, const FeaturizedExample& ex);

// Maximum-weight feasible structure under induced weights; equal-weight ties
// resolve to the lexicographically smallest sorted id sequence.
std::vector<int> predict(const Model& model, const FeaturizedExample& ex);

double hamming_loss(const std::vector<int>& y_true,
                    const std::vector<int>& y_hat);
double zero_one_loss(const std::vector<int>& y_true,
                     const std::vector<int>& y_hat);

using LossFn = std::function<double(const std::vector<int>&,
                                    const std::vector<int>&)>;

// Substitutes each weight variable by theta' . f_e; auxiliary l/d variables
// survive unchanged, row count is preserved (rows whose lifted coefficients
// cancel entirely are kept as constant rows).
struct LiftedSystem {
  ConstraintSystem sys;
  std::vector<int> theta_var;  // F entries
  std::vector<int> aux_map;    // old var id -> new var id, -1 for weight vars
};
LiftedSystem lift_constraints(const ConstraintSystem& edge_system,
                              const std::vector<int>& weight_var,
                              const std::vector<std::vector<double>>& features);

struct UpdateResult {
  Model model;       // new parameters (unchanged when not updated)
  bool updated = false;
  SolveStatus status = SolveStatus::Optimal;
  double objective = 0.0;  // ||theta_{t+1} - theta_t||^2
  QpProblem problem;
  QpSolution solution;
};

// theta_{t+1} = argmin ||theta' - theta_t||^2 s.t. truth is delta_t-optimal
// under induced weights. Infeasible updates leave the model unchanged.
UpdateResult update(const Model& model, const FeaturizedExample& ex,
                    double delta_t, const QpSettings& qs = {});

// max(0, delta - (theta.Phi(truth) - best competitor score)); 0 when no
// competitor exists.
double hinge_loss(const Model& model, const FeaturizedExample& ex,
                  double delta);

struct RoundRecord {
  int round = 0;
  std::vector<int> prediction;
  double loss = 0.0;      // delta_t
  double hinge = 0.0;     // at theta_t with margin delta_t
  double update_objective = 0.0;
  bool skipped = false;   // delta_t = 0 rounds skip the QP
  bool infeasible = false;
  SolveStatus status = SolveStatus::Optimal;
};

struct TrainResult {
  Model model;
  std::vector<RoundRecord> records;
};

// One pass of the online protocol: predict, suffer loss, update with margin
// delta_t; zero-loss rounds skip the update. theta starts at `initial`
// (zeros of dimension F by default).
TrainResult train_online(const std::vector<FeaturizedExample>& examples,
                         const LossFn& loss, int feature_dim,
                         std::optional<Model> initial = std::nullopt,
                         const QpSettings& qs = {});

FeaturizedExample parse_example(const std::string& json_line);
std::string serialize_record(const RoundRecord& rec);

}  // namespace invopt
