#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "invopt/graph.hpp"
#include "invopt/result.hpp"

namespace invopt {

enum class Kind {
  Matroid,
  MatroidIntersection,
  Arborescence,
  StPath,
  PerfectMatching,
  MinCostFlow,
  SpTree,
};

std::string to_string(Kind k);
Kind kind_from_string(const std::string& s);

// Whether the designated solution must beat competitors from above (max)
// or from below (min). Arborescence supports both via the CLI --sense flag.
enum class OptSense { Max, Min };

struct PartitionSpec {
  std::vector<std::vector<int>> classes;
  std::vector<int> limits;
};

// Universal input container: structure payload + weights + designated
// solution + margin. Immutable after construction; all ops are pure.
struct Instance {
  Kind kind = Kind::Matroid;
  double delta = 0.0;
  WeightVector weights;
  std::vector<int> designated;  // sorted, duplicate-free after validation

  std::optional<Digraph> digraph;
  std::optional<BipartiteGraph> bipartite;
  std::optional<PartitionSpec> partition;
  std::vector<double> capacities;  // min-cost-flow
  std::vector<double> flow;        // min-cost-flow
  int root = -1;                   // arborescence, sp-tree
  int source = -1;                 // st-path, min-cost-flow
  int sink = -1;                   // st-path, min-cost-flow

  int num_elements() const { return static_cast<int>(weights.size()); }
};

// Full structural + kind-specific validation, including validity of the
// designated solution. Downstream solver re-checks must never fire on an
// instance this function accepted.
void validate_instance(const Instance& inst);

// Parse + validate a JSON document (schema in the README).
Instance load_instance(const std::string& bytes);

std::string save_instance(const Instance& inst);

// Deterministic solution document: original weights, perturbed weights,
// objective, status, per-constraint worst slack. No weights unless optimal.
std::string save_solution(const Instance& inst, const InverseResult& result);

class MatroidOracle;

// Oracle construction shared by the solver dispatch and the verifiers.
std::unique_ptr<MatroidOracle> instance_matroid(const Instance& inst);
std::pair<std::unique_ptr<MatroidOracle>, std::unique_ptr<MatroidOracle>>
instance_matroid_pair(const Instance& inst);

}  // namespace invopt
