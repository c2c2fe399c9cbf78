#pragma once

#include <string>
#include <vector>

#include "invopt/qp.hpp"

namespace invopt {

// Outcome of an inverse solve: the assembled QP (kept for audits), the raw
// solver output over all variables, and the perturbed weights extracted per
// ground element (fixed elements report their pinned constants).
struct InverseResult {
  QpProblem problem;
  QpSolution solution;
  std::vector<double> weights;
  std::vector<std::string> warnings;

  SolveStatus status() const { return solution.status; }
  double objective() const { return solution.objective; }
};

}  // namespace invopt
