#pragma once

#include <string>
#include <utility>
#include <vector>

#include "invopt/constraints.hpp"

namespace invopt {

// Least-distance QP: minimize sum over anchors of (x_i - a_i)^2 subject to
// the rows; variables without an anchor are free (zero objective weight).
struct QpProblem {
  int num_vars = 0;
  std::vector<std::pair<int, double>> anchors;  // (variable id, anchor value)
  std::vector<LinRow> rows;

  static QpProblem from_system(const ConstraintSystem& sys,
                               std::vector<std::pair<int, double>> anchors);
};

enum class SolveStatus { Optimal, Infeasible, IterationLimit };

std::string to_string(SolveStatus s);

struct QpSolution {
  SolveStatus status = SolveStatus::IterationLimit;
  std::vector<double> values;  // per variable
  std::vector<double> duals;   // per row; sign convention: y < 0 at a lower
                               // bound (>= row), y > 0 at an upper bound
  double objective = 0.0;      // sum over anchors of (x_i - a_i)^2
  double primal_residual = 0.0;  // max constraint violation
  double dual_residual = 0.0;    // ||P x + q + A' y||_inf
  int iterations = 0;
  bool polished = false;
};

struct QpSettings {
  double eps_abs = 1e-8;
  double eps_rel = 1e-8;
  int max_iterations = 200000;
  double sigma = 1e-6;
  double rho0 = 0.1;
  double rho_min = 1e-6;
  double rho_max = 1e6;
  double alpha = 1.6;
  double eps_infeasible = 1e-7;
  bool polish = true;
};

// Operator-splitting (ADMM) with adaptive penalty and an active-set polish
// step. Deterministic: same problem and settings give bit-identical output.
QpSolution solve(const QpProblem& p, const QpSettings& settings = {});

struct KktResiduals {
  double stationarity = 0.0;
  double complementarity = 0.0;
};

// Recomputed from scratch from (p, s.values, s.duals); never reads solver
// internals. Dual-sign violations count toward complementarity.
KktResiduals check_kkt(const QpProblem& p, const QpSolution& s);

}  // namespace invopt
