#pragma once

#include <string>
#include <utility>
#include <vector>

#include "invopt/graph.hpp"

namespace invopt {

enum class VarRole { Weight, ArcLength, Distance, Parameter };

enum class Sense { Ge, Eq, Le };

// What a row encodes; used by tests and the debug dump, never by the solver.
enum class RowKind {
  General,
  Binding,      // l_a = signed combination of weight vars (+ constant)
  ArcBound,     // d_xy <= l_(xy)
  Triangle,     // d_xz <= d_xy + l_(yz)
  CycleMargin,  // d_xx >= delta
  CycleSum,     // sum of l over an enumerated cycle >= delta
  MarginPair,   // w'(e) - w'(f) >= delta  (single-matroid rows)
  RootZero,     // d_r = 0
  TreeEq,       // d_a + w'(a,b) = d_b for tree arcs
  TreeMargin,   // d_a + w'(a,b) >= d_b + delta for non-tree arcs
};

struct LinRow {
  std::vector<std::pair<int, double>> terms;  // (variable id, coefficient)
  Sense sense = Sense::Ge;
  double rhs = 0.0;
  RowKind kind = RowKind::General;
};

// Sparse linear inequality/equality system over named, role-tagged variables.
class ConstraintSystem {
 public:
  int add_variable(VarRole role, std::string name);
  // Coefficients on the same variable are merged; zero coefficients dropped.
  // Rows whose terms cancel entirely are rejected unless allow_empty.
  void add_row(std::vector<std::pair<int, double>> terms, Sense sense,
               double rhs, RowKind kind = RowKind::General,
               bool allow_empty = false);

  int num_vars() const { return static_cast<int>(roles_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  VarRole role(int v) const { return roles_[v]; }
  const std::string& name(int v) const { return names_[v]; }
  const std::vector<LinRow>& rows() const { return rows_; }
  const LinRow& row(int r) const { return rows_[r]; }

  int count_rows(RowKind kind) const;
  // Signed slack of a row at an assignment: >=0 iff the row is satisfied
  // (for equalities, minus the absolute residual).
  double row_slack(int r, const std::vector<double>& x) const;
  // Most violated row slack over the whole system (min of row_slack).
  double worst_slack(const std::vector<double>& x) const;

  // One row per line, "coeff*var ... SENSE rhs"; golden-tested.
  std::string dump() const;

 private:
  std::vector<VarRole> roles_;
  std::vector<std::string> names_;
  std::vector<LinRow> rows_;
};

// A term of the form  constant + sum_i coeff_i * var_i  attached to an arc.
// Coefficients are +1/-1 in every builder in this library.
struct LengthTerm {
  double constant = 0.0;
  std::vector<std::pair<int, double>> refs;  // (variable id, coefficient)

  static LengthTerm constant_term(double c) { return {c, {}}; }
  static LengthTerm signed_ref(int var, double sign) {
    return {0.0, {{var, sign}}};
  }
  double eval(const std::vector<double>& x) const {
    double v = constant;
    for (const auto& [var, c] : refs) v += c * x[var];
    return v;
  }
};

// Digraph whose arc lengths are symbolic references into a ConstraintSystem.
struct SymbolicDigraph {
  Digraph graph;
  std::vector<LengthTerm> terms;  // parallel to graph.arcs
};

}  // namespace invopt
