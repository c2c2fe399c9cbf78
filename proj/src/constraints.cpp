#include "invopt/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "invopt/errors.hpp"

namespace invopt {

int ConstraintSystem::add_variable(VarRole role, std::string name) {
  roles_.push_back(role);
  names_.push_back(std::move(name));
  return static_cast<int>(roles_.size()) - 1;
}

void ConstraintSystem::add_row(std::vector<std::pair<int, double>> terms,
                               Sense sense, double rhs, RowKind kind,
                               bool allow_empty) {
  std::map<int, double> merged;
  for (const auto& [var, c] : terms) {
    if (var < 0 || var >= num_vars())
      throw ValidationError("constraint row references undeclared variable");
    merged[var] += c;
  }
  std::vector<std::pair<int, double>> clean;
  for (const auto& [var, c] : merged)
    if (c != 0.0) clean.emplace_back(var, c);
  if (clean.empty() && !allow_empty)
    throw ValidationError("empty constraint row");
  rows_.push_back(LinRow{std::move(clean), sense, rhs, kind});
}

int ConstraintSystem::count_rows(RowKind kind) const {
  int n = 0;
  for (const auto& r : rows_)
    if (r.kind == kind) ++n;
  return n;
}

double ConstraintSystem::row_slack(int r, const std::vector<double>& x) const {
  const LinRow& row = rows_[r];
  double lhs = 0.0;
  for (const auto& [var, c] : row.terms) lhs += c * x[var];
  switch (row.sense) {
    case Sense::Ge:
      return lhs - row.rhs;
    case Sense::Le:
      return row.rhs - lhs;
    case Sense::Eq:
      return -std::abs(lhs - row.rhs);
  }
  return 0.0;
}

double ConstraintSystem::worst_slack(const std::vector<double>& x) const {
  double worst = std::numeric_limits<double>::infinity();
  for (int r = 0; r < num_rows(); ++r) worst = std::min(worst, row_slack(r, x));
  return worst;
}

std::string ConstraintSystem::dump() const {
  std::string out;
  char buf[64];
  for (const auto& row : rows_) {
    bool first = true;
    for (const auto& [var, c] : row.terms) {
      if (!first) out += ' ';
      std::snprintf(buf, sizeof(buf), "%.17g", c);
      out += buf;
      out += '*';
      out += names_[var];
      first = false;
    }
    if (first) out += "0";
    out += row.sense == Sense::Ge ? " >= " : row.sense == Sense::Le ? " <= "
                                                                    : " = ";
    std::snprintf(buf, sizeof(buf), "%.17g", row.rhs);
    out += buf;
    out += '\n';
  }
  return out;
}

}  // namespace invopt
