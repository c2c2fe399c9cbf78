#include "invopt/qp.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "invopt/errors.hpp"

namespace invopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

struct Conic {
  SpMat A;       // m x n
  SpMat At;      // n x m
  Vec lower;     // per row
  Vec upper;
  std::vector<char> is_eq;
  int m = 0;
  int n = 0;
};

Conic build_conic(const QpProblem& p) {
  Conic c;
  c.n = p.num_vars;
  c.m = static_cast<int>(p.rows.size());
  c.lower.resize(c.m);
  c.upper.resize(c.m);
  c.is_eq.resize(c.m, 0);
  std::vector<Eigen::Triplet<double>> trips;
  for (int r = 0; r < c.m; ++r) {
    const LinRow& row = p.rows[r];
    for (const auto& [var, coef] : row.terms) {
      if (var < 0 || var >= c.n)
        throw ValidationError("qp row references invalid variable");
      trips.emplace_back(r, var, coef);
    }
    switch (row.sense) {
      case Sense::Ge:
        c.lower[r] = row.rhs;
        c.upper[r] = kInf;
        break;
      case Sense::Le:
        c.lower[r] = -kInf;
        c.upper[r] = row.rhs;
        break;
      case Sense::Eq:
        c.lower[r] = row.rhs;
        c.upper[r] = row.rhs;
        c.is_eq[r] = 1;
        break;
    }
  }
  c.A.resize(c.m, c.n);
  c.A.setFromTriplets(trips.begin(), trips.end());
  c.A.makeCompressed();
  c.At = SpMat(c.A.transpose());
  return c;
}

double inf_norm(const Vec& v) {
  return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

// Distance-to-bounds violation, the reported primal residual.
double max_violation(const Conic& c, const Vec& ax) {
  double worst = 0.0;
  for (int r = 0; r < c.m; ++r) {
    if (std::isfinite(c.lower[r])) worst = std::max(worst, c.lower[r] - ax[r]);
    if (std::isfinite(c.upper[r])) worst = std::max(worst, ax[r] - c.upper[r]);
  }
  return worst;
}

struct Factorization {
  Eigen::SimplicialLDLT<SpMat> ldlt;
  bool ok = false;

  void compute(const Conic& c, const Vec& p_diag, double sigma,
               const Vec& rho) {
    SpMat m = c.At * (rho.asDiagonal() * c.A);
    SpMat diag(c.n, c.n);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(c.n);
    for (int i = 0; i < c.n; ++i)
      trips.emplace_back(i, i, p_diag[i] + sigma);
    diag.setFromTriplets(trips.begin(), trips.end());
    m += diag;
    ldlt.compute(m);
    ok = ldlt.info() == Eigen::Success;
  }
};

struct PolishOutcome {
  bool accepted = false;
  Vec x;
  Vec y;
  double primal = kInf;
  double dual = kInf;
};

// Equality-constrained least squares on the detected active set, solved via
// a regularized KKT system with iterative refinement against the exact one.
PolishOutcome polish(const Conic& c, const Vec& p_diag, const Vec& q,
                     const Vec& x_admm, const Vec& y_admm, const Vec& ax_admm,
                     double best_resid) {
  PolishOutcome out;
  const double ytol = 1e-10 * std::max(1.0, inf_norm(y_admm));
  const double atol = 1e-8 * std::max(1.0, inf_norm(ax_admm));
  std::vector<int> active;
  std::vector<double> bound;
  std::vector<int> side;  // -1 lower, +1 upper, 0 equality
  for (int r = 0; r < c.m; ++r) {
    if (c.is_eq[r]) {
      active.push_back(r);
      bound.push_back(c.lower[r]);
      side.push_back(0);
    } else if (std::isfinite(c.lower[r]) &&
               (y_admm[r] < -ytol || std::abs(ax_admm[r] - c.lower[r]) < atol)) {
      active.push_back(r);
      bound.push_back(c.lower[r]);
      side.push_back(-1);
    } else if (std::isfinite(c.upper[r]) &&
               (y_admm[r] > ytol || std::abs(ax_admm[r] - c.upper[r]) < atol)) {
      active.push_back(r);
      bound.push_back(c.upper[r]);
      side.push_back(+1);
    }
  }
  const int k = static_cast<int>(active.size());
  const int dim = c.n + k;
  const double reg = 1e-9;

  std::vector<Eigen::Triplet<double>> trips;
  std::vector<Eigen::Triplet<double>> trips_exact;
  for (int i = 0; i < c.n; ++i) {
    trips.emplace_back(i, i, p_diag[i] + reg);
    if (p_diag[i] != 0.0) trips_exact.emplace_back(i, i, p_diag[i]);
  }
  for (int j = 0; j < k; ++j) {
    int r = active[j];
    for (SpMat::InnerIterator it(c.At, r); it; ++it) {
      trips.emplace_back(it.row(), c.n + j, it.value());
      trips.emplace_back(c.n + j, it.row(), it.value());
      trips_exact.emplace_back(it.row(), c.n + j, it.value());
      trips_exact.emplace_back(c.n + j, it.row(), it.value());
    }
    trips.emplace_back(c.n + j, c.n + j, -reg);
  }
  SpMat kkt_reg(dim, dim), kkt(dim, dim);
  kkt_reg.setFromTriplets(trips.begin(), trips.end());
  kkt.setFromTriplets(trips_exact.begin(), trips_exact.end());

  Eigen::SimplicialLDLT<SpMat> ldlt;
  ldlt.compute(kkt_reg);
  if (ldlt.info() != Eigen::Success) return out;

  Vec rhs(dim);
  rhs.head(c.n) = -q;
  for (int j = 0; j < k; ++j) rhs[c.n + j] = bound[j];
  Vec sol = ldlt.solve(rhs);
  for (int pass = 0; pass < 3; ++pass) {
    Vec resid = rhs - kkt * sol;
    sol += ldlt.solve(resid);
  }

  Vec xp = sol.head(c.n);
  Vec yp = Vec::Zero(c.m);
  for (int j = 0; j < k; ++j) {
    double nu = sol[c.n + j];
    // Wrong-signed multipliers mean the active set was misidentified.
    if (side[j] < 0 && nu > 1e-7) return out;
    if (side[j] > 0 && nu < -1e-7) return out;
    yp[active[j]] = nu;
  }

  Vec axp = c.A * xp;
  double primal = max_violation(c, axp);
  Vec pd = p_diag.cwiseProduct(xp) + q + c.At * yp;
  double dual = inf_norm(pd);
  if (std::max(primal, dual) < best_resid) {
    out.accepted = true;
    out.x = std::move(xp);
    out.y = std::move(yp);
    out.primal = primal;
    out.dual = dual;
  }
  return out;
}

}  // namespace

QpProblem QpProblem::from_system(const ConstraintSystem& sys,
                                 std::vector<std::pair<int, double>> anchors) {
  QpProblem p;
  p.num_vars = sys.num_vars();
  p.anchors = std::move(anchors);
  p.rows = sys.rows();
  return p;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::IterationLimit:
      return "iteration-limit";
  }
  return "unknown";
}

QpSolution solve(const QpProblem& p, const QpSettings& st) {
  Conic c = build_conic(p);
  Vec p_diag = Vec::Zero(c.n);
  Vec q = Vec::Zero(c.n);
  Vec x = Vec::Zero(c.n);
  for (const auto& [var, a] : p.anchors) {
    if (var < 0 || var >= c.n)
      throw ValidationError("qp anchor references invalid variable");
    p_diag[var] = 2.0;
    q[var] = -2.0 * a;
    x[var] = a;
  }

  Vec rho(c.m);
  double rho_base = st.rho0;
  auto fill_rho = [&]() {
    for (int r = 0; r < c.m; ++r)
      rho[r] = c.is_eq[r] ? std::min(rho_base * 1e3, st.rho_max) : rho_base;
  };
  fill_rho();

  Factorization fact;
  fact.compute(c, p_diag, st.sigma, rho);
  if (!fact.ok) throw ValidationError("qp: KKT factorization failed");

  Vec z = c.A * x;
  for (int r = 0; r < c.m; ++r)
    z[r] = std::clamp(z[r], c.lower[r], c.upper[r]);
  Vec y = Vec::Zero(c.m);
  Vec y_prev_check = y;

  QpSolution sol;
  sol.values.resize(c.n);
  sol.duals.resize(c.m);

  const double q_norm = inf_norm(q);
  int next_rho_update = 50;
  int next_polish_attempt = 0;
  int check_interval = 25;
  int iter = 0;
  int iter_budget = st.max_iterations;
  bool converged = false;
  bool polished_exit = false;
  // When polish cannot certify a degenerate active set, one bounded refine
  // pass at tighter targets recovers the lost objective accuracy.
  double target_abs = st.eps_abs;
  double target_rel = st.eps_rel;
  bool refined = false;
  PolishOutcome pol;

  Vec ax = c.A * x;
  while (iter < iter_budget) {
    ++iter;
    Vec rhs = st.sigma * x - q + c.At * (rho.cwiseProduct(z) - y);
    Vec xt = fact.ldlt.solve(rhs);
    Vec zt = c.A * xt;
    Vec x_next = st.alpha * xt + (1.0 - st.alpha) * x;
    Vec z_relax = st.alpha * zt + (1.0 - st.alpha) * z;
    Vec z_next(c.m);
    for (int r = 0; r < c.m; ++r)
      z_next[r] = std::clamp(z_relax[r] + y[r] / rho[r], c.lower[r],
                             c.upper[r]);
    y += rho.cwiseProduct(z_relax - z_next);
    x = std::move(x_next);
    z = std::move(z_next);

    if (iter % check_interval != 0 && iter != iter_budget) continue;

    ax = c.A * x;
    Vec px = p_diag.cwiseProduct(x);
    Vec aty = c.At * y;
    double r_prim = inf_norm(ax - z);
    double r_dual = inf_norm(px + q + aty);
    double eps_prim =
        target_abs + target_rel * std::max(inf_norm(ax), inf_norm(z));
    double eps_dual =
        target_abs +
        target_rel * std::max({inf_norm(px), inf_norm(aty), q_norm});

    if (r_prim <= eps_prim && r_dual <= eps_dual) {
      converged = true;
      if (!refined && st.polish) {
        pol = polish(c, p_diag, q, x, y, ax,
                     std::max(max_violation(c, ax), r_dual));
        if (!pol.accepted) {
          refined = true;
          target_abs = st.eps_abs / 20.0;
          target_rel = st.eps_rel / 20.0;
          iter_budget = std::min(st.max_iterations, iter + 3000);
          continue;
        }
        polished_exit = true;
      }
      break;
    }

    // Early exit when a polish from a moderately converged point already
    // meets a tenth of the target tolerance.
    if (st.polish && iter >= next_polish_attempt && r_prim <= 1e3 * eps_prim &&
        r_dual <= 1e3 * eps_dual) {
      next_polish_attempt = iter + 100;
      pol = polish(c, p_diag, q, x, y, ax, 0.1 * st.eps_abs);
      if (pol.accepted) {
        polished_exit = true;
        break;
      }
    }

    // Primal infeasibility certificate from the dual update direction.
    Vec dy = y - y_prev_check;
    y_prev_check = y;
    double dy_norm = inf_norm(dy);
    if (dy_norm > 1e-12) {
      double atdy = inf_norm(c.At * dy);
      double support = 0.0;
      bool support_finite = true;
      for (int r = 0; r < c.m && support_finite; ++r) {
        if (dy[r] > 0) {
          if (std::isfinite(c.upper[r]))
            support += c.upper[r] * dy[r];
          else if (dy[r] > st.eps_infeasible * dy_norm)
            support_finite = false;
        } else if (dy[r] < 0) {
          if (std::isfinite(c.lower[r]))
            support += c.lower[r] * dy[r];
          else if (-dy[r] > st.eps_infeasible * dy_norm)
            support_finite = false;
        }
      }
      if (support_finite && atdy <= st.eps_infeasible * dy_norm &&
          support <= -st.eps_infeasible * dy_norm) {
        sol.status = SolveStatus::Infeasible;
        sol.iterations = iter;
        for (int i = 0; i < c.n; ++i) sol.values[i] = x[i];
        for (int r = 0; r < c.m; ++r) sol.duals[r] = y[r];
        sol.primal_residual = max_violation(c, ax);
        sol.dual_residual = r_dual;
        sol.objective = 0.0;
        return sol;
      }
    }

    if (iter >= next_rho_update && c.m > 0) {
      next_rho_update *= 2;
      double prim_rel = r_prim / std::max({inf_norm(ax), inf_norm(z), 1e-12});
      double dual_rel =
          r_dual / std::max({inf_norm(px), inf_norm(aty), q_norm, 1e-12});
      double scale = std::sqrt(prim_rel / std::max(dual_rel, 1e-16));
      scale = std::clamp(scale, 0.1, 10.0);
      double rho_new = std::clamp(rho_base * scale, st.rho_min, st.rho_max);
      if (rho_new > 1.5 * rho_base || rho_new < rho_base / 1.5) {
        rho_base = rho_new;
        fill_rho();
        fact.compute(c, p_diag, st.sigma, rho);
        if (!fact.ok) throw ValidationError("qp: KKT refactorization failed");
      }
    }
  }

  if (polished_exit) {
    x = pol.x;
    y = pol.y;
    sol.polished = true;
    sol.primal_residual = pol.primal;
    sol.dual_residual = pol.dual;
    sol.status = SolveStatus::Optimal;
  } else {
    ax = c.A * x;
    Vec px = p_diag.cwiseProduct(x);
    double r_prim = max_violation(c, ax);
    double r_dual = inf_norm(px + q + c.At * y);
    if (st.polish && converged) {
      pol = polish(c, p_diag, q, x, y, ax, std::max(r_prim, r_dual));
      if (pol.accepted) {
        x = pol.x;
        y = pol.y;
        r_prim = pol.primal;
        r_dual = pol.dual;
        sol.polished = true;
      }
    }
    sol.primal_residual = r_prim;
    sol.dual_residual = r_dual;
    sol.status =
        converged ? SolveStatus::Optimal : SolveStatus::IterationLimit;
  }

  sol.iterations = iter;
  for (int i = 0; i < c.n; ++i) sol.values[i] = x[i];
  for (int r = 0; r < c.m; ++r) sol.duals[r] = y[r];
  sol.objective = 0.0;
  for (const auto& [var, a] : p.anchors) {
    double d = sol.values[var] - a;
    sol.objective += d * d;
  }
  return sol;
}

KktResiduals check_kkt(const QpProblem& p, const QpSolution& s) {
  Conic c = build_conic(p);
  Vec x(c.n), y(c.m);
  for (int i = 0; i < c.n; ++i) x[i] = s.values[i];
  for (int r = 0; r < c.m; ++r) y[r] = s.duals[r];
  Vec grad = Vec::Zero(c.n);
  for (const auto& [var, a] : p.anchors) grad[var] = 2.0 * (x[var] - a);
  grad += c.At * y;

  KktResiduals res;
  res.stationarity = inf_norm(grad);
  Vec ax = c.A * x;
  for (int r = 0; r < c.m; ++r) {
    if (c.is_eq[r]) continue;  // equality rows have no sign/slackness terms
    if (y[r] > 0) {
      // Positive dual must sit on a finite upper bound.
      res.complementarity =
          std::isfinite(c.upper[r])
              ? std::max(res.complementarity,
                         std::abs(y[r] * (ax[r] - c.upper[r])))
              : std::max(res.complementarity, y[r]);
    } else if (y[r] < 0) {
      res.complementarity =
          std::isfinite(c.lower[r])
              ? std::max(res.complementarity,
                         std::abs(y[r] * (ax[r] - c.lower[r])))
              : std::max(res.complementarity, -y[r]);
    }
  }
  return res;
}

}  // namespace invopt
