#include "l1loc/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace l1loc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clip(double v, double lo, double hi) {
  return std::min(std::max(v, lo), hi);
}

// sum over the mask of clip(v_i - lambda) as a function of the dual lambda
double mask_sum(const QpProblem& p, const Eigen::VectorXd& v, double lambda) {
  double s = 0.0;
  for (int i : p.eq_mask) s += clip(v(i) - lambda, p.lb(i), p.ub(i));
  return s;
}

}  // namespace

Eigen::VectorXd project_feasible(const QpProblem& p, const Eigen::VectorXd& v) {
  Eigen::VectorXd z = v.cwiseMax(p.lb).cwiseMin(p.ub);
  if (!p.has_eq || p.eq_mask.empty()) return z;

  double sum_lb = 0.0, sum_ub = 0.0;
  for (int i : p.eq_mask) {
    sum_lb += p.lb(i);
    sum_ub += p.ub(i);
  }
  const double target = clip(p.eq_value, sum_lb, sum_ub);

  // bracket the dual variable, then bisect; mask_sum is non-increasing
  double lo = -1.0, hi = 1.0;
  for (int it = 0; it < 200 && mask_sum(p, v, lo) < target; ++it) lo *= 2.0;
  for (int it = 0; it < 200 && mask_sum(p, v, hi) > target; ++it) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mask_sum(p, v, mid) >= target)
      lo = mid;
    else
      hi = mid;
  }
  const double lambda = 0.5 * (lo + hi);
  for (int i : p.eq_mask) z(i) = clip(v(i) - lambda, p.lb(i), p.ub(i));

  // absorb leftover bisection error on an interior coordinate
  double resid = target - mask_sum(p, v, lambda);
  for (int i : p.eq_mask) {
    const double room_up = p.ub(i) - z(i);
    const double room_dn = z(i) - p.lb(i);
    const double move = clip(resid, -room_dn, room_up);
    z(i) += move;
    resid -= move;
    if (std::abs(resid) < 1e-15) break;
  }
  return z;
}

double kkt_residual(const QpProblem& p, const Eigen::VectorXd& z) {
  const Eigen::VectorXd grad = 2.0 * p.A.transpose() * (p.A * z - p.b);
  return (z - project_feasible(p, z - grad)).lpNorm<Eigen::Infinity>();
}

namespace {

// largest eigenvalue of A^T A by power iteration (deterministic start)
double gradient_lipschitz(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.cols();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) += 0.01 * static_cast<double>(i % 7);
  v.normalize();
  double lam = 0.0;
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXd w = a.transpose() * (a * v);
    const double norm = w.norm();
    if (norm < 1e-300) return 0.0;
    lam = norm;
    v = w / norm;
  }
  return 2.0 * lam;
}

}  // namespace

namespace {

// ADMM + projected-gradient polish, both to an absolute KKT tolerance.
// Assumes the instance is feasible and roughly unit-scaled.
QpSolution solve_core(const QpProblem& p, double tol_abs, double tol_rel,
                      int max_iter) {
  const int n = p.num_vars();
  QpSolution sol;

  const Eigen::MatrixXd h = 2.0 * p.A.transpose() * p.A;
  const Eigen::VectorXd atb2 = 2.0 * p.A.transpose() * p.b;

  double rho = 1.0;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(
      h + rho * Eigen::MatrixXd::Identity(n, n));

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd y = project_feasible(p, x);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);

  const double sqrt_n = std::sqrt(static_cast<double>(n));
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    x = ldlt.solve(atb2 + rho * (y - u));
    const Eigen::VectorXd y_prev = y;
    y = project_feasible(p, x + u);
    u += x - y;

    const double r_pri = (x - y).norm();
    const double r_dual = rho * (y - y_prev).norm();
    const double eps_pri =
        sqrt_n * tol_abs + tol_rel * std::max(x.norm(), y.norm());
    const double eps_dual = sqrt_n * tol_abs + tol_rel * rho * u.norm();
    if (r_pri <= eps_pri && r_dual <= eps_dual) {
      ++iter;
      break;
    }

    if ((iter + 1) % 25 == 0) {
      if (r_pri > 10.0 * r_dual) {
        rho *= 2.0;
        u *= 0.5;
        ldlt.compute(h + rho * Eigen::MatrixXd::Identity(n, n));
      } else if (r_dual > 10.0 * r_pri) {
        rho *= 0.5;
        u *= 2.0;
        ldlt.compute(h + rho * Eigen::MatrixXd::Identity(n, n));
      }
    }
  }

  // monotone projected-gradient polish from the feasible ADMM iterate
  Eigen::VectorXd z = y;
  const double lips = gradient_lipschitz(p.A);
  const double step = 1.0 / std::max(lips, 1e-12);
  double kkt = kkt_residual(p, z);
  while (iter < max_iter && kkt > tol_rel) {
    for (int inner = 0; inner < 50 && iter < max_iter; ++inner, ++iter) {
      const Eigen::VectorXd grad = 2.0 * p.A.transpose() * (p.A * z - p.b);
      z = project_feasible(p, z - step * grad);
    }
    kkt = kkt_residual(p, z);
  }

  sol.z = z;
  sol.objective = (p.A * z - p.b).squaredNorm();
  sol.kkt_residual = kkt;
  sol.iterations = iter;
  sol.status = kkt <= tol_rel ? QpStatus::optimal : QpStatus::max_iter;
  return sol;
}

}  // namespace

QpSolution solve_qp(const QpProblem& p, double tol_abs, double tol_rel,
                    int max_iter) {
  const int n = p.num_vars();
  QpSolution sol;

  if (p.has_eq && !p.eq_mask.empty()) {
    double sum_lb = 0.0, sum_ub = 0.0;
    for (int i : p.eq_mask) {
      sum_lb += p.lb(i);
      sum_ub += p.ub(i);
    }
    if (p.eq_value < sum_lb - 1e-9 || p.eq_value > sum_ub + 1e-9) {
      sol.status = QpStatus::infeasible;
      sol.z = Eigen::VectorXd::Zero(n);
      sol.objective = kInf;
      sol.kkt_residual = kInf;
      return sol;
    }
  }

  // Column equilibration. Variables in the equality mask share one factor so
  // the simplex slice keeps its unweighted-sum form after scaling.
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  double mask_norm = 0.0;
  std::vector<char> in_mask(static_cast<std::size_t>(n), 0);
  for (int i : p.eq_mask) {
    in_mask[static_cast<std::size_t>(i)] = 1;
    mask_norm = std::max(mask_norm, p.A.col(i).norm());
  }
  for (int j = 0; j < n; ++j) {
    const double cn = in_mask[static_cast<std::size_t>(j)]
                          ? mask_norm
                          : p.A.col(j).norm();
    if (cn > 1e-12) d(j) = 1.0 / cn;
  }
  const double c = 1.0 / std::max(1.0, p.b.norm());

  QpProblem ps;
  ps.A = c * p.A * d.asDiagonal();
  ps.b = c * p.b;
  ps.lb = p.lb.cwiseQuotient(d);
  ps.ub = p.ub.cwiseQuotient(d);
  ps.eq_mask = p.eq_mask;
  ps.has_eq = p.has_eq;
  if (p.has_eq && !p.eq_mask.empty())
    ps.eq_value = p.eq_value / d(p.eq_mask.front());

  QpSolution core = solve_core(ps, tol_abs, tol_rel, max_iter);
  Eigen::VectorXd z = project_feasible(p, d.cwiseProduct(core.z).eval());

  // polish in the original scale; stop on stagnation so badly scaled
  // instances do not burn the whole budget
  const double lips = gradient_lipschitz(p.A);
  const double step = 1.0 / std::max(lips, 1e-12);
  double kkt = kkt_residual(p, z);
  int iter = core.iterations;
  double prev_obj = (p.A * z - p.b).squaredNorm();
  while (iter < max_iter && kkt > tol_rel) {
    for (int inner = 0; inner < 50 && iter < max_iter; ++inner, ++iter) {
      const Eigen::VectorXd grad = 2.0 * p.A.transpose() * (p.A * z - p.b);
      z = project_feasible(p, z - step * grad);
    }
    kkt = kkt_residual(p, z);
    const double obj = (p.A * z - p.b).squaredNorm();
    if (obj >= prev_obj - 1e-14 * std::max(1.0, prev_obj)) break;
    prev_obj = obj;
  }

  sol.z = z;
  sol.objective = (p.A * z - p.b).squaredNorm();
  sol.kkt_residual = kkt;
  sol.iterations = iter;
  sol.status = (kkt <= tol_rel || core.status == QpStatus::optimal)
                   ? QpStatus::optimal
                   : QpStatus::max_iter;
  return sol;
}

std::pair<QpSolution, int> solve_with_integer_nu(
    const std::function<QpProblem(int)>& builder, int nu_min, int nu_max,
    double tol_abs, double tol_rel, int max_iter) {
  if (nu_min > nu_max || nu_min < 1)
    throw std::invalid_argument("solve_with_integer_nu: bad nu range");
  QpSolution best;
  int best_nu = 0;
  bool have = false;
  for (int nu = nu_min; nu <= nu_max; ++nu) {
    QpSolution s = solve_qp(builder(nu), tol_abs, tol_rel, max_iter);
    if (s.status == QpStatus::infeasible) continue;
    if (!have || s.objective < best.objective) {
      best = std::move(s);
      best_nu = nu;
      have = true;
    }
  }
  if (!have)
    throw std::runtime_error("solve_with_integer_nu: no feasible nu in range");
  return {std::move(best), best_nu};
}

}  // namespace l1loc
