#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

namespace l1loc {

// Box/single-equality constrained least squares:
//   minimize ||A z - b||^2
//   s.t.     lb <= z <= ub  (entries may be +-inf)
//            sum_{i in eq_mask} z_i = eq_value   (when has_eq)
struct QpProblem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd lb;
  Eigen::VectorXd ub;
  std::vector<int> eq_mask;
  bool has_eq = false;
  double eq_value = 0.0;

  int num_vars() const { return static_cast<int>(A.cols()); }
};

enum class QpStatus { optimal, max_iter, infeasible };

struct QpSolution {
  Eigen::VectorXd z;
  double objective = 0.0;
  QpStatus status = QpStatus::max_iter;
  double kkt_residual = 0.0;
  int iterations = 0;
};

// Euclidean projection onto the feasible set of p. Box part is a clip;
// the equality slice is resolved by bisection on its dual variable.
Eigen::VectorXd project_feasible(const QpProblem& p, const Eigen::VectorXd& v);

// Max-norm of z - Pi(z - grad f(z)); zero exactly at the optimum.
double kkt_residual(const QpProblem& p, const Eigen::VectorXd& z);

// Operator-splitting (ADMM) solve followed by a monotone projected-gradient
// polish. Returned iterate is always feasible.
QpSolution solve_qp(const QpProblem& p, double tol_abs = 1e-8,
                    double tol_rel = 1e-6, int max_iter = 50000);

// Exhaustive enumeration of the integer target count: solves builder(nu) for
// every nu in [nu_min, nu_max], returns the best pair; ties go to smaller nu.
std::pair<QpSolution, int> solve_with_integer_nu(
    const std::function<QpProblem(int)>& builder, int nu_min, int nu_max,
    double tol_abs = 1e-8, double tol_rel = 1e-6, int max_iter = 50000);

}  // namespace l1loc
