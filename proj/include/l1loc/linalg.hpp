#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace l1loc {

// Raised when an orthonormal range basis is requested for a rank-0 matrix.
struct RankZeroError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Columns form an orthonormal basis of range(X); column count equals the
// numerical rank (singular values > rank_tol * sigma_max).
Eigen::MatrixXd orth_range(const Eigen::MatrixXd& x, double rank_tol = 1e-10);

// Moore-Penrose pseudoinverse via SVD with the same relative rank cutoff.
Eigen::MatrixXd pinv(const Eigen::MatrixXd& x, double rank_tol = 1e-10);

struct PsiQ {
  Eigen::MatrixXd psi;  // rank x K
  Eigen::MatrixXd q;    // rank x M, rows orthonormal
};

// Pre-processing pair for the sparse-recovery term:
//   Psi = orth(Phi^T)^T * pinv(Phi),  Q = Psi * Phi.
PsiQ build_psi(const Eigen::MatrixXd& phi, double rank_tol = 1e-10);

}  // namespace l1loc
