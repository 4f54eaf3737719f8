#include "l1loc/linalg.hpp"

namespace l1loc {

namespace {

Eigen::Index numerical_rank(const Eigen::VectorXd& sv, double rank_tol) {
  if (sv.size() == 0) return 0;
  const double cutoff = rank_tol * sv(0);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > cutoff && sv(r) > 0.0) ++r;
  return r;
}

}  // namespace

Eigen::MatrixXd orth_range(const Eigen::MatrixXd& x, double rank_tol) {
  if (x.size() == 0) throw std::invalid_argument("orth_range: empty matrix");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU);
  const Eigen::Index r = numerical_rank(svd.singularValues(), rank_tol);
  if (r == 0) throw RankZeroError("orth_range: matrix has rank 0");
  return svd.matrixU().leftCols(r);
}

Eigen::MatrixXd pinv(const Eigen::MatrixXd& x, double rank_tol) {
  if (x.size() == 0) throw std::invalid_argument("pinv: empty matrix");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const Eigen::Index r = numerical_rank(sv, rank_tol);
  Eigen::VectorXd inv_sv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < r; ++i) inv_sv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();
}

PsiQ build_psi(const Eigen::MatrixXd& phi, double rank_tol) {
  PsiQ out;
  out.psi = orth_range(phi.transpose(), rank_tol).transpose() * pinv(phi, rank_tol);
  out.q = out.psi * phi;
  return out;
}

}  // namespace l1loc
