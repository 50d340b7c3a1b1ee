#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace cggm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Trace inner product <x, y> = tr(x y^T).
inline double frob_inner(const Matrix& x, const Matrix& y) { return (x.array() * y.array()).sum(); }

inline double min_eigenvalue(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(x, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// log det of a symmetric matrix via LLT; returns false when not positive definite.
inline bool log_det_pd(const Matrix& x, double& out) {
  Eigen::LLT<Matrix> llt(x);
  if (llt.info() != Eigen::Success) return false;
  const Matrix& l = llt.matrixLLT();
  double s = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    if (!(l(i, i) > 0.0)) return false;
    s += std::log(l(i, i));
  }
  out = 2.0 * s;
  return true;
}

}  // namespace cggm
