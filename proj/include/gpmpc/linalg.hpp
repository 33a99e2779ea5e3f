#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <stdexcept>

namespace gpmpc {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat12 = Eigen::Matrix<double, 12, 12>;
using Mat12x4 = Eigen::Matrix<double, 12, 4>;
using Mat4x12 = Eigen::Matrix<double, 4, 12>;

inline Eigen::MatrixXd expm(const Eigen::MatrixXd& m) { return m.exp(); }

inline void symmetrize(Eigen::MatrixXd& m) {
  m = (0.5 * (m + m.transpose())).eval();
}

/// Solves F*P + P*F^T + W = 0 by vectorization. Intended for small systems
/// (GP realizations, n <= ~16); the Kronecker system is dense n^2 x n^2.
inline Eigen::MatrixXd solve_continuous_lyapunov(const Eigen::MatrixXd& f,
                                                 const Eigen::MatrixXd& w) {
  const Eigen::Index n = f.rows();
  if (f.cols() != n || w.rows() != n || w.cols() != n) {
    throw std::invalid_argument("solve_continuous_lyapunov: dimension mismatch");
  }
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n * n, n * n);
  // vec(F*P + P*F^T) = (I (x) F + F (x) I) vec(P), column-major vec.
  for (Eigen::Index j = 0; j < n; ++j) {
    k.block(j * n, j * n, n, n) += f;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index r = 0; r < n; ++r) {
        k(j * n + r, i * n + r) += f(j, i);
      }
    }
  }
  Eigen::VectorXd rhs(n * n);
  for (Eigen::Index j = 0; j < n; ++j) rhs.segment(j * n, n) = -w.col(j);
  Eigen::VectorXd vec_p = k.partialPivLu().solve(rhs);
  Eigen::MatrixXd p(n, n);
  for (Eigen::Index j = 0; j < n; ++j) p.col(j) = vec_p.segment(j * n, n);
  symmetrize(p);
  return p;
}

/// Solves P = A*P*A^T + W (discrete Lyapunov), same vectorization approach.
inline Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& a,
                                               const Eigen::MatrixXd& w) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || w.rows() != n || w.cols() != n) {
    throw std::invalid_argument("solve_discrete_lyapunov: dimension mismatch");
  }
  Eigen::MatrixXd k = Eigen::MatrixXd::Identity(n * n, n * n);
  // vec(A*P*A^T) = (A (x) A) vec(P)
  for (Eigen::Index jb = 0; jb < n; ++jb) {
    for (Eigen::Index ib = 0; ib < n; ++ib) {
      k.block(jb * n, ib * n, n, n) -= a(jb, ib) * a;
    }
  }
  Eigen::VectorXd rhs(n * n);
  for (Eigen::Index j = 0; j < n; ++j) rhs.segment(j * n, n) = w.col(j);
  Eigen::VectorXd vec_p = k.partialPivLu().solve(rhs);
  Eigen::MatrixXd p(n, n);
  for (Eigen::Index j = 0; j < n; ++j) p.col(j) = vec_p.segment(j * n, n);
  symmetrize(p);
  return p;
}

inline double spectral_radius(const Eigen::MatrixXd& m) {
  return m.eigenvalues().cwiseAbs().maxCoeff();
}

inline bool is_symmetric_psd(const Eigen::MatrixXd& m, double tol = 1e-10) {
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * (1.0 + m.cwiseAbs().maxCoeff())) {
    return false;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol * (1.0 + m.cwiseAbs().maxCoeff());
}

}  // namespace gpmpc
