#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace hallcond {

using cplx = std::complex<double>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Mat = DenseMatrix<cplx>;
using Vec = DenseVector<cplx>;
using RMat = DenseMatrix<double>;
using RVec = DenseVector<double>;
using SpMat = Eigen::SparseMatrix<cplx>;

template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// spectral norm of a dense matrix
template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.size() == 0) return 0.0;
  DenseMatrix<Scalar> a = m;
  if (a.rows() == a.cols() && hermiticity_defect(a) == 0.0) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  // the top of the spectrum of a^* a is as accurate as an SVD there and much cheaper
  DenseMatrix<Scalar> g = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

double spectral_norm(const SpMat& m);

using LinearMap = std::function<void(const Vec& in, Vec& out)>;

struct LanczosResult {
  double value = 0;
  Vec vector;
  double residual = 0;
  int iterations = 0;
};

// Lowest eigenpair of a hermitian map restricted to the orthogonal
// complement of `locked`. Restarted with full reorthogonalization.
LanczosResult lanczos_lowest(const LinearMap& apply, Eigen::Index dim, double tol,
                             const std::vector<Vec>& locked = {},
                             std::uint64_t seed = 7, int krylov = 120, int max_restarts = 200);

// exp(-i tau K) v for hermitian K via a Krylov subspace; err receives an
// a-posteriori estimate.
Vec krylov_expv(const LinearMap& apply, const Vec& v, double tau, double* err = nullptr,
                int krylov = 40);

}  // namespace hallcond
