#include "hallcond/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hallcond/errors.hpp"

namespace hallcond {

namespace {

void project_out(Vec& v, const std::vector<Vec>& basis) {
  for (const Vec& b : basis) v -= b * b.dot(v);
}

}  // namespace

double spectral_norm(const SpMat& m) {
  if (m.nonZeros() == 0) return 0.0;
  if (m.rows() <= 2048) return spectral_norm(Mat(m));
  // largest eigenvalue of m^* m
  SpMat mm = m.adjoint() * m;
  LinearMap neg = [&](const Vec& in, Vec& out) { out = -(mm * in); };
  LanczosResult r = lanczos_lowest(neg, mm.rows(), 1e-12);
  return std::sqrt(std::max(0.0, -r.value));
}

LanczosResult lanczos_lowest(const LinearMap& apply, Eigen::Index dim, double tol,
                             const std::vector<Vec>& locked, std::uint64_t seed, int krylov,
                             int max_restarts) {
  const Eigen::Index free_dim = dim - static_cast<Eigen::Index>(locked.size());
  if (free_dim <= 0) throw NumericalError("Lanczos: no free directions");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Vec start(dim);
  for (Eigen::Index i = 0; i < dim; ++i) start(i) = cplx(nd(rng), nd(rng));
  project_out(start, locked);
  project_out(start, locked);
  start.normalize();

  const int m_max = static_cast<int>(std::min<Eigen::Index>(krylov, free_dim));
  LanczosResult res;
  std::vector<Vec> V;
  Vec w(dim);
  for (int restart = 0; restart <= max_restarts; ++restart) {
    V.clear();
    V.push_back(start);
    std::vector<double> alpha, beta;
    int m = 0;
    for (; m < m_max; ++m) {
      apply(V[m], w);
      project_out(w, locked);
      double a = V[m].dot(w).real();
      alpha.push_back(a);
      // full reorthogonalization, twice
      for (int pass = 0; pass < 2; ++pass) {
        project_out(w, V);
        project_out(w, locked);
      }
      double b = w.norm();
      if (m + 1 == m_max || b < 1e-14) {
        ++m;
        beta.push_back(b);
        break;
      }
      beta.push_back(b);
      V.push_back(w / b);
    }
    RMat T = RMat::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<RMat> es(T);
    RVec y = es.eigenvectors().col(0);
    Vec x = Vec::Zero(dim);
    for (int i = 0; i < m; ++i) x += y(i) * V[i];
    x.normalize();
    res.value = es.eigenvalues()(0);
    res.vector = x;
    res.iterations += m;
    apply(x, w);
    project_out(w, locked);
    res.residual = (w - res.value * x).norm();
    if (res.residual <= tol || m >= free_dim) return res;
    start = x;
  }
  throw NumericalError("Lanczos did not reach residual target");
}

Vec krylov_expv(const LinearMap& apply, const Vec& v, double tau, double* err, int krylov) {
  const double nv = v.norm();
  if (nv == 0) {
    if (err) *err = 0;
    return v;
  }
  const Eigen::Index dim = v.size();
  const int m_max = static_cast<int>(std::min<Eigen::Index>(krylov, dim));
  std::vector<Vec> V{v / nv};
  std::vector<double> alpha, beta;
  Vec w(dim);
  int m = 0;
  double last_beta = 0;
  for (; m < m_max; ++m) {
    apply(V[m], w);
    alpha.push_back(V[m].dot(w).real());
    project_out(w, V);
    project_out(w, V);
    double b = w.norm();
    last_beta = b;
    if (m + 1 == m_max || b < 1e-14) {
      ++m;
      break;
    }
    beta.push_back(b);
    V.push_back(w / b);
  }
  RMat T = RMat::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    T(i, i) = alpha[i];
    if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(T);
  Vec phase = (es.eigenvalues().cast<cplx>() * cplx(0, -tau)).array().exp().matrix();
  Vec c = es.eigenvectors().cast<cplx>() *
          (phase.asDiagonal() * es.eigenvectors().row(0).transpose().cast<cplx>());
  if (err) *err = nv * last_beta * std::abs(c(m - 1));
  Vec out = Vec::Zero(dim);
  for (int i = 0; i < m; ++i) out += c(i) * V[i];
  return nv * out;
}

}  // namespace hallcond
