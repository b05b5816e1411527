#include "hallcond/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "hallcond/errors.hpp"

namespace hallcond {

const SectorEigen* EigenSystem::find(int particles) const {
  for (const SectorEigen& s : sectors)
    if (s.particles == particles) return &s;
  return nullptr;
}

GroundState ground_state(const FockSpace& space, const FockOperator& h,
                         const GroundStateOptions& opt) {
  const SpMat& H = h.matrix();
  if (SpMat(H - SpMat(H.adjoint())).cwiseAbs().sum() > 1e-10 * std::max(1.0, H.cwiseAbs().sum()))
    throw NumericalError("assembled Hamiltonian is not hermitian");
  if (!h.gauge_invariant()) throw NumericalError("Hamiltonian does not conserve particle number");

  auto eig = std::make_shared<EigenSystem>();
  bool complete = true;
  struct Low {
    double e0, e1;
    Vec v0;
  };
  std::vector<Low> lows;
  for (int n = 0; n <= space.modes(); ++n) {
    const auto d = static_cast<Eigen::Index>(space.sector(n).size());
    Low low{0, std::numeric_limits<double>::infinity(), {}};
    if (d <= opt.dense_limit) {
      Mat blk = sector_block(space, H, n);
      blk = (0.5 * (blk + blk.adjoint())).eval();
      Eigen::SelfAdjointEigenSolver<Mat> es(blk);
      low.e0 = es.eigenvalues()(0);
      if (d > 1) low.e1 = es.eigenvalues()(1);
      low.v0 = es.eigenvectors().col(0);
      if (opt.keep_eigensystem) eig->sectors.push_back({n, es.eigenvalues(), es.eigenvectors()});
    } else {
      complete = false;
      SpMat blk = sector_block_sparse(space, H, n);
      LinearMap apply = [&](const Vec& in, Vec& out) { out = blk * in; };
      LanczosResult r0 = lanczos_lowest(apply, d, opt.lanczos_tol);
      LanczosResult r1 = lanczos_lowest(apply, d, opt.lanczos_tol, {r0.vector});
      low.e0 = r0.value;
      low.e1 = r1.value;
      low.v0 = r0.vector;
    }
    lows.push_back(std::move(low));
  }
  int best = 0;
  for (int n = 1; n <= space.modes(); ++n)
    if (lows[n].e0 < lows[best].e0) best = n;
  double e1 = lows[best].e1;
  for (int n = 0; n <= space.modes(); ++n)
    if (n != best) e1 = std::min(e1, lows[n].e0);

  GroundState gs;
  gs.energy = lows[best].e0;
  gs.gap = e1 - gs.energy;
  gs.sector_gap = lows[best].e1 - gs.energy;
  gs.particles = best;
  gs.vector = sector_embed(space, lows[best].v0, best);
  if (gs.gap < opt.degeneracy_tol)
    throw DegenerateGroundState("E1 - E0 = " + std::to_string(gs.gap));
  if (complete && opt.keep_eigensystem) gs.eigensystem = std::move(eig);
  return gs;
}

GroundState ground_state(const FockSpace& space, const Interaction& h,
                         const GroundStateOptions& opt) {
  return ground_state(space, total(space, h), opt);
}

FermiSea fermi_sea(const Mat& h, double mu) {
  if (hermiticity_defect(h) > 1e-12) throw NumericalError("one-body matrix is not hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  FermiSea s;
  s.mu = mu;
  s.energies = es.eigenvalues();
  s.vectors = es.eigenvectors();
  const Eigen::Index n = h.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(s.energies(i) - mu) <= 1e-12) throw GaplessError("eigenvalue at the chemical potential");
    if (s.energies(i) < mu) ++s.filled;
  }
  if (s.filled == 0 || s.filled == n)
    s.one_body_gap = std::numeric_limits<double>::infinity();
  else
    s.one_body_gap = s.energies(s.filled) - s.energies(s.filled - 1);
  const Mat occ = s.vectors.leftCols(s.filled);
  s.p = occ * occ.adjoint();
  return s;
}

double bulk_gap(const FermiSea& sea, const Lattice& lat, int margin) {
  const int n = lat.n_orb();
  std::vector<int> bulk_rows;
  for (const Site& x : lat.all())
    if (lat.edge_distance(x) >= margin)
      for (int i = 0; i < n; ++i) bulk_rows.push_back(lat.index(x) * n + i);
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < sea.vectors.cols(); ++k) {
    double w = 0;
    for (int r : bulk_rows) w += std::norm(sea.vectors(r, k));
    if (w < 0.5) continue;
    if (k < sea.filled)
      lo = std::max(lo, sea.energies(k));
    else
      hi = std::min(hi, sea.energies(k));
  }
  return hi - lo;
}

GapInequalityReport verify_gap_inequality(const FockSpace& space, const GroundState& gs,
                                          const Interaction& h,
                                          const std::vector<FockOperator>& samples) {
  const SpMat H = total(space, h).matrix();
  const Vec& psi = gs.vector;
  if ((H * psi - gs.energy * psi).norm() > 1e-8)
    throw StateError("ground state does not belong to this Hamiltonian");
  GapInequalityReport rep;
  for (const FockOperator& a : samples) {
    Vec apsi = a.matrix() * psi;
    // omega(A* [H, A]) with H psi = E0 psi
    double lhs = (apsi.dot(H * apsi) - gs.energy * apsi.squaredNorm()).real();
    double rhs = gs.gap * (apsi.squaredNorm() - std::norm(psi.dot(apsi)));
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    rep.min_slack = std::min(rep.min_slack, lhs - rhs);
  }
  rep.pass = rep.min_slack >= -1e-10;
  return rep;
}

}  // namespace hallcond
