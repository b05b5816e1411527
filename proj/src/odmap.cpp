#include "hallcond/odmap.hpp"

#include <bit>
#include <map>

#include "hallcond/errors.hpp"

namespace hallcond {

namespace {

using Kernel = std::function<double(double)>;

// K(E_m - E_n) A_mn in the eigenbasis of every pair of particle sectors
SpMat filter_eigenbasis(const FockSpace& space, const EigenSystem& eig, const SpMat& a,
                        const Kernel& kernel) {
  std::map<std::pair<int, int>, Mat> blocks;
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it) {
      const auto r = static_cast<std::uint32_t>(it.row()), c = static_cast<std::uint32_t>(it.col());
      const int nr = std::popcount(r), nc = std::popcount(c);
      auto [pos, fresh] = blocks.try_emplace({nr, nc});
      if (fresh)
        pos->second = Mat::Zero(Eigen::Index(space.sector(nr).size()),
                                Eigen::Index(space.sector(nc).size()));
      pos->second(space.sector_position(r), space.sector_position(c)) += it.value();
    }
  std::vector<Eigen::Triplet<cplx>> trip;
  for (auto& [key, blk] : blocks) {
    const SectorEigen* er = eig.find(key.first);
    const SectorEigen* ec = eig.find(key.second);
    if (!er || !ec) throw StateError("eigensystem is missing a particle sector");
    Mat b = er->vectors.adjoint() * blk * ec->vectors;
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index i = 0; i < b.rows(); ++i) b(i, j) *= kernel(er->values(i) - ec->values(j));
    b = er->vectors * b * ec->vectors.adjoint();
    const auto& rows = space.sector(key.first);
    const auto& cols = space.sector(key.second);
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index i = 0; i < b.rows(); ++i)
        if (b(i, j) != 0.0) trip.emplace_back(rows[i], cols[j], b(i, j));
  }
  SpMat out(a.rows(), a.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

SpMat conjugate_in(const OdContext& ctx, const SpMat& a) {
  if (!ctx.u) return a;
  return SpMat(ctx.u->adjoint()) * a * (*ctx.u);
}

SpMat conjugate_out(const OdContext& ctx, const SpMat& a) {
  if (!ctx.u) return a;
  return (*ctx.u) * a * SpMat(ctx.u->adjoint());
}

Kernel phi_kernel(const OdContext& ctx, QuadratureStatus* status) {
  if (ctx.filter == Filter::Spectral) return [&w = ctx.w](double d) { return w.phi_spectral(d); };
  return [&table = ctx.phi_table(), &ctx, status](double d) {
    double err = 0;
    double v = table(d, status ? &err : nullptr);
    if (status) {
      status->estimate = std::max(status->estimate, err);
      status->warning = status->estimate > ctx.quad_tol;
    }
    return v;
  };
}

FockOperator filtered(const OdContext& ctx, const FockOperator& a, const Kernel& k) {
  SpMat m = conjugate_out(ctx, filter_eigenbasis(*ctx.space, *ctx.eig, conjugate_in(ctx, a.matrix()), k));
  return FockOperator(std::move(m), ctx.space->lattice().all());
}

}  // namespace

OdContext::OdContext(const OdContext& o)
    : space(o.space), h(o.h), eig(o.eig), psi(o.psi), energy(o.energy), gap(o.gap), w(o.w),
      u(o.u), filter(o.filter), quad_tol(o.quad_tol), ce(o.ce) {}

OdContext& OdContext::operator=(const OdContext& o) {
  if (this != &o) {
    OdContext tmp(o);
    *this = std::move(tmp);
  }
  return *this;
}

Vec OdContext::state() const { return u ? Vec(*u * psi) : psi; }

const PhiTable& OdContext::phi_table() const {
  std::call_once(table_->once, [this] {
    double lo = 0, hi = 0;
    bool first = true;
    for (const SectorEigen& s : eig->sectors) {
      if (s.values.size() == 0) continue;
      lo = first ? s.values.minCoeff() : std::min(lo, s.values.minCoeff());
      hi = first ? s.values.maxCoeff() : std::max(hi, s.values.maxCoeff());
      first = false;
    }
    table_->table = std::make_unique<PhiTable>(w, hi - lo);
  });
  return *table_->table;
}

OdContext make_od_context(const FockSpace& space, const Interaction& h, const GroundState& gs,
                          WeightFunction w, std::optional<SpMat> u) {
  if (!gs.eigensystem) throw StateError("off-diagonal maps need the full eigensystem");
  if (w.g() > 1.05 * gs.gap)
    throw ParamError("W built for g = " + std::to_string(w.g()) + " above the gap " +
                     std::to_string(gs.gap));
  OdContext ctx;
  ctx.space = &space;
  ctx.h = h;
  ctx.eig = gs.eigensystem;
  ctx.psi = gs.vector;
  ctx.energy = gs.energy;
  ctx.gap = gs.gap;
  ctx.w = std::move(w);
  ctx.u = std::move(u);
  return ctx;
}

FockOperator od_observable_spectral(const OdContext& ctx, const FockOperator& a) {
  if (!ctx.eig) throw StateError("no eigensystem");
  return filtered(ctx, a, [&w = ctx.w](double d) { return w.phi_spectral(d); });
}

FockOperator od_observable_quadrature(const OdContext& ctx, const FockOperator& a,
                                      QuadratureStatus* status) {
  if (!ctx.eig) throw StateError("no eigensystem");
  QuadratureStatus local;
  QuadratureStatus* st = status ? status : &local;
  return filtered(ctx, a, [&table = ctx.phi_table(), &ctx, st](double d) {
    double err = 0;
    double v = table(d, &err);
    st->estimate = std::max(st->estimate, err);
    st->warning = st->estimate > ctx.quad_tol;
    return v;
  });
}

FockOperator od_observable(const OdContext& ctx, const FockOperator& a, QuadratureStatus* status) {
  return ctx.filter == Filter::Spectral ? od_observable_spectral(ctx, a)
                                        : od_observable_quadrature(ctx, a, status);
}

FockOperator od_local(const OdContext& ctx, const Interaction& psi, const Site& x,
                      QuadratureStatus* status) {
  if (!ctx.eig) throw StateError("no eigensystem");
  const FockSpace& space = *ctx.space;
  FockOperator hx = local_term(space, ctx.h, x);
  if (ctx.u) hx = FockOperator(*ctx.u * hx.matrix() * SpMat(ctx.u->adjoint()), space.lattice().all());
  FockOperator c = liouvillian(space, psi, hx);
  // i int W e^{isL_H} L B ds = -(phi(D)/D) B in the eigenbasis
  Kernel phi = phi_kernel(ctx, status);
  return filtered(ctx, c, [&phi](double d) { return d == 0 ? 0.0 : -phi(d) / d; });
}

std::vector<FockOperator> shell_decomposition(const FockSpace& space, const FockOperator& a,
                                              const Site& x, int k_max,
                                              ConditionalExpectationOptions opt) {
  const Lattice& lat = space.lattice();
  std::vector<FockOperator> shells;
  FockOperator prev = tracial_state(a) * FockOperator::identity(space);
  for (int k = 0; k <= k_max; ++k) {
    FockOperator cur = k == k_max ? a : conditional_expectation(space, box(lat, x, k), a, opt);
    shells.push_back(cur - prev);
    prev = std::move(cur);
  }
  return shells;
}

Interaction od_interaction(const OdContext& ctx, const Interaction& psi, int k_max,
                           QuadratureStatus* status) {
  const FockSpace& space = *ctx.space;
  const Lattice& lat = space.lattice();
  Interaction out(psi.name() + "^OD");
  for (const Site& x : lat.all()) {
    int kx = k_max;
    if (kx < 0) {
      kx = 0;
      while (box(lat, x, kx).size() < std::size_t(lat.num_sites())) ++kx;
    }
    FockOperator local = od_local(ctx, psi, x, status);
    if (local.matrix().nonZeros() == 0) continue;
    std::vector<FockOperator> sh = shell_decomposition(space, local, x, kx, ctx.ce);
    for (int k = 0; k <= kx; ++k) out.add(box(lat, x, k), x, sh[k]);
  }
  return out;
}

Mat od_free(const FermiSea& sea, const Mat& a) {
  const Mat q = Mat::Identity(a.rows(), a.cols()) - sea.p;
  return sea.p * a * q + q * a * sea.p;
}

namespace {

Mat filter_one_body(const FermiSea& sea, const Mat& a, const Kernel& k) {
  Mat b = sea.vectors.adjoint() * a * sea.vectors;
  for (Eigen::Index j = 0; j < b.cols(); ++j)
    for (Eigen::Index i = 0; i < b.rows(); ++i) b(i, j) *= k(sea.energies(i) - sea.energies(j));
  return sea.vectors * b * sea.vectors.adjoint();
}

}  // namespace

Mat od_free_filtered(const FermiSea& sea, const WeightFunction& w, const Mat& a) {
  return filter_one_body(sea, a, [&w](double d) { return w.phi_spectral(d); });
}

Mat od_free_local(const FermiSea& sea, const WeightFunction& w, const Mat& c) {
  return filter_one_body(sea, c, [&w](double d) { return d == 0 ? 0.0 : -w.phi_spectral(d) / d; });
}

}  // namespace hallcond
