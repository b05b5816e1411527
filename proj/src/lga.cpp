#include "hallcond/lga.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "hallcond/errors.hpp"

namespace hallcond {

Interaction LgaSpec::at(double v) const {
  if (knots.empty()) return Interaction{};
  if (knots.size() == 1) return knots.front();
  const double s = std::clamp(v, 0.0, 1.0) * double(knots.size() - 1);
  const auto k = std::min(std::size_t(s), knots.size() - 2);
  const double f = s - double(k);
  if (f == 0) return knots[k];
  return cplx(1 - f) * knots[k] + cplx(f) * knots[k + 1];
}

double LgaSpec::norm_budget(const FockSpace& space, double nu) const {
  double out = 0;
  for (const auto& k : knots) out = std::max(out, interaction_norm(space, k, nu));
  return out;
}

namespace {

Mat expm_hermitian(const Mat& k, double tau) {
  Eigen::SelfAdjointEigenSolver<Mat> es(k);
  Vec ph = (cplx(0, -tau) * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

// time-ordered exponential of -i int_u^v g(s) ds for a generator linear
// between the knot times
Mat propagate(const std::vector<Mat>& g, double u, double v, const LgaOptions& opt) {
  const Eigen::Index dim = g.front().rows();
  Mat U = Mat::Identity(dim, dim);
  if (u == v) return U;
  const int pieces = std::max<int>(1, int(g.size()) - 1);
  auto gen = [&](double s) -> Mat {
    if (g.size() == 1) return g.front();
    const double x = std::clamp(s, 0.0, 1.0) * pieces;
    const int k = std::min(int(x), pieces - 1);
    const double f = x - k;
    return (1 - f) * g[k] + f * g[k + 1];
  };

  const double s3 = std::sqrt(3.0);
  const double c1 = 0.5 - s3 / 6, c2 = 0.5 + s3 / 6;
  const double a1 = (3 - 2 * s3) / 12, a2 = (3 + 2 * s3) / 12;
  auto step = [&](const Mat& m, double t, double dt) -> Mat {
    const Mat g1 = gen(t + c1 * dt), g2 = gen(t + c2 * dt);
    return expm_hermitian(a2 * g1 + a1 * g2, dt) * (expm_hermitian(a1 * g1 + a2 * g2, dt) * m);
  };

  // knot times between u and v, in the direction of travel
  const double dir = v > u ? 1.0 : -1.0;
  std::vector<double> stops;
  for (int k = 1; k < pieces; ++k) {
    const double t = double(k) / pieces;
    if ((t - u) * dir > 0 && (v - t) * dir > 0) stops.push_back(t);
  }
  if (dir < 0) std::reverse(stops.begin(), stops.end());
  stops.push_back(v);

  const double scale = std::sqrt(double(dim));
  double t = u, dt = opt.h0;
  for (double stop : stops) {
    while ((stop - t) * dir > 0) {
      dt = std::min(dt, std::abs(stop - t));
      const Mat big = step(U, t, dir * dt);
      const Mat fine = step(step(U, t, dir * dt / 2), t + dir * dt / 2, dir * dt / 2);
      const double err = (big - fine).norm() / scale / 15;
      const double grow = err > 0 ? 0.9 * std::pow(opt.tol / err, 0.2) : 2.0;
      if (err <= opt.tol) {
        U = fine;
        t = std::abs(stop - t - dir * dt) < 1e-14 ? stop : t + dir * dt;
        dt *= std::clamp(grow, 0.2, 2.0);
      } else {
        dt *= std::clamp(grow, 0.1, 0.9);
        if (dt < 1e-10) throw IntegrationError("LGA step size collapsed at v = " + std::to_string(t));
      }
    }
  }
  // roundoff of the many step products leaves U unitary only to ~1e-13;
  // the polar factor removes that without moving U beyond it
  Eigen::JacobiSVD<Mat> svd(U, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

FockOperator assemble(const FockSpace& space, const std::vector<std::pair<int, Mat>>& blocks) {
  std::vector<Eigen::Triplet<cplx>> t;
  for (const auto& [n, b] : blocks) {
    const auto& states = space.sector(n);
    for (Eigen::Index c = 0; c < b.cols(); ++c)
      for (Eigen::Index r = 0; r < b.rows(); ++r)
        if (b(r, c) != cplx(0)) t.emplace_back(states[r], states[c], b(r, c));
  }
  SpMat m(space.dim(), space.dim());
  m.setFromTriplets(t.begin(), t.end());
  return FockOperator(std::move(m), space.lattice().all());
}

}  // namespace

FockOperator build_lga(const FockSpace& space, const LgaSpec& spec, double u, double v,
                       const LgaOptions& opt) {
  if (spec.knots.empty() || std::all_of(spec.knots.begin(), spec.knots.end(),
                                        [](const Interaction& k) { return k.empty(); }))
    return FockOperator::identity(space);
  std::vector<FockOperator> tot;
  bool gauge = true;
  for (const auto& k : spec.knots) {
    if (k.hermiticity_defect() > 1e-12) throw ParamError("LGA generator is not hermitian");
    gauge = gauge && k.gauge_invariant();
    tot.push_back(total(space, k));
  }
  if (gauge) {
    std::vector<std::pair<int, Mat>> blocks;
    for (int n = 0; n <= space.modes(); ++n) {
      std::vector<Mat> g;
      for (const auto& k : tot) g.push_back(sector_block(space, k.matrix(), n));
      blocks.emplace_back(n, propagate(g, u, v, opt));
    }
    return assemble(space, blocks);
  }
  if (space.dim() > opt.full_limit)
    throw SizeError("sector-mixing LGA needs the full Fock space of dimension " +
                    std::to_string(space.dim()));
  std::vector<Mat> g;
  for (const auto& k : tot) g.push_back(Mat(k.matrix()));
  Mat U = propagate(g, u, v, opt);
  SpMat m = U.sparseView(1.0, 0.0);
  return FockOperator(std::move(m), space.lattice().all());
}

bool Circuit::quadratic() const {
  for (const auto& l : layers)
    for (const auto& g : l)
      if (g.one_body.size() == 0) return false;
  return true;
}

namespace {

Gate make_gate(const Lattice& lat, const Region& region, std::mt19937_64& rng, bool quadratic,
               double strength) {
  // the region's modes in local order: a two-site strip is enough
  const std::vector<Site>& s = region.sites();
  const bool vertical = s.size() == 2 && s[0].i1 == s[1].i1;
  const FockSpace local(vertical ? Lattice(1, int(s.size()), Boundary::Open, lat.n_orb())
                                 : Lattice(int(s.size()), 1, Boundary::Open, lat.n_orb()));
  Gate g;
  g.region = region;
  Mat k;
  if (quadratic) {
    std::normal_distribution<double> nd;
    const int m = local.modes();
    Mat k1(m, m);
    for (int c = 0; c < m; ++c)
      for (int r = 0; r < m; ++r) k1(r, c) = cplx(nd(rng), nd(rng));
    k1 = (0.5 * (k1 + k1.adjoint())).eval();
    k1 *= strength / spectral_norm(k1);
    g.one_body = expm_hermitian(k1, 1.0);
    k = Mat(second_quantize(local, k1, local.lattice().all()).matrix());
  } else {
    k = Mat(random_local(local, local.lattice().all(), rng).matrix());
    k *= strength / spectral_norm(k);
  }
  g.local = expm_hermitian(k, 1.0);
  return g;
}

}  // namespace

Circuit random_circuit(const Lattice& lat, int depth, std::mt19937_64& rng, bool quadratic,
                       double strength) {
  if (depth < 0) throw ParamError("circuit depth must be >= 0");
  Circuit c;
  for (int l = 0; l < depth; ++l) {
    const bool horizontal = l % 2 == 0;
    const int shift = (l / 2) % 2;
    std::vector<Gate> layer;
    for (int i2 = 0; i2 < lat.L2(); ++i2)
      for (int i1 = 0; i1 < lat.L1(); ++i1) {
        const int along = horizontal ? i1 : i2;
        if ((along - shift) % 2 != 0 || along < shift) continue;
        Site a{i1, i2}, b = horizontal ? Site{i1 + 1, i2} : Site{i1, i2 + 1};
        if (!lat.contains(b)) continue;
        layer.push_back(make_gate(lat, Region({a, b}), rng, quadratic, strength));
      }
    c.layers.push_back(std::move(layer));
  }
  return c;
}

Circuit gauge_circuit(const Lattice& lat, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ud(0.0, 2 * std::numbers::pi);
  std::vector<Gate> layer;
  const int no = lat.n_orb();
  for (int i = 0; i < lat.num_sites(); ++i) {
    Gate g;
    g.region = Region({lat.site(i)});
    const double th = ud(rng);
    g.one_body = std::exp(cplx(0, -th)) * Mat::Identity(no, no);
    g.local = Mat::Zero(Eigen::Index(1) << no, Eigen::Index(1) << no);
    for (Eigen::Index b = 0; b < g.local.rows(); ++b)
      g.local(b, b) = std::exp(cplx(0, -th * std::popcount(std::uint32_t(b))));
    layer.push_back(std::move(g));
  }
  Circuit c;
  c.layers.push_back(std::move(layer));
  return c;
}

FockOperator circuit_unitary(const FockSpace& space, const Circuit& c) {
  FockOperator u = FockOperator::identity(space);
  for (const auto& l : c.layers)
    for (const auto& g : l) u = embed(space, g.region, g.local) * u;
  return u.with_support(space.lattice().all());
}

Mat circuit_one_body(const Lattice& lat, const Circuit& c) {
  const int no = lat.n_orb();
  const Eigen::Index n = Eigen::Index(lat.num_sites()) * no;
  Mat u = Mat::Identity(n, n);
  for (const auto& l : c.layers) {
    Mat layer = Mat::Identity(n, n);
    for (const auto& g : l) {
      if (g.one_body.size() == 0) throw ParamError("circuit gate is not quadratic");
      std::vector<Eigen::Index> idx;
      for (const Site& s : g.region)
        for (int o = 0; o < no; ++o) idx.push_back(Eigen::Index(lat.index(s)) * no + o);
      for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t k = 0; k < idx.size(); ++k) layer(idx[r], idx[k]) = g.one_body(r, k);
    }
    u = layer * u;
  }
  return u;
}

FockOperator conjugate(const FockSpace& space, const Circuit& c, const FockOperator& a) {
  FockOperator out = a;
  Region s = a.support();
  for (const auto& l : c.layers) {
    Region grown = s;
    for (const auto& g : l) {
      if (!g.region.intersects(s)) continue;
      const FockOperator u = embed(space, g.region, g.local);
      out = u * out * u.adjoint();
      grown = region_union(grown, g.region);
    }
    s = grown;
  }
  return out.with_support(s);
}

Interaction conjugate(const FockSpace& space, const Circuit& c, const Interaction& phi) {
  Interaction out(phi.name());
  for (const auto& [key, op] : phi) {
    FockOperator t = conjugate(space, c, op.with_support(key.first));
    Region r = t.support();
    out.add(r, key.second, t);
  }
  return out;
}

Interaction conjugate(const FockSpace& space, const FockOperator& u, const Interaction& phi) {
  Interaction out(phi.name());
  const Region all = space.lattice().all();
  for (const auto& [key, op] : phi) out.add(all, key.second, (u * op * u.adjoint()).with_support(all));
  return out;
}

namespace {

void fill(InvarianceReport& r, const ConductanceReport& a, const ConductanceReport& b) {
  r.sigma0 = a.sigma;
  r.sigma1 = b.sigma;
  r.delta = std::abs(a.sigma - b.sigma);
  r.windows0 = a.series;
  r.windows1 = b.series;
  r.window_delta = 0;
  for (std::size_t i = 0; i < std::min(a.series.size(), b.series.size()); ++i)
    r.window_delta = std::max(r.window_delta, std::abs(a.series[i].value - b.series[i].value));
}

InvarianceReport compare(const FockSpace& space, const Interaction& h, const Interaction& h1,
                         const WeightFunction& w, std::optional<Site> origin) {
  ManyBodySwitchOptions so;
  so.origin = origin;
  const GroundState g0 = ground_state(space, h);
  const GroundState g1 = ground_state(space, h1);
  const ConductanceReport a = hall_conductance_mb(make_od_context(space, h, g0, w), so);
  const ConductanceReport b = hall_conductance_mb(make_od_context(space, h1, g1, w), so);
  InvarianceReport r;
  r.gap0 = g0.gap;
  r.gap1 = g1.gap;
  fill(r, a, b);
  return r;
}

}  // namespace

InvarianceReport conductance_invariance_test(const FockSpace& space, const Interaction& h,
                                             const WeightFunction& w, const Circuit& c,
                                             std::optional<Site> origin) {
  return compare(space, h, conjugate(space, c, h), w, origin);
}

InvarianceReport conductance_invariance_test(const FockSpace& space, const Interaction& h,
                                             const WeightFunction& w, const LgaSpec& spec,
                                             std::optional<Site> origin) {
  return compare(space, h, conjugate(space, build_lga(space, spec, 0, 1), h), w, origin);
}

InvarianceReport free_invariance_test(const Mat& h, const Lattice& lat, const Circuit& c,
                                      const FreeSwitchOptions& opt) {
  const Mat u = circuit_one_body(lat, c);
  const Mat h1 = u * h * u.adjoint();
  const FermiSea s0 = fermi_sea(h, 0.0), s1 = fermi_sea(0.5 * (h1 + h1.adjoint()), 0.0);
  InvarianceReport r;
  r.gap0 = s0.one_body_gap;
  r.gap1 = s1.one_body_gap;
  fill(r, hall_conductance_free(s0, lat, opt), hall_conductance_free(s1, lat, opt));
  return r;
}

ParentReport parent_independence_test(const FockSpace& space, const Interaction& h,
                                      const WeightFunction& w, double c) {
  const GroundState g = ground_state(space, h);
  const ConductanceReport a = hall_conductance_mb(make_od_context(space, h, g, w));

  FockOperator d = total(space, h) - g.energy * FockOperator::identity(space);
  Interaction sq;
  sq.add(space.lattice().all(), cplx(c) * (d * d));
  const Interaction h2 = h + sq;
  const GroundState g2 = ground_state(space, h2);
  const ConductanceReport b = hall_conductance_mb(make_od_context(space, h2, g2, w));

  const Interaction h3 = cplx(2) * h;
  const GroundState g3 = ground_state(space, h3);
  const ConductanceReport s = hall_conductance_mb(make_od_context(space, h3, g3, w));

  ParentReport r;
  r.sigma = a.sigma;
  r.sigma_squared = b.sigma;
  r.delta_global = std::abs(a.sigma - b.sigma);
  for (std::size_t i = 0; i < std::min(a.series.size(), s.series.size()); ++i)
    r.delta_scaled = std::max(r.delta_scaled, std::abs(a.series[i].value - s.series[i].value));
  r.gap = g.gap;
  r.gap_squared = g2.gap;
  return r;
}

}  // namespace hallcond
