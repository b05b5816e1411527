#include "hallcond/conductance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "hallcond/errors.hpp"
#include "hallcond/parallel.hpp"

namespace hallcond {

namespace {

void require_open(const Lattice& lat) {
  if (lat.boundary() == Boundary::Torus)
    throw GeometryError("switch functions and positions need an open lattice");
}

int box_edge_distance(const Lattice& lat, const Site& x, int k) { return lat.edge_distance(x) - k; }

std::vector<int> rows_of(const Lattice& lat, const std::vector<Site>& sites) {
  std::vector<int> rows;
  for (const Site& s : sites)
    for (int o = 0; o < lat.n_orb(); ++o) rows.push_back(lat.index(s) * lat.n_orb() + o);
  return rows;
}

// the same space with the lattice origin moved
FockSpace shifted_space(const FockSpace& space, const Site& origin) {
  return FockSpace(space.lattice().with_origin(origin), std::max(16, space.modes()));
}

double im2(cplx z) { return -2.0 * z.imag(); }

void finish(ConductanceReport& r) {
  const auto& s = r.series;
  if (s.empty()) return;
  r.sigma = s.back().value;
  r.increment = s.size() > 1 ? std::abs(s.back().value - s[s.size() - 2].value) : 0.0;
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::SwitchManyBody: return "switch-many-body";
    case Method::SwitchFree: return "switch-free";
    case Method::PositionFree: return "position-free";
    case Method::PositionManyBody: return "position-many-body";
  }
  return "?";
}

RVec switch_diagonal(const Lattice& lat, int j, const Site& origin) {
  if (j != 1 && j != 2) throw IndexError("axis must be 1 or 2");
  const Lattice shifted = lat.with_origin(origin);
  RVec d = RVec::Zero(lat.num_sites() * lat.n_orb());
  for (const Site& x : lat.all())
    if (shifted.position(x)[j - 1] >= 0) d.segment(lat.index(x) * lat.n_orb(), lat.n_orb()).setOnes();
  return d;
}

RVec position_diagonal(const Lattice& lat, int j, const Site& origin) {
  if (j != 1 && j != 2) throw IndexError("axis must be 1 or 2");
  const Lattice shifted = lat.with_origin(origin);
  RVec d(lat.num_sites() * lat.n_orb());
  for (const Site& x : lat.all())
    d.segment(lat.index(x) * lat.n_orb(), lat.n_orb()).setConstant(shifted.position(x)[j - 1]);
  return d;
}

std::map<Site, SpMat> one_body_local_terms(const Lattice& lat, const Mat& h) {
  const int n = lat.n_orb();
  const Eigen::Index dim = h.rows();
  std::map<Site, std::vector<Eigen::Triplet<cplx>>> trips;
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (h(i, j) == cplx(0)) continue;
      const Site a = lat.site(int(i) / n), b = lat.site(int(j) / n);
      const Site c = a == b ? a : center_of(Region({a, b}));
      trips[c].emplace_back(i, j, h(i, j));
    }
  std::map<Site, SpMat> out;
  for (auto& [x, t] : trips) {
    SpMat m(dim, dim);
    m.setFromTriplets(t.begin(), t.end());
    out.emplace(x, std::move(m));
  }
  return out;
}

std::vector<double> free_marker(const FermiSea& sea, const Lattice& lat, const RVec& a,
                                const RVec& b, const std::vector<Site>& sites) {
  const std::vector<int> rows = rows_of(lat, sites);
  const Eigen::Index n = sea.p.rows();
  Mat ps(rows.size(), n);
  for (std::size_t r = 0; r < rows.size(); ++r) ps.row(r) = sea.p.row(rows[r]);
  const Mat x = ps * a.asDiagonal();
  const Mat y = ps * b.asDiagonal();
  const Mat v = sea.vectors.leftCols(sea.filled);
  const Mat xv = x * v, yv = y * v;
  std::vector<double> out(sites.size(), 0.0);
  const int no = lat.n_orb();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    cplx t = (x.row(r).array() * y.row(r).array().conjugate()).sum() -
             (xv.row(r).array() * yv.row(r).array().conjugate()).sum();
    out[r / no] += im2(t);
  }
  return out;
}

ConductanceReport hall_conductance_free(const FermiSea& sea, const Lattice& lat,
                                        const FreeSwitchOptions& opt) {
  require_open(lat);
  const Site o = opt.origin.value_or(lat.origin());
  if (!lat.contains(o)) throw GeometryError("origin outside the lattice");
  const int ed = lat.edge_distance(o);
  if (ed < opt.min_edge_distance)
    throw GeometryError("origin is " + std::to_string(ed) + " sites from an edge, need " +
                        std::to_string(opt.min_edge_distance));
  const int r_max = std::max(0, ed - 4);
  std::vector<int> radii;
  for (int r = 2; r <= r_max; r += 2) radii.push_back(r);
  if (radii.empty() || radii.back() < r_max) radii.push_back(r_max);

  int ja = opt.swap ? 1 : 2, jb = opt.swap ? 2 : 1;
  const RVec a = switch_diagonal(lat, ja, o), b = switch_diagonal(lat, jb, o);
  const Region big = box(lat, o, radii.back());
  const std::vector<double> m = free_marker(sea, lat, a, b, big.sites());

  ConductanceReport rep;
  rep.method = Method::SwitchFree;
  rep.origin = o;
  for (int r : radii) {
    double s = 0;
    for (std::size_t i = 0; i < big.size(); ++i)
      if (lat.distance(big.sites()[i], o) <= r) s += m[i];
    rep.series.push_back({r, s});
  }
  finish(rep);
  rep.converged = rep.series.size() > 1 && rep.increment < opt.tol;
  // the full trace vanishes on a finite lattice; kept as a check
  const std::vector<double> all = free_marker(sea, lat, a, b, lat.all().sites());
  rep.global = rep.double_sum = std::accumulate(all.begin(), all.end(), 0.0);
  return rep;
}

ConductanceReport hall_conductance_mb(const OdContext& ctx, const ManyBodySwitchOptions& opt) {
  if (!ctx.space) throw StateError("empty context");
  const Lattice& lat = ctx.space->lattice();
  require_open(lat);
  const Site o = opt.origin.value_or(lat.origin());
  const FockSpace space = shifted_space(*ctx.space, o);
  const Interaction l2 = builtin_switch(space, opt.swap ? 1 : 2);
  const Interaction l1 = builtin_switch(space, opt.swap ? 2 : 1);
  const Vec psi = ctx.state();

  const std::vector<Site> sites = lat.all().sites();
  auto apply_local = [&](const Interaction& l) {
    return parallel_map<Vec>(sites.size(), [&](std::size_t i) -> Vec {
      return od_local(ctx, l, sites[i]).matrix() * psi;
    });
  };
  const std::vector<Vec> av = apply_local(l2), bv = apply_local(l1);
  const Eigen::Index ns = Eigen::Index(sites.size());
  Eigen::MatrixXd g(ns, ns);
  for (Eigen::Index i = 0; i < ns; ++i)
    for (Eigen::Index j = 0; j < ns; ++j) g(i, j) = im2(av[i].dot(bv[j]));

  ConductanceReport rep;
  rep.method = Method::SwitchManyBody;
  rep.origin = o;
  rep.double_sum = g.sum();
  const Vec a = od_observable(ctx, total(space, l2)).matrix() * psi;
  const Vec b = od_observable(ctx, total(space, l1)).matrix() * psi;
  rep.global = im2(a.dot(b));

  for (int r = 0;; ++r) {
    double s = 0;
    for (Eigen::Index i = 0; i < ns; ++i) {
      if (lat.distance(sites[i], o) > r) continue;
      for (Eigen::Index j = 0; j < ns; ++j)
        if (lat.distance(sites[j], o) <= r) s += g(i, j);
    }
    rep.series.push_back({r, s});
    if (box(lat, o, r).size() == sites.size()) break;
  }
  const double last = rep.series.back().value;
  rep.increment = rep.series.size() > 1 ? std::abs(last - rep.series[rep.series.size() - 2].value) : 0.0;
  rep.sigma = rep.global;
  rep.converged = std::abs(rep.global - rep.double_sum) <= 1e-9;
  return rep;
}

std::vector<SeriesPoint> free_switch_windows(const FermiSea& sea, const WeightFunction& w,
                                             const Lattice& lat, const Mat& h,
                                             std::optional<Site> origin, bool swap) {
  require_open(lat);
  const Site o = origin.value_or(lat.origin());
  const RVec l2 = switch_diagonal(lat, swap ? 1 : 2, o);
  const RVec l1 = switch_diagonal(lat, swap ? 2 : 1, o);
  const auto terms = one_body_local_terms(lat, h);
  const Eigen::Index n = h.rows();
  std::vector<SeriesPoint> out;
  for (int r = 0;; ++r) {
    Mat c2 = Mat::Zero(n, n), c1 = Mat::Zero(n, n);
    for (const auto& [x, k] : terms) {
      if (lat.distance(x, o) > r) continue;
      const Mat kd(k);
      c2 += l2.asDiagonal() * kd - kd * l2.asDiagonal();
      c1 += l1.asDiagonal() * kd - kd * l1.asDiagonal();
    }
    const Mat a = od_free_local(sea, w, c2), b = od_free_local(sea, w, c1);
    out.push_back({r, im2((sea.p * a * b).trace())});
    if (box(lat, o, r).size() == std::size_t(lat.num_sites())) break;
  }
  return out;
}

ConductanceReport hall_conductivity_position(const FermiSea& sea, const Lattice& lat, int k,
                                             const Site& x, const PositionOptions& opt) {
  require_open(lat);
  if (k < 0) throw ParamError("box radius must be >= 0");
  if (box_edge_distance(lat, x, k) < opt.min_edge_distance)
    throw GeometryError("box(x, " + std::to_string(k) + ") comes closer than " +
                        std::to_string(opt.min_edge_distance) + " sites to an edge");
  const Site o = opt.origin.value_or(lat.origin());
  const RVec x2 = position_diagonal(lat, 2, o), x1 = position_diagonal(lat, 1, o);
  const Region big = box(lat, x, k);
  const std::vector<double> m = free_marker(sea, lat, x2, x1, big.sites());
  ConductanceReport rep;
  rep.method = Method::PositionFree;
  rep.origin = x;
  for (int r = 0; r <= k; ++r) {
    double s = 0;
    int cnt = 0;
    for (std::size_t i = 0; i < big.size(); ++i)
      if (lat.distance(big.sites()[i], x) <= r) s += m[i], ++cnt;
    rep.series.push_back({r, s / cnt});
  }
  finish(rep);
  rep.converged = true;
  return rep;
}

ConductanceReport hall_conductivity_position(const OdContext& ctx, int k, const Site& x,
                                             const PositionOptions& opt) {
  if (!ctx.space) throw StateError("empty context");
  const Lattice& lat = ctx.space->lattice();
  require_open(lat);
  if (k < 0) throw ParamError("box radius must be >= 0");
  if (box_edge_distance(lat, x, k) < opt.min_edge_distance)
    throw GeometryError("box(x, " + std::to_string(k) + ") comes closer than " +
                        std::to_string(opt.min_edge_distance) + " sites to an edge");
  const FockSpace space = shifted_space(*ctx.space, opt.origin.value_or(lat.origin()));
  const Interaction X1 = builtin_position(space, 1);
  const Vec psi = ctx.state();
  const Vec a = od_observable(ctx, total(space, builtin_position(space, 2))).matrix() * psi;
  const std::vector<Site> sites = box(lat, x, k).sites();
  const std::vector<double> vals = parallel_map<double>(sites.size(), [&](std::size_t i) {
    return im2(a.dot(od_local(ctx, X1, sites[i]).matrix() * psi));
  });
  ConductanceReport rep;
  rep.method = Method::PositionManyBody;
  rep.origin = x;
  for (int r = 0; r <= k; ++r) {
    double s = 0;
    int cnt = 0;
    for (std::size_t i = 0; i < sites.size(); ++i)
      if (lat.distance(sites[i], x) <= r) s += vals[i], ++cnt;
    rep.series.push_back({r, s / cnt});
  }
  finish(rep);
  rep.converged = true;
  return rep;
}

std::map<Site, SpMat> one_body_current_terms(const Lattice& lat, const Mat& h,
                                             std::optional<Site> origin) {
  const RVec l2 = switch_diagonal(lat, 2, origin.value_or(lat.origin()));
  std::map<Site, SpMat> out;
  for (auto& [x, k] : one_body_local_terms(lat, h)) {
    SpMat j = cplx(0, 1) * (k * l2.cast<cplx>().asDiagonal() - l2.cast<cplx>().asDiagonal() * k);
    j.prune(cplx(0));
    if (j.nonZeros() > 0) out.emplace(x, std::move(j));
  }
  return out;
}

namespace {

std::vector<Site> stripe_window(const Lattice& lat, int k) {
  std::vector<Site> out;
  for (const Site& x : stripe(lat, k))
    if (x.i1 >= 4 && x.i1 <= lat.L1() - 5) out.push_back(x);
  return out;
}

StripeCurrent stripe_series(const Lattice& lat, int k, const std::map<Site, double>& term) {
  StripeCurrent out;
  for (int kk = 0; kk <= k; ++kk) {
    double s = 0;
    for (const Site& x : stripe_window(lat, kk))
      if (auto it = term.find(x); it != term.end()) s += it->second;
    out.series.push_back({kk, s / (2 * kk + 1)});
    out.total = s;
    out.value = s / (2 * kk + 1);
  }
  return out;
}

}  // namespace

StripeCurrent stripe_current(const Mat& p, const Mat& h, const Lattice& lat, int k) {
  require_open(lat);
  if (k < 0) throw ParamError("stripe half-width must be >= 0");
  std::map<Site, double> term;
  for (const Site& x : stripe_window(lat, k)) term[x] = 0;
  for (const auto& [x, j] : one_body_current_terms(lat, h)) {
    if (!term.count(x)) continue;
    cplx t = 0;
    for (Eigen::Index c = 0; c < j.outerSize(); ++c)
      for (SpMat::InnerIterator it(j, c); it; ++it) t += it.value() * p(it.col(), it.row());
    term[x] = t.real();
  }
  return stripe_series(lat, k, term);
}

StripeCurrent stripe_current(const FockSpace& space, const Vec& psi, const Interaction& h, int k) {
  const Lattice& lat = space.lattice();
  require_open(lat);
  if (k < 0) throw ParamError("stripe half-width must be >= 0");
  const Interaction j = cplx(0, 1) * commutator_interaction(h, builtin_switch(space, 2));
  std::map<Site, double> term;
  for (const Site& x : stripe_window(lat, k)) term[x] = expectation(psi, local_term(space, j, x)).real();
  return stripe_series(lat, k, term);
}

namespace {

// orientation of the plaquette sum that matches the switch-function sign
constexpr double kOrientation = 1.0;

struct BlochBands {
  int filled = 0;
  double gap = std::numeric_limits<double>::infinity();
  std::vector<Mat> occ;  // row-major over the k grid
};

BlochBands bloch_bands(const ModelSpec& spec, int n_orb, int grid) {
  BlochBands b;
  b.occ.resize(std::size_t(grid) * grid);
  const double dk = 2 * std::numbers::pi / grid;
  for (int j = 0; j < grid; ++j)
    for (int i = 0; i < grid; ++i) {
      Eigen::SelfAdjointEigenSolver<Mat> es(bloch_hamiltonian(spec, n_orb, i * dk, j * dk));
      const RVec& e = es.eigenvalues();
      int f = 0;
      while (f < e.size() && e(f) < 0) ++f;
      if (i == 0 && j == 0)
        b.filled = f;
      else if (f != b.filled)
        throw GaplessError("band filling at zero energy changes across the zone");
      if (f > 0 && f < e.size()) b.gap = std::min(b.gap, e(f) - e(f - 1));
      b.occ[std::size_t(j) * grid + i] = es.eigenvectors().leftCols(f);
    }
  if (b.gap < 1e-9) throw GaplessError("Bloch spectrum gapless at zero energy");
  return b;
}

double fhs_sum(const BlochBands& b, int grid) {
  if (b.filled == 0) return 0;
  auto at = [&](int i, int j) -> const Mat& {
    return b.occ[std::size_t((j + grid) % grid) * grid + (i + grid) % grid];
  };
  auto link = [&](int i, int j, int di, int dj) {
    cplx d = (at(i, j).adjoint() * at(i + di, j + dj)).determinant();
    if (std::abs(d) < 1e-12) throw NumericalError("vanishing link variable, refine the grid");
    return d / std::abs(d);
  };
  double total = 0;
  for (int j = 0; j < grid; ++j)
    for (int i = 0; i < grid; ++i) {
      cplx f = link(i, j, 1, 0) * link(i + 1, j, 0, 1) * std::conj(link(i, j + 1, 1, 0)) *
               std::conj(link(i, j, 0, 1));
      total += std::arg(f);
    }
  return kOrientation * total / (2 * std::numbers::pi);
}

}  // namespace

ChernResult chern_fhs_report(const ModelSpec& spec, int grid) {
  if (grid < 16) throw ParamError("grid must be >= 16");
  if (!is_translation_invariant(spec)) throw ModelError("Chern number needs a clean translation-invariant model");
  const int n_orb = std::max(1, required_orbitals(spec));
  const BlochBands coarse = bloch_bands(spec, n_orb, grid);
  const BlochBands fine = bloch_bands(spec, n_orb, 2 * grid);
  const double c1 = fhs_sum(coarse, grid), c2 = fhs_sum(fine, 2 * grid);
  const long r1 = std::lround(c1), r2 = std::lround(c2);
  if (r1 != r2 || std::abs(c2 - double(r2)) > 1e-6)
    throw NumericalError("Chern sum not grid-stable: " + std::to_string(c1) + " vs " + std::to_string(c2));
  ChernResult out;
  out.chern = int(r2);
  out.raw = c2;
  out.filled = fine.filled;
  out.gap = std::min(coarse.gap, fine.gap);
  return out;
}

int chern_fhs(const ModelSpec& spec, int grid) { return chern_fhs_report(spec, grid).chern; }

}  // namespace hallcond
