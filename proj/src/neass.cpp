#include "hallcond/neass.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hallcond/errors.hpp"
#include "hallcond/parallel.hpp"

namespace hallcond {

namespace {

double bump(double t) { return (t <= 0 || t >= 1) ? 0.0 : std::exp(-1.0 / (t * (1.0 - t))); }

}  // namespace

SwitchingFunction::SwitchingFunction(Protocol kind) : kind_(kind) {
  if (kind_ == Protocol::CP)
    norm_ = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(bump, 0.0, 1.0, 15, 1e-14);
}

double SwitchingFunction::operator()(double t) const {
  if (kind_ == Protocol::CP) return bump(t) / norm_;
  if (t <= 0) return 0.0;
  if (t >= 1) return 1.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

FermiSea perturbed_state(const Mat& h, const Lattice& lat, double eps, double mu,
                         std::optional<Site> origin) {
  const RVec l1 = switch_diagonal(lat, 1, origin.value_or(lat.origin()));
  Mat he = h;
  he.diagonal() += (eps * l1).cast<cplx>();
  FermiSea sea = fermi_sea(he, mu);
  if (!(bulk_gap(sea, lat, std::min(8, std::max(0, lat.edge_distance(lat.origin()) - 1))) > 0))
    throw GaplessError("perturbation eps = " + std::to_string(eps) + " closes the bulk gap");
  return sea;
}

Interaction perturbed_hamiltonian(const FockSpace& space, const Interaction& h, double eps) {
  if (eps == 0) return h;
  Interaction out = h + cplx(eps) * builtin_switch(space, 1);
  out.set_name(h.name() + "+eps*Lambda1");
  return out;
}

GroundState perturbed_state(const FockSpace& space, const Interaction& h, double eps,
                            const GroundStateOptions& opt) {
  try {
    return ground_state(space, perturbed_hamiltonian(space, h, eps), opt);
  } catch (const DegenerateGroundState& e) {
    throw GaplessError("perturbation eps = " + std::to_string(eps) + " closes the gap (" + e.what() + ")");
  }
}

namespace {

DeltaCurrent sum_terms(const Lattice& lat, const std::map<Site, double>& terms, int R) {
  DeltaCurrent out;
  out.radius = R;
  const Site o = lat.origin();
  for (int r = 0; r <= R; ++r) {
    double s = 0;
    for (const auto& [x, v] : terms)
      if (lat.distance(x, o) <= r) s += v;
    out.series.push_back({r, s});
  }
  out.value = out.series.back().value;
  return out;
}

int covering_radius(const Lattice& lat) {
  int r = 0;
  for (const Site& x : lat.all()) r = std::max(r, lat.distance(x, lat.origin()));
  return r;
}

}  // namespace

DeltaCurrent delta_current(const FermiSea& eps, const FermiSea& zero, const Lattice& lat,
                           const Mat& h, int R) {
  if (R < 0) R = std::max(0, lat.edge_distance(lat.origin()) - 4);
  const Mat dp = eps.p - zero.p;
  std::map<Site, double> terms;
  for (const auto& [x, j] : one_body_current_terms(lat, h)) {
    if (lat.distance(x, lat.origin()) > R) continue;
    cplx t = 0;
    for (Eigen::Index c = 0; c < j.outerSize(); ++c)
      for (SpMat::InnerIterator it(j, c); it; ++it) t += it.value() * dp(it.col(), it.row());
    terms[x] = t.real();
  }
  return sum_terms(lat, terms, R);
}

DeltaCurrent delta_current(const FockSpace& space, const Vec& eps, const Vec& zero,
                           const Interaction& h, int R) {
  const Lattice& lat = space.lattice();
  if (R < 0) R = covering_radius(lat);
  const Interaction j = cplx(0, 1) * commutator_interaction(h, builtin_switch(space, 2));
  std::map<Site, double> terms;
  for (const Site& x : box(lat, lat.origin(), R)) {
    const FockOperator jx = local_term(space, j, x);
    terms[x] = (expectation(eps, jx) - expectation(zero, jx)).real();
  }
  return sum_terms(lat, terms, R);
}

void fit_response(ResponseScan& scan, double floor) {
  double num = 0, den = 0;
  std::size_t i0 = scan.epsilons.size();
  for (std::size_t i = 0; i < scan.epsilons.size(); ++i) {
    const double e = scan.epsilons[i];
    num += e * scan.delta_j[i];
    den += e * e;
    if (e != 0 && (i0 == scan.epsilons.size() || std::abs(e) < std::abs(scan.epsilons[i0]))) i0 = i;
  }
  scan.slope = den > 0 ? num / den : 0.0;
  scan.residuals.clear();
  for (std::size_t i = 0; i < scan.epsilons.size(); ++i)
    scan.residuals.push_back(scan.delta_j[i] - scan.slope * scan.epsilons[i]);

  // The least-squares slope mixes the nonlinear part into every residual and
  // flips its sign inside the scan, so the exponent is read off the
  // deviation from the chord through the smallest |eps| instead.
  scan.exponent_points = 0;
  scan.residual_exponent = 0;
  if (i0 == scan.epsilons.size()) return;
  const double s0 = scan.delta_j[i0] / scan.epsilons[i0];
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < scan.epsilons.size(); ++i) {
    const double e = scan.epsilons[i];
    const double r = scan.delta_j[i] - s0 * e;
    if (i == i0 || e == 0 || std::abs(r) <= floor) continue;
    lx.push_back(std::log(std::abs(e)));
    ly.push_back(std::log(std::abs(r)));
  }
  scan.exponent_points = int(lx.size());
  if (lx.size() < 2) return;
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx > 0) scan.residual_exponent = sxy / sxx;
}

ResponseScan linear_response_scan(const Mat& h, const Lattice& lat, const std::vector<double>& eps,
                                  int R, double mu, double floor) {
  const FermiSea zero = fermi_sea(h, mu);
  if (R < 0) R = std::max(0, lat.edge_distance(lat.origin()) - 4);
  auto runs = parallel_map<DeltaCurrent>(eps.size(), [&](std::size_t i) {
    if (eps[i] == 0) return sum_terms(lat, {}, R);
    return delta_current(perturbed_state(h, lat, eps[i], mu), zero, lat, h, R);
  });
  ResponseScan scan;
  scan.epsilons = eps;
  scan.radius = R;
  for (auto& d : runs) {
    scan.delta_j.push_back(d.value);
    scan.series.push_back(std::move(d.series));
  }
  fit_response(scan, floor);
  return scan;
}

ResponseScan linear_response_scan(const FockSpace& space, const Interaction& h,
                                  const std::vector<double>& eps, int R, double floor) {
  const GroundState zero = ground_state(space, h);
  if (R < 0) R = covering_radius(space.lattice());
  GroundStateOptions opt;
  opt.keep_eigensystem = false;
  auto runs = parallel_map<DeltaCurrent>(eps.size(), [&](std::size_t i) {
    if (eps[i] == 0) return sum_terms(space.lattice(), {}, R);
    return delta_current(space, perturbed_state(space, h, eps[i], opt).vector, zero.vector, h, R);
  });
  ResponseScan scan;
  scan.epsilons = eps;
  scan.radius = R;
  for (auto& d : runs) {
    scan.delta_j.push_back(d.value);
    scan.series.push_back(std::move(d.series));
  }
  fit_response(scan, floor);
  return scan;
}

namespace {

int particle_number(const Vec& psi) {
  int n = -1;
  for (Eigen::Index b = 0; b < psi.size(); ++b) {
    if (std::abs(psi(b)) < 1e-14) continue;
    const int k = std::popcount(std::uint32_t(b));
    if (n >= 0 && k != n) throw ParamError("state has no fixed particle number");
    n = k;
  }
  if (n < 0) throw ParamError("zero state");
  return n;
}

// exp(-i tau (H0/2 + c L)) restricted to one particle sector
class SectorPropagator {
 public:
  SectorPropagator(const FockSpace& space, const FockOperator& h0, int n, Eigen::Index dense_limit)
      : dim_(Eigen::Index(space.sector(n).size())), dense_(dim_ <= dense_limit) {
    if (dense_)
      h0d_ = sector_block(space, h0.matrix(), n);
    else
      h0s_ = sector_block_sparse(space, h0.matrix(), n);
    l1_.resize(dim_);
    const std::uint32_t mask = space.mask_of(half_plane(space.lattice(), 1, 0));
    const auto& states = space.sector(n);
    for (Eigen::Index i = 0; i < dim_; ++i) l1_(i) = std::popcount(states[i] & mask);
  }

  Vec apply(const Vec& v, double tau, double c) const {
    if (dense_) {
      Mat k = 0.5 * h0d_;
      k.diagonal() += (c * l1_).cast<cplx>();
      Eigen::SelfAdjointEigenSolver<Mat> es(k);
      Vec ph = (cplx(0, -tau) * es.eigenvalues().cast<cplx>()).array().exp();
      return es.eigenvectors() * (ph.asDiagonal() * (es.eigenvectors().adjoint() * v));
    }
    LinearMap op = [&](const Vec& in, Vec& out) {
      out = 0.5 * (h0s_ * in);
      out.array() += c * l1_.array() * in.array();
    };
    double err = 0;
    Vec out = krylov_expv(op, v, tau, &err);
    if (err > 1e-12) throw IntegrationError("Krylov exponential did not converge");
    return out;
  }

  double energy(const Vec& v) const {
    return dense_ ? v.dot(h0d_ * v).real() : v.dot(h0s_ * v).real();
  }

 private:
  Eigen::Index dim_;
  bool dense_;
  Mat h0d_;
  SpMat h0s_;
  RVec l1_;
};

}  // namespace

Evolution adiabatic_evolve(const FockSpace& space, const Interaction& h, const Vec& psi0,
                           double eps, double eta, const SwitchingFunction& f, double t_final,
                           const EvolveOptions& opt) {
  if (eta <= 0) throw ParamError("eta must be positive");
  if (t_final < 0) throw ParamError("t_final must be >= 0");
  if (f.kind() == Protocol::NE && t_final > 1.0 / eta * (1 + 1e-12))
    throw ParamError("NE evolution runs up to t = 1/eta");
  const int n = particle_number(psi0);
  const SectorPropagator prop(space, total(space, h), n, opt.dense_limit);
  Vec psi = sector_restrict(space, psi0, n);

  // Blanes-Moan coefficients
  const double s3 = std::sqrt(3.0);
  const double c1 = 0.5 - s3 / 6, c2 = 0.5 + s3 / 6;
  const double a1 = (3 - 2 * s3) / 12, a2 = (3 + 2 * s3) / 12;
  auto step = [&](const Vec& v, double t, double dt) {
    const double f1 = eps * f(eta * (t + c1 * dt)), f2 = eps * f(eta * (t + c2 * dt));
    Vec w = prop.apply(v, dt, a1 * f1 + a2 * f2);
    return prop.apply(w, dt, a2 * f1 + a1 * f2);
  };

  Evolution ev;
  const double e0 = prop.energy(psi);
  double t = 0, dt = std::min(opt.h0, t_final);
  const double dt_min = 1e-9 * std::max(1.0, t_final);
  while (t < t_final) {
    dt = std::min(dt, t_final - t);
    const Vec big = step(psi, t, dt);
    const Vec fine = step(step(psi, t, dt / 2), t + dt / 2, dt / 2);
    const double err = (big - fine).norm() / 15;
    const double grow = err > 0 ? 0.9 * std::pow(opt.tol / err, 0.2) : 2.0;
    if (err <= opt.tol) {
      psi = fine;
      t = (t_final - t - dt < 1e-14 * t_final) ? t_final : t + dt;
      ++ev.steps;
      ev.max_error = std::max(ev.max_error, err);
      if (opt.observer) opt.observer(t, psi);
      dt *= std::clamp(grow, 0.2, 2.0);
    } else {
      ++ev.rejected;
      dt *= std::clamp(grow, 0.1, 0.9);
      if (dt < dt_min) throw IntegrationError("step size collapsed at t = " + std::to_string(t));
    }
  }
  ev.energy_drift = std::abs(prop.energy(psi) - e0);
  ev.state = sector_embed(space, psi, n);
  return ev;
}

PumpResult charge_pump(const FockSpace& space, const Interaction& h, const Vec& psi0, double eps,
                       int R, const EvolveOptions& opt) {
  PumpResult out;
  if (eps == 0) {
    out.evolution.state = psi0;
    return out;
  }
  const Lattice& lat = space.lattice();
  if (R < 0) R = covering_radius(lat);
  const Region window = region_intersection(half_plane(lat, 2, 0), box(lat, lat.origin(), R));
  FockOperator q = FockOperator::zero(space, window);
  for (const Site& x : window) q += number(space, x);
  const double eta = std::abs(eps);
  out.evolution = adiabatic_evolve(space, h, psi0, eps, eta, SwitchingFunction(Protocol::CP), 1.0 / eta, opt);
  out.delta_q = (expectation(out.evolution.state, q) - expectation(psi0, q)).real();
  return out;
}

double neass_residual(const FockSpace& space, const Vec& psi, const FockOperator& h_eps,
                      const std::vector<FockOperator>& samples) {
  double worst = 0;
  for (const FockOperator& a : samples) {
    if (a.support().empty()) continue;
    const double den = local_norm(space, a, 6, center_of(a.support()));
    if (den == 0) continue;
    worst = std::max(worst, std::abs(expectation(psi, commutator(h_eps, a))) / den);
  }
  return worst;
}

}  // namespace hallcond
