#include "doctest.h"

#include <cmath>
#include <random>

#include "hallcond/errors.hpp"
#include "hallcond/neass.hpp"

using namespace hallcond;

namespace {

struct Cluster {
  FockSpace space;
  Interaction h;
  GroundState gs;
};

Cluster cluster(int L1, int L2, const InteractingCluster& m, double w, std::uint64_t seed) {
  FockSpace space(Lattice(L1, L2, Boundary::Open, 1));
  Interaction h = build_interaction({m, w, seed}, space);
  GroundState gs = ground_state(space, h);
  return {std::move(space), std::move(h), std::move(gs)};
}

// the interacting 6-site cluster of the dynamics checks
const Cluster& six() {
  static const Cluster c = cluster(3, 2, {1.0, 1.0, 0.6}, 0.3, 1);
  return c;
}

double fidelity(const Vec& a, const Vec& b) { return std::norm(a.dot(b)); }

std::vector<FockOperator> samples(const FockSpace& space, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Lattice& lat = space.lattice();
  std::vector<FockOperator> out;
  for (int i = 0; i < n; ++i) {
    Site a = lat.site(int(rng() % lat.num_sites()));
    Site b = lat.site(int(rng() % lat.num_sites()));
    Region m = a == b ? Region({a}) : Region({a, b});
    out.push_back(random_local(space, m, rng));
  }
  return out;
}

}  // namespace

TEST_CASE("switching functions") {
  SwitchingFunction ne(Protocol::NE), cp(Protocol::CP);
  CHECK(ne(0) == 0);
  CHECK(ne(1) == 1);
  CHECK(ne(-1) == 0);
  CHECK(ne(2) == 1);
  CHECK(cp(0) == 0);
  CHECK(cp(1) == 0);
  double s = 0, prev = 0;
  const int n = 4000;
  for (int i = 0; i <= n; ++i) {
    const double t = double(i) / n;
    s += (i == 0 || i == n ? 0.5 : 1.0) * cp(t) / n;
    CHECK(ne(t) >= prev);
    prev = ne(t);
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("free response of the atomic insulator") {
  Lattice lat(20, 20, Boundary::Open, 2);
  Mat h = build_one_body({Atomic{}, 0.0, 0}, lat);
  FermiSea zero = fermi_sea(h, 0.0);
  CHECK(delta_current(perturbed_state(h, lat, 0.0), zero, lat, h).value == 0.0);
  FermiSea e = perturbed_state(h, lat, 0.05);
  CHECK((e.p - zero.p).norm() < 1e-12);
  CHECK(std::abs(delta_current(e, zero, lat, h).value) < 1e-12);
  ResponseScan scan = linear_response_scan(h, lat, {0.0, 0.01, 0.02});
  CHECK(scan.delta_j[0] == 0.0);
  CHECK(std::abs(scan.slope) < 1e-10);
  CHECK_THROWS_AS(perturbed_state(h, lat, 1.0), GaplessError);
}

TEST_CASE("free QWZ response matches the switch conductance") {
  Lattice lat(20, 20, Boundary::Open, 2);
  ModelSpec spec{QiWuZhang{1.0}, 0.0, 0};
  Mat h = build_one_body(spec, lat);
  FermiSea zero = fermi_sea(h, 0.0);
  const double sigma = hall_conductance_free(zero, lat).sigma;
  const double gap = bulk_gap(zero, lat, 8);
  FermiSea e = perturbed_state(h, lat, 0.05 * gap);
  CHECK(bulk_gap(e, lat, 8) >= 0.9 * gap);

  ResponseScan scan = linear_response_scan(h, lat, {-0.02, 0.0, 0.01, 0.02, 0.04});
  CHECK(scan.delta_j[1] == 0.0);
  for (std::size_t i = 0; i < scan.epsilons.size(); ++i) {
    if (scan.epsilons[i] == 0) continue;
    MESSAGE("eps " << scan.epsilons[i] << " dJ/eps - sigma " << scan.delta_j[i] / scan.epsilons[i] - sigma
                   << " residual " << scan.residuals[i]);
    CHECK(std::abs(scan.delta_j[i] / scan.epsilons[i] - sigma) < 5e-3);
  }
  // antisymmetry in eps
  CHECK(std::abs(scan.delta_j[0] + scan.delta_j[3]) < 1e-10);
  CHECK(std::abs(scan.slope - sigma) < 5e-3);
}

TEST_CASE("response fit") {
  ResponseScan s;
  s.epsilons = {0.01, 0.02, 0.04, 0.08};
  for (double e : s.epsilons) s.delta_j.push_back(0.5 * e + 3 * e * e * e * e);
  fit_response(s, 1e-14);
  CHECK(s.exponent_points == 3);
  CHECK(s.residual_exponent > 3.9);
  CHECK(s.residual_exponent < 4.2);
  ResponseScan flat;
  flat.epsilons = {0.01, 0.02};
  flat.delta_j = {0.005, 0.01};
  fit_response(flat, 1e-12);
  CHECK(flat.slope == doctest::Approx(0.5));
  CHECK(flat.exponent_points == 0);
}

TEST_CASE("many-body NEASS residuals") {
  const Cluster& c = six();
  const double eps = 0.05;
  GroundState ge = perturbed_state(c.space, c.h, eps);
  const FockOperator he = total(c.space, perturbed_hamiltonian(c.space, c.h, eps));
  auto a = samples(c.space, 20, 3);
  const double exact = neass_residual(c.space, ge.vector, he, a);
  MESSAGE("exact perturbed ground state residual " << exact);
  CHECK(exact < 1e-9);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  Vec r(c.space.dim());
  for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = cplx(nd(rng), nd(rng));
  r.normalize();
  const double random = neass_residual(c.space, r, he, a);
  MESSAGE("random state residual " << random);
  CHECK(random > 1e-2);

  CHECK(perturbed_state(c.space, c.h, 0.0).energy == doctest::Approx(c.gs.energy).epsilon(1e-12));
  CHECK(fidelity(perturbed_state(c.space, c.h, 0.0).vector, c.gs.vector) > 1 - 1e-12);
}

TEST_CASE("adiabatic evolution") {
  const Cluster& c = six();
  SwitchingFunction ne(Protocol::NE);

  Evolution still = adiabatic_evolve(c.space, c.h, c.gs.vector, 0.0, 0.1, ne, 10.0);
  CHECK(fidelity(still.state, c.gs.vector) > 1 - 1e-10);
  CHECK(still.energy_drift < 1e-9);

  const double eps = 0.05;
  GroundState ge = perturbed_state(c.space, c.h, eps);
  const FockOperator he = total(c.space, perturbed_hamiltonian(c.space, c.h, eps));
  auto a = samples(c.space, 20, 3);
  double infid[2], res[2];
  int i = 0;
  for (double eta : {0.1, 0.05}) {
    Evolution ev = adiabatic_evolve(c.space, c.h, c.gs.vector, eps, eta, ne, 1 / eta);
    infid[i] = 1 - fidelity(ev.state, ge.vector);
    res[i] = neass_residual(c.space, ev.state, he, a);
    MESSAGE("eta " << eta << " infidelity " << infid[i] << " residual " << res[i] << " steps "
                   << ev.steps << " rejected " << ev.rejected);
    CHECK(ev.max_error <= 1e-10);
    ++i;
  }
  CHECK(infid[1] <= 10 * 0.05 * 0.05);
  CHECK(infid[0] >= 4 * infid[1]);
  CHECK(res[0] >= 4 * res[1]);

  CHECK_THROWS_AS(adiabatic_evolve(c.space, c.h, c.gs.vector, eps, 0.1, ne, 11.0), ParamError);
}

TEST_CASE("charge in the upper half-plane follows the instantaneous current") {
  const Cluster& c = six();
  SwitchingFunction ne(Protocol::NE);
  const double eps = 0.3, eta = 0.2, t = 2.5, dt = 1e-3;
  FockOperator q = total(c.space, builtin_switch(c.space, 2));
  auto charge = [&](double tf) {
    return expectation(adiabatic_evolve(c.space, c.h, c.gs.vector, eps, eta, ne, tf).state, q).real();
  };
  const double rate = (charge(t + dt) - charge(t - dt)) / (2 * dt);
  Vec psi = adiabatic_evolve(c.space, c.h, c.gs.vector, eps, eta, ne, t).state;
  FockOperator ht = total(c.space, perturbed_hamiltonian(c.space, c.h, eps * ne(eta * t)));
  const double current = expectation(psi, cplx(0, 1) * commutator(ht, q)).real();
  MESSAGE("dQ/dt " << rate << " current " << current);
  CHECK(std::abs(rate - current) < 1e-5);
}

TEST_CASE("charge pump against the NE response") {
  Cluster atomic{FockSpace(Lattice(3, 2, Boundary::Open, 1)), Interaction{}, GroundState{}};
  atomic.h = build_interaction({Atomic{}, 0.0, 0}, atomic.space);
  atomic.gs = ground_state(atomic.space, atomic.h);
  CHECK(std::abs(charge_pump(atomic.space, atomic.h, atomic.gs.vector, 0.05).delta_q) < 1e-9);
  CHECK(charge_pump(six().space, six().h, six().gs.vector, 0.0).delta_q == 0.0);

  Cluster q = cluster(4, 2, {1.0, 0.0, 0.0}, 0.3, 2);
  const double eps = 0.02;
  PumpResult pump = charge_pump(q.space, q.h, q.gs.vector, eps);
  ResponseScan ne = linear_response_scan(q.space, q.h, {eps / 2, eps});
  MESSAGE("pump " << pump.delta_q << " NE slope " << ne.slope << " steps " << pump.evolution.steps);
  CHECK(std::abs(pump.delta_q) <= 1e-6);
  CHECK(std::abs(ne.slope) <= 1e-6);
  CHECK(std::abs(pump.delta_q - ne.slope) <= 2e-6);
}
