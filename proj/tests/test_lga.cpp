#include "doctest.h"

#include <cmath>
#include <random>

#include "hallcond/errors.hpp"
#include "hallcond/lga.hpp"

using namespace hallcond;

namespace {

double dist(const FockOperator& a, const FockOperator& b) { return spectral_norm(SpMat(a.matrix() - b.matrix())); }

Interaction random_bonds(const FockSpace& space, std::mt19937_64& rng) {
  const Lattice& lat = space.lattice();
  Interaction phi;
  for (int i = 0; i < lat.num_sites(); ++i) {
    Site a = lat.site(i);
    for (Site b : {Site{a.i1 + 1, a.i2}, Site{a.i1, a.i2 + 1}}) {
      if (!lat.contains(b)) continue;
      Region m({a, b});
      phi.add(m, random_local(space, m, rng));
    }
  }
  return phi;
}

struct ManyBody {
  FockSpace space;
  Interaction h;
  GroundState gs;
};

const ManyBody& hofstadter() {
  static const ManyBody mb = [] {
    FockSpace space(Lattice(3, 3, Boundary::Open, 1));
    Interaction h = build_interaction({Hofstadter{1, 8}, 0.6, 5}, space);
    GroundState gs = ground_state(space, h);
    return ManyBody{std::move(space), std::move(h), std::move(gs)};
  }();
  return mb;
}

}  // namespace

TEST_CASE("trivial and gauge LGAs") {
  FockSpace space(Lattice(3, 2, Boundary::Open, 1));
  CHECK(dist(build_lga(space, {}, 0, 1), FockOperator::identity(space)) == 0.0);

  std::mt19937_64 rng(4);
  Interaction gauge;
  for (const Site& x : space.lattice().all()) gauge.add(Region({x}), cplx(0.7) * number(space, x));
  FockOperator u = build_lga(space, LgaSpec{{gauge}}, 0, 1);
  CHECK(dist(u * u.adjoint(), FockOperator::identity(space)) < 1e-12);
  for (int i = 0; i < 5; ++i) {
    Region m({space.lattice().site(i), space.lattice().site(i + 1)});
    FockOperator a = random_local(space, m, rng);
    CHECK(dist(u.adjoint() * a * u, a) < 1e-12);
  }
  // a sector-mixing generator is not gauge invariant and conjugation moves it
  FockOperator c = creation(space, Site{0, 0}, 0);
  CHECK(dist(u.adjoint() * c * u, c) > 1e-3);
}

TEST_CASE("LGA cocycle and automorphism property") {
  FockSpace space(Lattice(3, 2, Boundary::Open, 1));
  std::mt19937_64 rng(7);
  LgaSpec spec{{random_bonds(space, rng), random_bonds(space, rng), random_bonds(space, rng)}};
  const double budget = spec.norm_budget(space, 2);
  CHECK(budget > 0);
  const FockOperator u01 = build_lga(space, spec, 0, 1);
  const FockOperator u0h = build_lga(space, spec, 0, 0.5), uh1 = build_lga(space, spec, 0.5, 1);
  CHECK(dist(u01, uh1 * u0h) < 1e-9);
  CHECK(dist(u01 * u01.adjoint(), FockOperator::identity(space)) < 1e-10);
  // backwards propagation inverts
  CHECK(dist(build_lga(space, spec, 1, 0) * u01, FockOperator::identity(space)) < 1e-9);

  for (int i = 0; i < 5; ++i) {
    Region m({space.lattice().site(i), space.lattice().site(i + 1)});
    FockOperator a = random_local(space, m, rng, true, false);
    FockOperator b = random_local(space, m, rng, true, false);
    auto al = [&](const FockOperator& x) { return u01.adjoint() * x * u01; };
    CHECK(dist(al(a * b), al(a) * al(b)) < 1e-12);
    CHECK(dist(al(a.adjoint()), al(a).adjoint()) < 1e-12);
    CHECK(std::abs(tracial_state(al(a)) - tracial_state(a)) < 1e-12);
  }
}

TEST_CASE("circuits") {
  FockSpace space(Lattice(3, 3, Boundary::Open, 1));
  const Lattice& lat = space.lattice();
  std::mt19937_64 rng(11);
  Circuit c = random_circuit(lat, 2, rng);
  CHECK(c.depth() == 2);
  CHECK(!c.quadratic());
  CHECK_THROWS_AS(circuit_one_body(lat, c), ParamError);
  const FockOperator u = circuit_unitary(space, c);
  CHECK(dist(u * u.adjoint(), FockOperator::identity(space)) < 1e-12);

  // light cone against the full unitary, support within distance depth
  const Region m({Site{1, 1}});
  FockOperator a = random_local(space, m, rng, true);
  FockOperator b = conjugate(space, c, a);
  CHECK(dist(b, u * a * u.adjoint()) < 1e-12);
  CHECK(b.support().subset_of(expand(lat, m, 2)));
  CHECK(!b.support().subset_of(m));

  // quadratic gates act on creation operators through the one-body unitary
  Circuit q = random_circuit(lat, 3, rng, true);
  CHECK(q.quadratic());
  const FockOperator uq = circuit_unitary(space, q);
  const Mat u1 = circuit_one_body(lat, q);
  CHECK((u1 * u1.adjoint() - Mat::Identity(9, 9)).norm() < 1e-12);
  for (int i = 0; i < lat.num_sites(); ++i) {
    FockOperator lhs = uq * creation(space, lat.site(i), 0) * uq.adjoint();
    FockOperator rhs = FockOperator::zero(space);
    for (int k = 0; k < lat.num_sites(); ++k) rhs += u1(k, i) * creation(space, lat.site(k), 0);
    CHECK(dist(lhs, rhs) < 1e-12);
  }
  Circuit g = gauge_circuit(lat, rng);
  CHECK(g.quadratic());
  const FockOperator ug = circuit_unitary(space, g);
  FockOperator n = number(space, Site{2, 1});
  CHECK(dist(ug * n * ug.adjoint(), n) < 1e-14);
}

TEST_CASE("conductance invariance under local unitaries") {
  const ManyBody& mb = hofstadter();
  const WeightFunction w = build_weight(mb.gs.gap);

  InvarianceReport id = conductance_invariance_test(mb.space, mb.h, w, Circuit{});
  CHECK(id.delta == 0.0);
  CHECK(id.window_delta == 0.0);

  std::mt19937_64 rng(21);
  InvarianceReport g = conductance_invariance_test(mb.space, mb.h, w, gauge_circuit(mb.space.lattice(), rng));
  MESSAGE("gauge: delta " << g.delta << " windows " << g.window_delta);
  CHECK(g.delta <= 1e-10);
  CHECK(g.window_delta <= 1e-10);
  CHECK(std::abs(g.gap1 - g.gap0) < 1e-10);

  InvarianceReport r = conductance_invariance_test(mb.space, mb.h, w, random_circuit(mb.space.lattice(), 2, rng, true));
  MESSAGE("depth 2: sigma " << r.sigma0 << " -> " << r.sigma1 << " windows " << r.window_delta);
  CHECK(r.delta <= 1e-6);
  CHECK(std::abs(r.gap1 - r.gap0) < 1e-9);
  CHECK(r.windows0.back().value == doctest::Approx(r.sigma0).epsilon(1e-9));
}

TEST_CASE("conductance invariance under a continuous LGA") {
  FockSpace space(Lattice(3, 2, Boundary::Open, 1));
  Interaction h = build_interaction({InteractingCluster{1.0, 1.0, 0.6}, 0.3, 1}, space);
  GroundState gs = ground_state(space, h);
  std::mt19937_64 rng(3);
  LgaSpec spec{{0.3 * random_bonds(space, rng), 0.3 * random_bonds(space, rng)}};
  InvarianceReport r = conductance_invariance_test(space, h, build_weight(gs.gap), spec);
  MESSAGE("LGA: sigma " << r.sigma0 << " -> " << r.sigma1 << " windows " << r.window_delta);
  CHECK(r.delta <= 1e-6);
  CHECK(std::abs(r.gap1 - r.gap0) < 1e-9);
}

TEST_CASE("parent Hamiltonians with one ground state") {
  const ManyBody& mb = hofstadter();
  ParentReport r = parent_independence_test(mb.space, mb.h, build_weight(mb.gs.gap));
  MESSAGE("sigma " << r.sigma << " squared " << r.sigma_squared << " scaled windows " << r.delta_scaled
                   << " gaps " << r.gap << " " << r.gap_squared);
  CHECK(r.delta_global <= 1e-8);
  CHECK(r.delta_scaled <= 1e-8);
  CHECK(r.gap_squared >= r.gap);
}

TEST_CASE("free conductance under quadratic circuits") {
  Lattice lat(32, 32, Boundary::Open, 2);
  Mat h = build_one_body({QiWuZhang{1.0}, 0.0, 0}, lat);
  std::mt19937_64 rng(8);
  InvarianceReport r = free_invariance_test(h, lat, random_circuit(lat, 2, rng, true, 0.5));
  MESSAGE("free depth 2: sigma " << r.sigma0 << " -> " << r.sigma1 << " gaps " << r.gap0 << " " << r.gap1);
  CHECK(r.delta <= 1e-6);
  CHECK(std::abs(r.gap1 - r.gap0) < 1e-9);
  InvarianceReport g = free_invariance_test(h, lat, gauge_circuit(lat, rng));
  CHECK(g.delta <= 1e-10);
  CHECK(g.window_delta <= 1e-10);
}
