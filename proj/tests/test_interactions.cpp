#include "doctest.h"

#include <random>

#include "hallcond/errors.hpp"
#include "hallcond/interactions.hpp"
#include "hallcond/models.hpp"

using namespace hallcond;

namespace {
double dist(const FockOperator& a, const FockOperator& b) { return operator_norm(a - b); }
const cplx I{0, 1};
}  // namespace

TEST_CASE("builtin interactions") {
  FockSpace space(Lattice(4, 4, Boundary::Open, 1));
  Interaction l1 = builtin_switch(space, 1);
  CHECK(l1.size() == 8);
  for (const auto& [key, op] : l1) CHECK(space.lattice().position(key.second)[0] >= 0);
  Interaction n = builtin_number(space);
  CHECK(n.size() == 16);
  for (const auto& [key, op] : n) CHECK(operator_norm(op) == doctest::Approx(1.0));
  Interaction x1 = builtin_position(space, 1);
  for (int y = 0; y < 4; ++y)
    CHECK(operator_norm(local_term(space, x1, space.lattice().at(0, y - 2))) == 0.0);
  FockSpace torus(Lattice(3, 3, Boundary::Torus, 1));
  CHECK_THROWS_AS(builtin_switch(torus, 1), GeometryError);
  CHECK_THROWS_AS(builtin_position(torus, 2), GeometryError);
}

TEST_CASE("interaction norms") {
  FockSpace space(Lattice(3, 3, Boundary::Open, 1));
  for (double nu : {0.0, 1.0, 3.0}) {
    CHECK(interaction_norm(space, builtin_number(space), nu) == doctest::Approx(1.0));
    CHECK(interaction_norm(space, builtin_switch(space, 1), nu) == doctest::Approx(1.0));
  }
  ModelSpec spec{InteractingCluster{1.0, 0.0, 0.0}};
  Interaction h = build_interaction(spec, space);
  // four unit-norm bonds meet at the central site
  CHECK(interaction_norm(space, h, 0) == doctest::Approx(4.0));
  CHECK(interaction_norm(space, h, 1) == doctest::Approx(8.0));
  CHECK(interaction_norm_exp(space, h, 1.0) == doctest::Approx(4.0 * std::exp(1.0)));
}

TEST_CASE("local terms follow the center rule") {
  FockSpace space(Lattice(3, 3, Boundary::Open, 1));
  Interaction phi;
  FockOperator hop = creation(space, {0, 0}, 0) * annihilation(space, {1, 0}, 0);
  hop += hop.adjoint();
  phi.add(Region({{0, 0}, {1, 0}}), hop);
  CHECK(dist(local_term(space, phi, {1, 0}), hop) == 0.0);
  CHECK(operator_norm(local_term(space, phi, {0, 0})) == 0.0);
  CHECK(dist(local_term(space, builtin_number(space), {2, 1}), number(space, {2, 1})) == 0.0);

  ModelSpec spec{InteractingCluster{1.0, 0.7, 0.3}, 0.2, 4};
  Interaction h = build_interaction(spec, space);
  FockOperator sum = FockOperator::zero(space);
  for (const Site& x : space.lattice().all()) sum += local_term(space, h, x);
  CHECK(dist(sum, total(space, h)) < 1e-13);
}

TEST_CASE("liouvillian examples") {
  FockSpace space(Lattice(3, 2, Boundary::Open, 1));
  std::mt19937_64 rng(1);
  FockOperator a = random_local(space, Region({{0, 0}, {1, 1}}), rng);
  CHECK(operator_norm(liouvillian(space, builtin_number(space), a)) == 0.0);
  CHECK(operator_norm(liouvillian(space, builtin_switch(space, 1), number(space, {2, 1}))) == 0.0);
  Site x{0, 1}, y{2, 0};
  FockOperator xy = creation(space, x, 0) * annihilation(space, y, 0);
  FockOperator yx = creation(space, y, 0) * annihilation(space, x, 0);
  const Lattice& lat = space.lattice();
  double dx = lat.position(x)[0] - lat.position(y)[0];
  CHECK(dist(liouvillian(space, builtin_position(space, 1), xy + yx), dx * (xy - yx)) < 1e-14);
}

TEST_CASE("resummation identities") {
  FockSpace space(Lattice(3, 3, Boundary::Open, 1));
  const Lattice& lat = space.lattice();
  ModelSpec spec{InteractingCluster{1.0, 0.5, 0.1}, 0.3, 9};
  Interaction h = build_interaction(spec, space);
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 3; ++trial) {
    FockOperator a = random_local(space, Region({{1, 1}, {2, 1}, {1, 2}}), rng);
    FockOperator lhs = liouvillian(space, h, a);
    FockOperator rhs = FockOperator::zero(space);
    for (const Site& x : lat.all()) rhs += commutator(local_term(space, h, x), a);
    CHECK(dist(lhs, rhs) < 1e-12);
    for (int j : {1, 2}) {
      Interaction cur = I * commutator_interaction(h, builtin_switch(space, j));
      FockOperator l2 = liouvillian(space, cur, a);
      FockOperator r2 = FockOperator::zero(space);
      for (const Site& x : half_plane(lat, j, 0))
        r2 += commutator(I * liouvillian(space, h, number(space, x)), a);
      CHECK(dist(l2, r2) < 1e-10);
    }
  }
}

TEST_CASE("commutator interactions") {
  FockSpace space(Lattice(3, 3, Boundary::Open, 1));
  ModelSpec spec{InteractingCluster{1.0, 0.5, 0.1}, 0.3, 9};
  Interaction h = build_interaction(spec, space);
  for (const auto& [key, op] : commutator_interaction(builtin_number(space), h))
    CHECK(operator_norm(op) == 0.0);
  for (const auto& [key, op] :
       commutator_interaction(builtin_switch(space, 1), builtin_switch(space, 2)))
    CHECK(operator_norm(op) == 0.0);
  Interaction cur = I * commutator_interaction(h, builtin_switch(space, 2));
  CHECK(cur.hermiticity_defect() < 1e-14);
  CHECK(cur.gauge_invariant());
  FockOperator direct = I * liouvillian(space, h, total(space, builtin_switch(space, 2)));
  CHECK(dist(total(space, cur), direct) < 1e-12);
}
