#include "doctest.h"

#include <random>

#include "hallcond/car_fock.hpp"
#include "hallcond/errors.hpp"

using namespace hallcond;

namespace {

double dist(const FockOperator& a, const FockOperator& b) { return operator_norm(a - b); }

// E_M through the orthogonal monomial basis {1, a, a*, 1-2n} per mode.
FockOperator monomial_expectation(const FockSpace& space, const Region& m, const FockOperator& a) {
  const Lattice& lat = space.lattice();
  std::vector<std::array<FockOperator, 4>> factors;
  for (const Site& s : m)
    for (int i = 0; i < lat.n_orb(); ++i) {
      FockOperator c = creation(space, s, i);
      FockOperator n = number_mode(space, s, i);
      factors.push_back({FockOperator::identity(space), c.adjoint(), c,
                         FockOperator::identity(space) - 2.0 * n});
    }
  FockOperator out = FockOperator::zero(space);
  const std::size_t total = std::size_t(1) << (2 * factors.size());
  for (std::size_t code = 0; code < total; ++code) {
    FockOperator mono = FockOperator::identity(space);
    for (std::size_t f = 0; f < factors.size(); ++f) mono = mono * factors[f][(code >> (2 * f)) & 3];
    cplx num = tracial_state(mono.adjoint() * a);
    cplx den = tracial_state(mono.adjoint() * mono);
    out += (num / den) * mono;
  }
  return out;
}

}  // namespace

TEST_CASE("canonical anticommutation relations") {
  FockSpace space(Lattice(2, 2, Boundary::Open, 2));
  const Lattice& lat = space.lattice();
  FockOperator id = FockOperator::identity(space);
  for (const Site& x : lat.all())
    for (int i = 0; i < 2; ++i)
      for (const Site& y : lat.all())
        for (int j = 0; j < 2; ++j) {
          FockOperator ax = annihilation(space, x, i), ay = annihilation(space, y, j);
          FockOperator cy = creation(space, y, j);
          CHECK(operator_norm(anticommutator(ax, ay)) == 0.0);
          FockOperator expect = (x == y && i == j) ? id : FockOperator::zero(space);
          CHECK(dist(anticommutator(ax, cy), expect) == 0.0);
        }
}

TEST_CASE("number operators") {
  FockSpace space(Lattice(2, 2, Boundary::Open, 2));
  Site x{1, 0};
  FockOperator n = number(space, x);
  FockOperator sum = creation(space, x, 0) * annihilation(space, x, 0) +
                     creation(space, x, 1) * annihilation(space, x, 1);
  CHECK(dist(n, sum) == 0.0);
  CHECK(n.gauge_invariant());
  CHECK(n.parity() == Parity::Even);
  CHECK(operator_norm(n) == doctest::Approx(2.0));
  CHECK(creation(space, x, 1).parity() == Parity::Odd);
  CHECK(!creation(space, x, 1).gauge_invariant());
}

TEST_CASE("tracial state") {
  FockSpace space(Lattice(2, 2, Boundary::Open, 2));
  CHECK(tracial_state(FockOperator::identity(space)) == cplx(1));
  CHECK(tracial_state(number(space, {0, 1})).real() == doctest::Approx(1.0));
  std::mt19937_64 rng(3);
  FockOperator a = random_local(space, Region({{0, 0}, {1, 0}}), rng, false, false);
  FockOperator b = random_local(space, Region({{1, 0}, {1, 1}}), rng, false, false);
  CHECK(std::abs(tracial_state(commutator(a, b))) < 1e-14);
}

TEST_CASE("embedding reproduces the global CAR operators") {
  FockSpace space(Lattice(3, 2));
  Region m({{1, 0}, {0, 1}});
  FockSpace local(Lattice(2, 1));
  // local modes ordered as the modes of M
  FockOperator c_local = creation(local, {1, 0}, 0);
  CHECK(dist(embed(space, m, Mat(c_local.matrix())), creation(space, {0, 1}, 0)) == 0.0);
  FockOperator c0 = creation(local, {0, 0}, 0);
  CHECK(dist(embed(space, m, Mat(c0.matrix())), creation(space, {1, 0}, 0)) == 0.0);
}

TEST_CASE("conditional expectation matches the monomial expansion") {
  FockSpace space(Lattice(2, 2));
  std::mt19937_64 rng(11);
  std::vector<Region> regions = {Region{}, Region({{0, 0}}), Region({{1, 0}, {0, 1}}),
                                 Region({{0, 0}, {1, 0}, {1, 1}})};
  for (int trial = 0; trial < 3; ++trial) {
    FockOperator a = random_local(space, space.lattice().all(), rng, trial != 0, false);
    for (const Region& m : regions) {
      FockOperator e = conditional_expectation(space, m, a);
      CHECK(dist(e, monomial_expectation(space, m, a)) < 1e-12);
      CHECK(e.support().subset_of(m));
    }
  }
}

TEST_CASE("conditional expectation examples") {
  FockSpace space(Lattice(3, 2, Boundary::Open, 2));
  const Lattice& lat = space.lattice();
  std::mt19937_64 rng(5);
  Region m({{0, 0}, {1, 0}});
  FockOperator a = random_local(space, m, rng);
  CHECK(dist(conditional_expectation(space, m, a), a) == 0.0);
  FockOperator b = random_local(space, lat.all().size() > 0 ? Region({{0, 0}, {2, 1}}) : m, rng);
  CHECK(dist(conditional_expectation(space, Region{}, b),
             tracial_state(b) * FockOperator::identity(space)) < 1e-14);
  FockOperator e = conditional_expectation(space, m, number(space, {2, 1}));
  CHECK(dist(e, 1.0 * FockOperator::identity(space)) < 1e-14);
  CHECK_THROWS_AS(conditional_expectation(space, lat.all(), b, {8}), SizeError);
}

TEST_CASE("conditional expectation properties") {
  FockSpace space(Lattice(3, 3));
  const Lattice& lat = space.lattice();
  std::mt19937_64 rng(21);
  Region m1({{0, 0}, {1, 0}, {1, 1}, {2, 1}});
  Region m2({{1, 1}, {2, 1}, {2, 2}, {0, 2}});
  Region all = lat.all();
  FockOperator id = FockOperator::identity(space);
  for (int trial = 0; trial < 4; ++trial) {
    FockOperator b = random_local(space, all, rng, true, false);
    FockOperator x = random_local(space, m1, rng, true, false);
    FockOperator y = random_local(space, m1, rng, false, false);
    // unitality
    CHECK(dist(conditional_expectation(space, m1, id), id) == 0.0);
    // module property
    CHECK(dist(conditional_expectation(space, m1, x * b * y),
               x * conditional_expectation(space, m1, b) * y) < 1e-12);
    // composition
    CHECK(dist(conditional_expectation(space, m1, conditional_expectation(space, m2, b)),
               conditional_expectation(space, region_intersection(m1, m2), b)) < 1e-12);
    // gauge preservation
    CHECK(conditional_expectation(space, m2, b).gauge_invariant());
    // contraction
    CHECK(operator_norm(conditional_expectation(space, m1, b)) <= operator_norm(b) + 1e-12);
    // positivity
    FockOperator pos = b.adjoint() * b;
    Mat e = Mat(conditional_expectation(space, m2, pos).matrix());
    Eigen::SelfAdjointEigenSolver<Mat> es(e);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
    // defining property against an A_M element
    CHECK(std::abs(tracial_state(b * x) - tracial_state(conditional_expectation(space, m1, b) * x)) <
          1e-13);
  }
}

TEST_CASE("disjoint supports commute") {
  FockSpace space(Lattice(3, 2));
  std::mt19937_64 rng(8);
  FockOperator a = random_local(space, Region({{0, 0}, {1, 1}}), rng, true, true);
  FockOperator b = random_local(space, Region({{2, 0}, {0, 1}}), rng, false, false);
  CHECK(operator_norm(commutator(a, b)) == 0.0);
  CHECK(operator_norm(commutator(a, creation(space, {2, 1}, 0))) == 0.0);
}

TEST_CASE("local norm") {
  FockSpace space(Lattice(3, 3, Boundary::Open, 1));
  Site x{1, 1};
  for (int nu = 0; nu < 4; ++nu) {
    CHECK(local_norm(space, number(space, x), nu, x) == doctest::Approx(1.0));
    CHECK(local_norm(space, FockOperator::identity(space), nu, x) == doctest::Approx(1.0));
  }
  std::mt19937_64 rng(2);
  FockOperator a = random_local(space, Region({{0, 0}, {1, 1}, {2, 1}}), rng);
  double prev = 0;
  for (int nu = 0; nu < 4; ++nu) {
    double v = local_norm(space, a, nu, {2, 2});
    CHECK(v >= prev);
    prev = v;
  }
}
