#include "doctest.h"

#include <random>

#include "hallcond/errors.hpp"
#include "hallcond/models.hpp"
#include "hallcond/spectral.hpp"

using namespace hallcond;

TEST_CASE("atomic ground state") {
  FockSpace space(Lattice(3, 3, Boundary::Open, 1));
  Interaction h = build_interaction({Atomic{}}, space);
  GroundState gs = ground_state(space, h);
  CHECK(gs.energy == doctest::Approx(-5.0));
  // adding or removing one particle costs min|e|; a particle-hole pair 2 min|e|
  CHECK(gs.gap == doctest::Approx(1.0));
  CHECK(gs.sector_gap == doctest::Approx(2.0));
  CHECK(gs.particles == 5);
  CHECK(gs.eigensystem != nullptr);
}

TEST_CASE("free oracle for cluster energies") {
  Lattice lat(3, 2, Boundary::Open, 1);
  FockSpace space(lat);
  ModelSpec spec{InteractingCluster{1.0, 0.0, 0.3}, 0.4, 12};
  GroundState gs = ground_state(space, build_interaction(spec, space));
  // same hopping with V = 0 as a one-body matrix
  Mat h = Mat::Zero(6, 6);
  for (const OneBodyTerm& t : one_body_terms(spec, lat)) {
    h(lat.index(t.a), lat.index(t.b)) += t.block(0, 0);
    if (!(t.a == t.b)) h(lat.index(t.b), lat.index(t.a)) += std::conj(t.block(0, 0));
  }
  FermiSea sea = fermi_sea(h, 0.0);
  CHECK(std::abs(gs.energy - sea.energies.head(sea.filled).sum()) < 1e-10);
}

TEST_CASE("ground state invariance and variational energy") {
  FockSpace space(Lattice(3, 2, Boundary::Open, 1));
  Interaction h = build_interaction({InteractingCluster{1.0, 1.5, 0.8}, 0.3, 2}, space);
  GroundState gs = ground_state(space, h);
  FockOperator H = total(space, h);
  CHECK(std::abs(expectation(gs.vector, H) - gs.energy) < 1e-10);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    FockOperator a = random_local(space, Region({{0, 0}, {1, 1}}), rng, true, false);
    CHECK(std::abs(expectation(gs.vector, liouvillian(space, h, a))) < 1e-10);
  }
}

TEST_CASE("Lanczos path agrees with dense diagonalization") {
  FockSpace space(Lattice(3, 3, Boundary::Open, 1));
  Interaction h = build_interaction({InteractingCluster{1.0, 1.0, 0.5}, 0.3, 8}, space);
  GroundState dense = ground_state(space, h);
  GroundStateOptions opt;
  opt.dense_limit = 40;
  GroundState lz = ground_state(space, h, opt);
  CHECK(lz.eigensystem == nullptr);
  CHECK(std::abs(lz.energy - dense.energy) < 1e-10);
  CHECK(std::abs(lz.gap - dense.gap) < 1e-8);
  CHECK(std::abs(std::abs(lz.vector.dot(dense.vector)) - 1.0) < 1e-9);
}

TEST_CASE("degenerate ground states are rejected") {
  FockSpace space(Lattice(2, 2, Boundary::Open, 1));
  CHECK_THROWS_AS(ground_state(space, build_interaction({InteractingCluster{0.0, 0.0, 0.0}}, space)),
                  DegenerateGroundState);
}

TEST_CASE("fermi sea") {
  Mat h = Mat::Zero(2, 2);
  h(0, 0) = -1;
  h(1, 1) = 1;
  FermiSea s = fermi_sea(h, 0.0);
  CHECK(std::abs(s.p(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(s.p(1, 1)) < 1e-15);
  CHECK_THROWS_AS(fermi_sea(h, 1.0), GaplessError);

  Lattice lat(12, 12, Boundary::Open, 2);
  FermiSea q = fermi_sea(build_one_body({QiWuZhang{1.0}, 0.2, 1}, lat), 0.0);
  CHECK(std::abs(q.p.trace().real() - q.filled) < 1e-10);
  CHECK((q.p * q.p - q.p).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(hermiticity_defect(q.p) < 1e-12);
}

TEST_CASE("QWZ bulk gap approaches the Bloch gap") {
  Lattice lat(24, 24, Boundary::Open, 2);
  FermiSea q = fermi_sea(build_one_body({QiWuZhang{1.0}}, lat), 0.0);
  double bloch = bloch_gap({QiWuZhang{1.0}}, 2, 1, 64);
  double bulk = bulk_gap(q, lat, 4);
  MESSAGE("bulk gap " << bulk << " bloch gap " << bloch << " edge-inclusive gap " << q.one_body_gap);
  CHECK(std::abs(bulk - bloch) <= 0.2 * bloch);
}

TEST_CASE("Fermi sea agrees with the many-body ground state") {
  Lattice lat(2, 3, Boundary::Open, 2, Site{1, 1});
  FockSpace space(lat);
  ModelSpec spec{QiWuZhang{1.0}, 0.1, 5};
  Mat h = build_one_body(spec, lat);
  FermiSea sea = fermi_sea(h, 0.0);
  GroundState gs = ground_state(space, build_interaction(spec, space));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 5; ++t) {
    Mat k(12, 12);
    for (Eigen::Index i = 0; i < 144; ++i) k(i) = cplx(nd(rng), nd(rng));
    k = (k + k.adjoint()).eval();
    cplx mb = expectation(gs.vector, second_quantize(space, k, lat.all()));
    CHECK(std::abs(mb - (sea.p * k).trace()) < 1e-9);
  }
}

TEST_CASE("gap inequality") {
  {
    FockSpace space(Lattice(2, 2, Boundary::Open, 1));
    Interaction h = build_interaction({Atomic{}}, space);
    GroundState gs = ground_state(space, h);
    auto rep = verify_gap_inequality(space, gs, h, {FockOperator::identity(space)});
    CHECK(std::abs(rep.lhs[0]) < 1e-14);
    CHECK(std::abs(rep.rhs[0]) < 1e-14);
    std::vector<FockOperator> ops;
    for (const Site& x : space.lattice().all()) {
      ops.push_back(creation(space, x, 0));
      ops.push_back(annihilation(space, x, 0));
    }
    rep = verify_gap_inequality(space, gs, h, ops);
    CHECK(rep.pass);
    // single-site closed form: lhs = |e| when the move is allowed, rhs = gap
    for (std::size_t i = 0; i < ops.size(); ++i)
      if (rep.rhs[i] > 0) CHECK(rep.lhs[i] == doctest::Approx(1.0));
  }
  FockSpace space(Lattice(3, 2, Boundary::Open, 1));
  Interaction h = build_interaction({InteractingCluster{1.0, 1.0, 0.4}, 0.3, 6}, space);
  GroundState gs = ground_state(space, h);
  std::mt19937_64 rng(99);
  std::vector<FockOperator> samples;
  std::uniform_int_distribution<int> pick(0, 5);
  for (int t = 0; t < 100; ++t) {
    Site a = space.lattice().site(pick(rng)), b = space.lattice().site(pick(rng));
    samples.push_back(random_local(space, Region({a, b}), rng, t % 2 == 0, false));
  }
  auto rep = verify_gap_inequality(space, gs, h, samples);
  CHECK(rep.pass);
}
