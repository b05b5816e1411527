#include "hallcond/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hallcond/errors.hpp"
#include "hallcond/models.hpp"

namespace hallcond {

namespace {

const cplx I{0, 1};

double dist(const FockOperator& a, const FockOperator& b) { return operator_norm(a - b); }

Check check(std::string group, std::string name, double value, double tol) {
  return {std::move(group), std::move(name), value, tol, value <= tol};
}

cplx comm_expect(const Vec& psi, const FockOperator& a, const FockOperator& b) {
  return expectation(psi, commutator(a, b));
}

}  // namespace

bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<Check> verify_conditional_expectation(std::uint64_t seed, int trials) {
  FockSpace space(Lattice(3, 3));
  std::mt19937_64 rng(seed);
  const Region m1({{0, 0}, {1, 0}, {1, 1}, {2, 1}});
  const Region m2({{1, 1}, {2, 1}, {2, 2}, {0, 2}});
  const FockOperator id = FockOperator::identity(space);
  double unital = 0, positive = 0, module = 0, compose = 0, gauge = 0, contract = 0, defining = 0;
  for (int t = 0; t < trials; ++t) {
    FockOperator b = random_local(space, space.lattice().all(), rng, true, false);
    FockOperator x = random_local(space, m1, rng, true, false);
    FockOperator y = random_local(space, m1, rng, false, false);
    FockOperator odd = random_local(space, space.lattice().all(), rng, false, false);
    unital = std::max(unital, dist(conditional_expectation(space, m1, id), id));
    module = std::max(module, dist(conditional_expectation(space, m1, x * b * y),
                                   x * conditional_expectation(space, m1, b) * y));
    compose = std::max(compose,
                       dist(conditional_expectation(space, m1, conditional_expectation(space, m2, b)),
                            conditional_expectation(space, region_intersection(m1, m2), b)));
    gauge = std::max(gauge, conditional_expectation(space, m2, b).gauge_invariant() ? 0.0 : 1.0);
    contract = std::max(contract, operator_norm(conditional_expectation(space, m1, odd)) - operator_norm(odd));
    Mat e = Mat(conditional_expectation(space, m2, b.adjoint() * b).matrix());
    Eigen::SelfAdjointEigenSolver<Mat> es(e);
    positive = std::max(positive, -es.eigenvalues().minCoeff());
    defining = std::max(defining, std::abs(tracial_state(b * x) -
                                           tracial_state(conditional_expectation(space, m1, b) * x)));
  }
  const std::string g = "conditional expectation";
  return {check(g, "unitality", unital, 1e-12),        check(g, "positivity", positive, 1e-12),
          check(g, "module property", module, 1e-12),  check(g, "composition", compose, 1e-12),
          check(g, "gauge preservation", gauge, 0.0),  check(g, "contraction", std::max(contract, 0.0), 1e-12),
          check(g, "tracial projection", defining, 1e-12)};
}

std::vector<Check> verify_commutator_bound(std::uint64_t seed, int instances) {
  FockSpace space(Lattice(3, 2));
  const Lattice& lat = space.lattice();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, lat.num_sites() - 1);
  std::bernoulli_distribution coin;
  double worst[3][3] = {};
  for (int t = 0; t < instances; ++t) {
    const Site x = lat.site(pick(rng)), y = lat.site(pick(rng));
    auto near = [&](const Site& s) {
      Site o = lat.site(pick(rng));
      return coin(rng) || o == s ? Region({s}) : Region({s, o});
    };
    FockOperator a = random_local(space, near(y), rng, coin(rng), false);
    FockOperator b = random_local(space, near(x), rng, coin(rng), false);
    const FockOperator c = commutator(a, b);
    const double d = lat.distance(x, y);
    for (int nu = 0; nu < 3; ++nu) {
      const double lhs = local_norm(space, c, nu, x);
      for (int m = 0; m < 3; ++m) {
        const double rhs = std::pow(4.0, nu + m + 3) * local_norm(space, a, nu + m, y) *
                           local_norm(space, b, nu + m, x) / std::pow(1 + d, m);
        worst[nu][m] = std::max(worst[nu][m], lhs / rhs);
      }
    }
  }
  std::vector<Check> out;
  for (int nu = 0; nu < 3; ++nu)
    for (int m = 0; m < 3; ++m)
      out.push_back(check("commutator bound",
                          "nu=" + std::to_string(nu) + " m=" + std::to_string(m), worst[nu][m], 1.0));
  return out;
}

std::vector<Check> verify_resummation(std::uint64_t seed) {
  FockSpace space(Lattice(3, 3, Boundary::Open, 1));
  const Lattice& lat = space.lattice();
  Interaction h = build_interaction({InteractingCluster{1.0, 0.5, 0.1}, 0.3, 9}, space);
  std::mt19937_64 rng(seed);
  double local = 0, current = 0;
  for (int t = 0; t < 3; ++t) {
    FockOperator a = random_local(space, Region({{1, 1}, {2, 1}, {1, 2}}), rng);
    FockOperator rhs = FockOperator::zero(space);
    for (const Site& x : lat.all()) rhs += commutator(local_term(space, h, x), a);
    local = std::max(local, dist(liouvillian(space, h, a), rhs));
    for (int j : {1, 2}) {
      Interaction cur = I * commutator_interaction(h, builtin_switch(space, j));
      FockOperator r2 = FockOperator::zero(space);
      for (const Site& x : half_plane(lat, j, 0))
        r2 += commutator(I * liouvillian(space, h, number(space, x)), a);
      current = std::max(current, dist(liouvillian(space, cur, a), r2));
    }
  }
  return {check("liouvillian resummation", "local terms", local, 1e-12),
          check("liouvillian resummation", "half-plane current", current, 1e-10)};
}

std::vector<Check> verify_disjoint_supports(std::uint64_t seed) {
  FockSpace space(Lattice(3, 2));
  std::mt19937_64 rng(seed);
  double worst = 0;
  for (int t = 0; t < 10; ++t) {
    // even A, gauge invariant or pairing, against anything outside its support
    FockOperator a = random_local(space, Region({{0, 0}, {1, 1}}), rng, true, true);
    if (t % 2 == 1) {
      FockOperator p = creation(space, {0, 0}, 0) * creation(space, {1, 1}, 0);
      a += p + p.adjoint();
    }
    FockOperator b = random_local(space, Region({{2, 0}, {0, 1}}), rng, false, false);
    worst = std::max(worst, operator_norm(commutator(a, b)));
    worst = std::max(worst, operator_norm(commutator(a, creation(space, {2, 1}, 0))));
  }
  return {check("disjoint supports", "commutation", worst, 0.0)};
}

std::vector<Check> verify_offdiagonal(const FockSpace& space, const Interaction& h,
                                      const GroundState& gs, const WeightFunction& w,
                                      std::uint64_t seed, int trials) {
  const Lattice& lat = space.lattice();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, lat.num_sites() - 1);
  auto random_region = [&] { return Region({lat.site(pick(rng)), lat.site(pick(rng))}); };
  std::vector<Check> out;

  std::vector<FockOperator> samples;
  for (int t = 0; t < trials; ++t) samples.push_back(random_local(space, random_region(), rng, t % 2 == 0, false));
  GapInequalityReport gi = verify_gap_inequality(space, gs, h, samples);
  out.push_back(check("gap inequality", "slack", gi.pass ? 0.0 : -gi.min_slack, 0.0));

  OdContext ctx = make_od_context(space, h, gs, w);
  for (Filter f : {Filter::Spectral, Filter::Quadrature}) {
    ctx.filter = f;
    const double tol = f == Filter::Spectral ? 1e-12 : 1e-8;
    const std::string tag = f == Filter::Spectral ? " (spectral)" : " (quadrature)";
    double prop = 0, diag = 0, mean = 0, liou = 0;
    for (int t = 0; t < trials; ++t) {
      FockOperator a = random_local(space, random_region(), rng, t % 2 == 0, false);
      FockOperator b = random_local(space, random_region(), rng, t % 3 == 0, false);
      FockOperator od = od_observable(ctx, a);
      FockOperator di = a - od;
      prop = std::max(prop, std::abs(comm_expect(ctx.psi, a, b) - comm_expect(ctx.psi, od, b)));
      diag = std::max(diag, std::abs(comm_expect(ctx.psi, di, b)));
      mean = std::max(mean, std::abs(expectation(ctx.psi, a) - expectation(ctx.psi, di)));
    }
    Interaction psi = builtin_switch(space, 1) + cplx(0.5) * builtin_switch(space, 2);
    Interaction psi_od = od_interaction(ctx, psi);
    for (int t = 0; t < trials; ++t) {
      FockOperator a = random_local(space, random_region(), rng, t % 2 == 0, false);
      liou = std::max(liou, std::abs(expectation(ctx.psi, liouvillian(space, psi, a)) -
                                     expectation(ctx.psi, liouvillian(space, psi_od, a))));
    }
    double closure = 0;
    for (const Site& x : lat.all()) {
      FockOperator local = od_local(ctx, psi, x);
      FockOperator sum = FockOperator::zero(space);
      for (const auto& [key, op] : psi_od)
        if (key.second == x) sum += op;
      closure = std::max(closure, operator_norm(sum - local));
    }
    const std::string g = "off-diagonal maps";
    out.push_back(check(g, "off-diagonal property" + tag, prop, tol));
    out.push_back(check(g, "diagonal remainder" + tag, diag, tol));
    out.push_back(check(g, "diagonal mean" + tag, mean, tol));
    out.push_back(check(g, "liouvillian of the interaction" + tag, liou, tol));
    out.push_back(check(g, "shell closure" + tag, closure, tol));
  }

  double qs = 0;
  for (const Site& x : lat.all()) {
    ctx.filter = Filter::Spectral;
    FockOperator s = od_local(ctx, builtin_switch(space, 2), x);
    ctx.filter = Filter::Quadrature;
    FockOperator q = od_local(ctx, builtin_switch(space, 2), x);
    qs = std::max(qs, operator_norm(s - q));
  }
  out.push_back(check("off-diagonal maps", "quadrature against spectral", qs, 1e-6));
  return out;
}

std::vector<Check> verify_weight_checks(const WeightFunction& w) {
  const std::string g = "weight function";
  std::vector<Check> out;
  WeightReport r = verify_weight(w);
  for (const auto& c : r.checks) {
    const double tol = c.name == "fourier" ? 1e-6 : c.name == "decay" ? 1.0 : 0.0;
    out.push_back({g, c.name, c.value, tol, c.pass});
  }
  double filter = 0;
  for (int i = 0; i < 200; ++i) {
    const double d = w.g() * std::pow(40.0, i / 199.0);
    filter = std::max(filter, std::abs(w.phi_quadrature(d) - 1));
    filter = std::max(filter, std::abs(w.phi_quadrature(-d) - 1));
  }
  out.push_back(check(g, "filter identity", filter, 1e-6));
  out.push_back(check(g, "phi(0) = 0", std::max(std::abs(w.phi_spectral(0.0)), std::abs(w.phi_quadrature(0.0))), 0.0));
  return out;
}

std::vector<Check> verify_local_unitaries(const FockSpace& space, const Interaction& h,
                                          const WeightFunction& w, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::string g = "local unitary invariance";
  InvarianceReport id = conductance_invariance_test(space, h, w, Circuit{});
  InvarianceReport ga = conductance_invariance_test(space, h, w, gauge_circuit(space.lattice(), rng));
  InvarianceReport c2 = conductance_invariance_test(space, h, w, random_circuit(space.lattice(), 2, rng, true));
  return {check(g, "identity", id.delta + id.window_delta, 0.0),
          check(g, "gauge circuit", std::max(ga.delta, ga.window_delta), 1e-10),
          check(g, "depth-2 circuit", c2.delta, 1e-6)};
}

}  // namespace hallcond
