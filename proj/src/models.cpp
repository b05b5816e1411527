#include "hallcond/models.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "hallcond/errors.hpp"

namespace hallcond {

namespace {

constexpr cplx I{0.0, 1.0};

struct Hop {
  int d1, d2;
  Mat block;
};

// translation-invariant part: on-site block and forward hops h_{r, r+e}
struct HoppingTable {
  Mat onsite;
  std::vector<Hop> hops;
};

Mat pauli(int k) {
  Mat s(2, 2);
  switch (k) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -I, I, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

HoppingTable table(const ModelSpec& spec, int n_orb) {
  HoppingTable t;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Atomic>) {
          t.onsite = Mat::Zero(n_orb, n_orb);
          for (int i = 0; i < n_orb; ++i) t.onsite(i, i) = (i % 2 == 0) ? -1.0 : 1.0;
        } else if constexpr (std::is_same_v<T, QiWuZhang>) {
          t.onsite = m.u * pauli(3);
          t.hops.push_back({1, 0, 0.5 * (pauli(3) - I * pauli(1))});
          t.hops.push_back({0, 1, 0.5 * (pauli(3) - I * pauli(2))});
        } else if constexpr (std::is_same_v<T, Haldane>) {
          t.onsite = Mat::Zero(2, 2);
          t.onsite(0, 0) = m.m;
          t.onsite(1, 1) = -m.m;
          t.onsite(0, 1) = t.onsite(1, 0) = m.t1;
          const cplx p = m.t2 * std::exp(I * m.phi);
          Mat e1 = Mat::Zero(2, 2), e2 = Mat::Zero(2, 2), diag = Mat::Zero(2, 2);
          e1(1, 0) = m.t1;  // B(r) - A(r + e1)
          e1(0, 0) = p;
          e1(1, 1) = std::conj(p);
          e2(1, 0) = m.t1;
          e2(0, 0) = std::conj(p);
          e2(1, 1) = p;
          diag(0, 0) = p;
          diag(1, 1) = std::conj(p);
          t.hops.push_back({1, 0, e1});
          t.hops.push_back({0, 1, e2});
          t.hops.push_back({-1, 1, diag});
        } else {
          throw ModelError(model_name(spec) + " has no translation-invariant hopping table");
        }
      },
      spec.kind);
  return t;
}

void check_orbitals(const ModelSpec& spec, const Lattice& lat) {
  int need = required_orbitals(spec);
  if (need != 0 && need != lat.n_orb())
    throw ModelError(model_name(spec) + " requires n_orb = " + std::to_string(need) +
                     ", lattice has " + std::to_string(lat.n_orb()));
}

// wrap or drop a displaced site
bool shifted(const Lattice& lat, const Site& s, int d1, int d2, Site& out) {
  out = {s.i1 + d1, s.i2 + d2};
  if (lat.boundary() == Boundary::Torus) {
    out.i1 = ((out.i1 % lat.L1()) + lat.L1()) % lat.L1();
    out.i2 = ((out.i2 % lat.L2()) + lat.L2()) % lat.L2();
    return true;
  }
  return lat.contains(out);
}

std::vector<double> disorder_values(const ModelSpec& spec, int modes) {
  std::vector<double> v(modes, 0.0);
  if (spec.disorder <= 0) return v;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> u(-spec.disorder, spec.disorder);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

std::string model_name(const ModelSpec& spec) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Atomic>) return "atomic";
        if constexpr (std::is_same_v<T, QiWuZhang>) return "qwz";
        if constexpr (std::is_same_v<T, Haldane>) return "haldane";
        if constexpr (std::is_same_v<T, Hofstadter>) return "hofstadter";
        return "cluster";
      },
      spec.kind);
}

bool is_quadratic(const ModelSpec& spec) {
  if (auto* c = std::get_if<InteractingCluster>(&spec.kind)) return c->V == 0.0;
  return true;
}

bool is_translation_invariant(const ModelSpec& spec) {
  return spec.disorder == 0.0 && (std::holds_alternative<Atomic>(spec.kind) ||
                                  std::holds_alternative<QiWuZhang>(spec.kind) ||
                                  std::holds_alternative<Haldane>(spec.kind));
}

int required_orbitals(const ModelSpec& spec) {
  if (std::holds_alternative<QiWuZhang>(spec.kind) || std::holds_alternative<Haldane>(spec.kind))
    return 2;
  if (std::holds_alternative<Atomic>(spec.kind)) return 0;
  return 1;
}

std::vector<OneBodyTerm> one_body_terms(const ModelSpec& spec, const Lattice& lat) {
  check_orbitals(spec, lat);
  const int n = lat.n_orb();
  std::vector<OneBodyTerm> out;
  std::vector<double> dis = disorder_values(spec, lat.num_sites() * n);
  auto add_onsite = [&](const Site& s, Mat block) {
    const int base = lat.index(s) * n;
    for (int i = 0; i < n; ++i) block(i, i) += dis[base + i];
    out.push_back({s, s, std::move(block)});
  };

  if (auto* h = std::get_if<Hofstadter>(&spec.kind)) {
    if (h->q == 0) throw ModelError("flux denominator is zero");
    const double flux = double(h->p) / double(h->q);
    for (const Site& s : lat.all()) add_onsite(s, Mat::Zero(1, 1));
    for (const Site& s : lat.all()) {
      Site t;
      if (shifted(lat, s, 1, 0, t) && !(t == s)) out.push_back({s, t, Mat::Constant(1, 1, -1.0)});
      if (shifted(lat, s, 0, 1, t) && !(t == s)) {
        cplx ph = -std::exp(I * (2 * std::numbers::pi * flux * s.i1));
        out.push_back({s, t, Mat::Constant(1, 1, ph)});
      }
    }
    return out;
  }
  if (auto* c = std::get_if<InteractingCluster>(&spec.kind)) {
    for (const Site& s : lat.all()) add_onsite(s, Mat::Constant(1, 1, -c->mu));
    for (const Site& s : lat.all()) {
      Site t;
      if (shifted(lat, s, 1, 0, t) && !(t == s)) out.push_back({s, t, Mat::Constant(1, 1, -c->t)});
      if (shifted(lat, s, 0, 1, t) && !(t == s)) out.push_back({s, t, Mat::Constant(1, 1, -c->t)});
    }
    return out;
  }

  HoppingTable tab = table(spec, n);
  const bool checker = std::holds_alternative<Atomic>(spec.kind) && n == 1;
  for (const Site& s : lat.all()) {
    Mat b = tab.onsite;
    if (checker && (s.i1 + s.i2) % 2 == 1) b = -b;
    add_onsite(s, b);
  }
  for (const Site& s : lat.all())
    for (const Hop& hop : tab.hops) {
      Site t;
      if (shifted(lat, s, hop.d1, hop.d2, t) && !(t == s)) out.push_back({s, t, hop.block});
    }
  return out;
}

Mat build_one_body(const ModelSpec& spec, const Lattice& lat) {
  if (!is_quadratic(spec)) throw ModelError("interacting clusters with V != 0 have no one-body matrix");
  const int n = lat.n_orb();
  Mat h = Mat::Zero(lat.num_sites() * n, lat.num_sites() * n);
  for (const OneBodyTerm& t : one_body_terms(spec, lat)) {
    const int a = lat.index(t.a) * n, b = lat.index(t.b) * n;
    h.block(a, b, n, n) += t.block;
    if (!(t.a == t.b)) h.block(b, a, n, n) += t.block.adjoint();
  }
  return h;
}

Interaction build_interaction(const ModelSpec& spec, const FockSpace& space) {
  const Lattice& lat = space.lattice();
  const int n = lat.n_orb();
  Interaction out(model_name(spec));
  for (const OneBodyTerm& t : one_body_terms(spec, lat)) {
    Mat k = Mat::Zero(space.modes(), space.modes());
    const int a = lat.index(t.a) * n, b = lat.index(t.b) * n;
    k.block(a, b, n, n) += t.block;
    if (!(t.a == t.b)) k.block(b, a, n, n) += t.block.adjoint();
    Region r({t.a, t.b});
    out.add(r, second_quantize(space, k, r));
  }
  if (auto* c = std::get_if<InteractingCluster>(&spec.kind); c && c->V != 0.0) {
    for (const OneBodyTerm& t : one_body_terms(spec, lat)) {
      if (t.a == t.b) continue;
      Region r({t.a, t.b});
      out.add(r, c->V * (number(space, t.a) * number(space, t.b)));
    }
  }
  return out;
}

Mat bloch_hamiltonian(const ModelSpec& spec, int n_orb, double k1, double k2) {
  if (!is_translation_invariant(spec))
    throw ModelError(model_name(spec) + " is not translation invariant");
  HoppingTable tab = table(spec, n_orb);
  Mat h = tab.onsite;
  for (const Hop& hop : tab.hops) {
    Mat t = hop.block * std::exp(I * (k1 * hop.d1 + k2 * hop.d2));
    h += t + t.adjoint();
  }
  return h;
}

double bloch_gap(const ModelSpec& spec, int n_orb, int n_filled, int grid) {
  double lo = -1e300, hi = 1e300;
  for (int a = 0; a < grid; ++a)
    for (int b = 0; b < grid; ++b) {
      double k1 = 2 * std::numbers::pi * a / grid, k2 = 2 * std::numbers::pi * b / grid;
      Eigen::SelfAdjointEigenSolver<Mat> es(bloch_hamiltonian(spec, n_orb, k1, k2),
                                            Eigen::EigenvaluesOnly);
      lo = std::max(lo, es.eigenvalues()(n_filled - 1));
      hi = std::min(hi, es.eigenvalues()(n_filled));
    }
  return hi - lo;
}

}  // namespace hallcond
