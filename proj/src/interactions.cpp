#include "hallcond/interactions.hpp"

#include <cmath>
#include <vector>

#include "hallcond/errors.hpp"

namespace hallcond {

void Interaction::add(const Region& region, const FockOperator& op) {
  add(region, center_of(region), op);
}

void Interaction::add(const Region& region, const Site& center, const FockOperator& op) {
  if (region.empty()) throw RegionEmpty("interaction term on the empty set");
  auto key = std::make_pair(region, center);
  auto it = terms_.find(key);
  if (it == terms_.end())
    terms_.emplace(key, op);
  else
    it->second += op;
}

std::map<Region, FockOperator> Interaction::by_region() const {
  std::map<Region, FockOperator> out;
  for (const auto& [key, op] : terms_) {
    auto it = out.find(key.first);
    if (it == out.end())
      out.emplace(key.first, op);
    else
      it->second += op;
  }
  return out;
}

double Interaction::hermiticity_defect() const {
  double d = 0;
  for (const auto& [key, op] : terms_) d = std::max(d, operator_norm(op - op.adjoint()));
  return d;
}

bool Interaction::gauge_invariant() const {
  for (const auto& [key, op] : terms_)
    if (!op.gauge_invariant()) return false;
  return true;
}

Interaction operator+(const Interaction& a, const Interaction& b) {
  Interaction out = a;
  for (const auto& [key, op] : b) out.add(key.first, key.second, op);
  return out;
}

Interaction operator*(cplx s, const Interaction& a) {
  Interaction out(a.name());
  for (const auto& [key, op] : a) out.add(key.first, key.second, s * op);
  return out;
}

FockOperator total(const FockSpace& space, const Interaction& phi) {
  FockOperator out = FockOperator::zero(space);
  for (const auto& [key, op] : phi) out += op;
  return out;
}

Interaction builtin_number(const FockSpace& space) {
  Interaction out("N");
  for (const Site& x : space.lattice().all()) out.add(Region({x}), number(space, x));
  return out;
}

Interaction builtin_switch(const FockSpace& space, int j) {
  const Lattice& lat = space.lattice();
  if (lat.boundary() == Boundary::Torus)
    throw GeometryError("switch functions are undefined on a torus");
  Interaction out("Lambda" + std::to_string(j));
  for (const Site& x : half_plane(lat, j, 0)) out.add(Region({x}), number(space, x));
  return out;
}

Interaction builtin_position(const FockSpace& space, int j) {
  const Lattice& lat = space.lattice();
  if (lat.boundary() == Boundary::Torus)
    throw GeometryError("position operators are undefined on a torus");
  if (j != 1 && j != 2) throw IndexError("axis must be 1 or 2");
  Interaction out("X" + std::to_string(j));
  for (const Site& x : lat.all()) {
    int c = lat.position(x)[j - 1];
    if (c != 0) out.add(Region({x}), double(c) * number(space, x));
  }
  return out;
}

namespace {

template <typename Weight>
double weighted_norm(const FockSpace& space, const Interaction& phi, Weight w) {
  const Lattice& lat = space.lattice();
  std::vector<double> acc(lat.num_sites(), 0.0);
  for (const auto& [region, op] : phi.by_region()) {
    double v = w(diameter(lat, region)) * operator_norm(op);
    for (const Site& x : region) acc[lat.index(x)] += v;
  }
  double sup = 0;
  for (double v : acc) sup = std::max(sup, v);
  return sup;
}

}  // namespace

double interaction_norm(const FockSpace& space, const Interaction& phi, double nu) {
  return weighted_norm(space, phi, [nu](int d) { return std::pow(1.0 + d, nu); });
}

double interaction_norm_exp(const FockSpace& space, const Interaction& phi, double a) {
  return weighted_norm(space, phi, [a](int d) { return std::exp(a * d); });
}

FockOperator local_term(const FockSpace& space, const Interaction& phi, const Site& x) {
  FockOperator out = FockOperator::zero(space, Region({x}));
  for (const auto& [key, op] : phi)
    if (key.second == x) out += op;
  return out;
}

FockOperator liouvillian(const FockSpace& space, const Interaction& phi, const FockOperator& a) {
  FockOperator out = FockOperator::zero(space, a.support());
  for (const auto& [key, op] : phi) {
    if (op.parity() == Parity::Even && !op.support().intersects(a.support())) continue;
    out += commutator(op, a);
  }
  return out;
}

Interaction commutator_interaction(const Interaction& phi, const Interaction& psi) {
  Interaction out("[" + phi.name() + "," + psi.name() + "]");
  auto a = phi.by_region();
  auto b = psi.by_region();
  std::map<Region, FockOperator> acc;
  for (const auto& [m1, x] : a) {
    for (const auto& [m2, y] : b) {
      if (!m1.intersects(m2) && x.parity() == Parity::Even) continue;
      Region m = region_union(m1, m2);
      FockOperator c = commutator(x, y).with_support(m);
      auto it = acc.find(m);
      if (it == acc.end())
        acc.emplace(m, c);
      else
        it->second += c;
    }
  }
  for (const auto& [m, op] : acc) out.add(m, op);
  return out;
}

}  // namespace hallcond
