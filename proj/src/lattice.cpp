#include "hallcond/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hallcond/errors.hpp"

namespace hallcond {

Region::Region(std::vector<Site> sites) : sites_(std::move(sites)) {
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
}

bool Region::contains(const Site& s) const {
  return std::binary_search(sites_.begin(), sites_.end(), s);
}

bool Region::subset_of(const Region& other) const {
  return std::includes(other.sites_.begin(), other.sites_.end(), sites_.begin(),
                       sites_.end());
}

bool Region::intersects(const Region& other) const {
  auto a = sites_.begin(), b = other.sites_.begin();
  while (a != sites_.end() && b != other.sites_.end()) {
    if (*a == *b) return true;
    if (*a < *b)
      ++a;
    else
      ++b;
  }
  return false;
}

Region region_union(const Region& a, const Region& b) {
  std::vector<Site> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Region(std::move(out));
}

Region region_intersection(const Region& a, const Region& b) {
  std::vector<Site> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Region(std::move(out));
}

Region region_difference(const Region& a, const Region& b) {
  std::vector<Site> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Region(std::move(out));
}

Lattice::Lattice(int L1, int L2, Boundary boundary, int n_orb, std::optional<Site> origin)
    : L1_(L1), L2_(L2), n_orb_(n_orb), boundary_(boundary) {
  if (L1 < 1 || L2 < 1) throw ParamError("lattice extents must be positive");
  if (n_orb < 1) throw ParamError("n_orb must be positive");
  origin_ = origin.value_or(Site{L1 / 2, L2 / 2});
  if (!contains(origin_)) throw IndexError("origin outside the lattice");
  if (boundary == Boundary::Open) {
    // both half-planes must be nonempty along each axis
    auto ok = [](int o, int L) { return L == 1 || (o >= 1 && o <= L - 1); };
    if (!ok(origin_.i1, L1) || !ok(origin_.i2, L2))
      throw GeometryError("origin must split each axis of an open lattice");
  }
}

bool Lattice::contains(const Site& s) const {
  return s.i1 >= 0 && s.i1 < L1_ && s.i2 >= 0 && s.i2 < L2_;
}

int Lattice::index(const Site& s) const {
  if (!contains(s))
    throw IndexError("site (" + std::to_string(s.i1) + "," + std::to_string(s.i2) +
                     ") not on lattice");
  return s.i2 * L1_ + s.i1;
}

Site Lattice::site(int index) const {
  if (index < 0 || index >= num_sites()) throw IndexError("site index out of range");
  return {index % L1_, index / L1_};
}

std::array<int, 2> Lattice::position(const Site& s) const {
  return {s.i1 - origin_.i1, s.i2 - origin_.i2};
}

Site Lattice::at(int x1, int x2) const { return {x1 + origin_.i1, x2 + origin_.i2}; }

int Lattice::distance(const Site& a, const Site& b) const {
  int d1 = std::abs(a.i1 - b.i1), d2 = std::abs(a.i2 - b.i2);
  if (boundary_ == Boundary::Torus) {
    d1 = std::min(d1, L1_ - d1);
    d2 = std::min(d2, L2_ - d2);
  }
  return std::max(d1, d2);
}

int Lattice::edge_distance(const Site& s) const {
  if (boundary_ == Boundary::Torus) return std::max(L1_, L2_);
  return std::min({s.i1, L1_ - 1 - s.i1, s.i2, L2_ - 1 - s.i2});
}

Region Lattice::all() const {
  std::vector<Site> v;
  v.reserve(num_sites());
  for (int i = 0; i < num_sites(); ++i) v.push_back(site(i));
  return Region(std::move(v));
}

Lattice Lattice::with_origin(Site origin) const {
  return Lattice(L1_, L2_, boundary_, n_orb_, origin);
}

Region complement(const Lattice& lat, const Region& r) {
  return region_difference(lat.all(), r);
}

Region half_plane(const Lattice& lat, int j, int shift) {
  if (j != 1 && j != 2) throw IndexError("axis must be 1 or 2");
  std::vector<Site> v;
  for (const Site& s : lat.all()) {
    if (lat.position(s)[j - 1] >= shift) v.push_back(s);
  }
  if (v.empty()) throw RegionEmpty("half-plane x_" + std::to_string(j) +
                                   " >= " + std::to_string(shift) + " misses the lattice");
  return Region(std::move(v));
}

Region box(const Lattice& lat, const Site& x, int k) {
  if (!lat.contains(x)) throw IndexError("box center not on lattice");
  std::vector<Site> v;
  for (const Site& s : lat.all()) {
    if (lat.distance(s, x) <= k) v.push_back(s);
  }
  return Region(std::move(v));
}

Region stripe(const Lattice& lat, int k) {
  if (k < 0) throw ParamError("stripe half-width must be >= 0");
  std::vector<Site> v;
  for (const Site& s : lat.all()) {
    if (std::abs(lat.position(s)[0]) <= k) v.push_back(s);
  }
  return Region(std::move(v));
}

Region expand(const Lattice& lat, const Region& r, int d) {
  std::vector<Site> v;
  for (const Site& s : lat.all()) {
    for (const Site& t : r) {
      if (lat.distance(s, t) <= d) {
        v.push_back(s);
        break;
      }
    }
  }
  return Region(std::move(v));
}

int diameter(const Lattice& lat, const Region& r) {
  int d = 0;
  for (const Site& a : r)
    for (const Site& b : r) d = std::max(d, lat.distance(a, b));
  return d;
}

Site center_of(const Region& m) {
  if (m.empty()) throw RegionEmpty("center of an empty region");
  // exact integer arithmetic: compare n*x - sum(x)
  const long long n = static_cast<long long>(m.size());
  long long s1 = 0, s2 = 0;
  for (const Site& s : m) {
    s1 += s.i1;
    s2 += s.i2;
  }
  auto angle = [](long long d1, long long d2) {
    if (d1 == 0 && d2 == 0) return 0.0;
    double a = std::atan2(static_cast<double>(d2), static_cast<double>(d1));
    return a < 0 ? a + 2 * std::numbers::pi : a;
  };
  const Site* best = nullptr;
  long long best_d = 0;
  double best_a = 0;
  for (const Site& s : m) {
    long long d1 = n * s.i1 - s1, d2 = n * s.i2 - s2;
    long long d = d1 * d1 + d2 * d2;
    double a = angle(d1, d2);
    if (!best || d < best_d || (d == best_d && a < best_a)) {
      best = &s;
      best_d = d;
      best_a = a;
    }
  }
  return *best;
}

}  // namespace hallcond
