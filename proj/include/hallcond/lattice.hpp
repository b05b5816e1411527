#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <vector>

namespace hallcond {

enum class Boundary { Open, Torus };

// Lattice coordinates, 0-based. Ordered row-major: x1 runs fastest.
struct Site {
  int i1 = 0;
  int i2 = 0;

  friend bool operator==(const Site&, const Site&) = default;
  friend std::strong_ordering operator<=>(const Site& a, const Site& b) {
    if (auto c = a.i2 <=> b.i2; c != 0) return c;
    return a.i1 <=> b.i1;
  }
};

class Region {
 public:
  Region() = default;
  explicit Region(std::vector<Site> sites);

  const std::vector<Site>& sites() const { return sites_; }
  std::size_t size() const { return sites_.size(); }
  bool empty() const { return sites_.empty(); }
  bool contains(const Site& s) const;
  bool subset_of(const Region& other) const;
  bool intersects(const Region& other) const;

  auto begin() const { return sites_.begin(); }
  auto end() const { return sites_.end(); }

  friend bool operator==(const Region&, const Region&) = default;
  friend std::strong_ordering operator<=>(const Region& a, const Region& b) {
    return std::lexicographical_compare_three_way(a.sites_.begin(), a.sites_.end(),
                                                  b.sites_.begin(), b.sites_.end());
  }

 private:
  std::vector<Site> sites_;
};

Region region_union(const Region& a, const Region& b);
Region region_intersection(const Region& a, const Region& b);
Region region_difference(const Region& a, const Region& b);

class Lattice {
 public:
  // origin defaults to (L1/2, L2/2)
  Lattice(int L1, int L2, Boundary boundary = Boundary::Open, int n_orb = 1,
          std::optional<Site> origin = std::nullopt);

  int L1() const { return L1_; }
  int L2() const { return L2_; }
  int n_orb() const { return n_orb_; }
  Boundary boundary() const { return boundary_; }
  Site origin() const { return origin_; }
  int num_sites() const { return L1_ * L2_; }

  bool contains(const Site& s) const;
  int index(const Site& s) const;
  Site site(int index) const;

  // coordinates relative to the origin
  std::array<int, 2> position(const Site& s) const;
  Site at(int x1, int x2) const;

  // max-norm distance, minimal image on the torus
  int distance(const Site& a, const Site& b) const;
  // distance from s to the nearest open edge site (large on torus)
  int edge_distance(const Site& s) const;

  Region all() const;
  Lattice with_origin(Site origin) const;

 private:
  int L1_, L2_, n_orb_;
  Boundary boundary_;
  Site origin_;
};

Region complement(const Lattice& lat, const Region& r);

// {x | x_j >= shift}, coordinates relative to the origin.
Region half_plane(const Lattice& lat, int j, int shift);
// max-norm ball B_k(x) clipped to the lattice
Region box(const Lattice& lat, const Site& x, int k);
// {x | |x_1| <= k}
Region stripe(const Lattice& lat, int k);
// neighbourhood {y | dist(y, r) <= d}
Region expand(const Lattice& lat, const Region& r, int d);

// max-norm diameter
int diameter(const Lattice& lat, const Region& r);

// Minimal Euclidean distance to the center of mass, ties broken by the
// smallest angle in [0, 2pi) against e1; the zero vector has angle 0.
Site center_of(const Region& m);

}  // namespace hallcond
