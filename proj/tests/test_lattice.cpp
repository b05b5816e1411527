#include "doctest.h"

#include <numbers>

#include "hallcond/errors.hpp"
#include "hallcond/lattice.hpp"

using namespace hallcond;

TEST_CASE("index map round-trips") {
  Lattice lat(5, 3);
  for (int i = 0; i < lat.num_sites(); ++i) CHECK(lat.index(lat.site(i)) == i);
  CHECK(lat.index({1, 0}) == 1);
  CHECK(lat.index({0, 1}) == 5);
  CHECK_THROWS_AS(lat.index({5, 0}), IndexError);
}

TEST_CASE("origin must split open axes") {
  CHECK_THROWS_AS(Lattice(4, 4, Boundary::Open, 1, Site{0, 2}), GeometryError);
  CHECK_NOTHROW(Lattice(2, 3, Boundary::Open, 2, Site{1, 1}));
  CHECK_NOTHROW(Lattice(4, 4, Boundary::Torus, 1, Site{0, 0}));
}

TEST_CASE("half planes") {
  Lattice lat(4, 4);
  CHECK(lat.origin() == Site{2, 2});
  Region up = half_plane(lat, 2, 0);
  CHECK(up.size() == 8);
  for (const Site& s : up) CHECK(lat.position(s)[1] >= 0);
  Region left = complement(lat, half_plane(lat, 1, 0));
  CHECK(left.size() == 8);
  for (const Site& s : left) CHECK(lat.position(s)[0] < 0);
  CHECK_THROWS_AS(half_plane(lat, 1, lat.L1()), RegionEmpty);
  for (int s = -2; s <= 1; ++s) {
    Region h = half_plane(lat, 1, s);
    CHECK(h.size() + complement(lat, h).size() == 16);
    CHECK(!h.intersects(complement(lat, h)));
  }
}

TEST_CASE("boxes") {
  Lattice lat(5, 5);
  CHECK(box(lat, {2, 2}, 0) == Region({{2, 2}}));
  CHECK(box(lat, {2, 2}, 1).size() == 9);
  CHECK(box(lat, {0, 0}, 1).size() == 4);
  for (int k = 0; k < 5; ++k) CHECK(box(lat, {1, 3}, k).subset_of(box(lat, {1, 3}, k + 1)));
}

TEST_CASE("stripes") {
  Lattice lat(5, 5);
  CHECK(stripe(lat, 0).size() == 5);
  for (const Site& s : stripe(lat, 0)) CHECK(lat.position(s)[0] == 0);
  CHECK(stripe(lat, 1).size() == 15);
  CHECK(stripe(lat, 5) == lat.all());
}

TEST_CASE("center rule") {
  CHECK(center_of(Region({{0, 0}})) == Site{0, 0});
  CHECK(center_of(Region({{0, 0}, {1, 0}})) == Site{1, 0});
  CHECK(center_of(Region({{0, 0}, {0, 1}, {1, 0}, {1, 1}})) == Site{1, 1});
  // coincident center of mass wins
  CHECK(center_of(Region({{0, 0}, {1, 0}, {2, 0}})) == Site{1, 0});
  CHECK_THROWS_AS(center_of(Region{}), RegionEmpty);
}

TEST_CASE("center rule is translation covariant") {
  Region m({{2, 3}, {3, 3}, {3, 4}, {5, 4}});
  Site c = center_of(m);
  for (int z1 = -2; z1 <= 2; ++z1)
    for (int z2 = -2; z2 <= 2; ++z2) {
      std::vector<Site> v;
      for (const Site& s : m) v.push_back({s.i1 + z1, s.i2 + z2});
      CHECK(center_of(Region(v)) == Site{c.i1 + z1, c.i2 + z2});
    }
}
