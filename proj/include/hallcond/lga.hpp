#pragma once

#include <optional>
#include <random>
#include <vector>

#include "hallcond/conductance.hpp"

namespace hallcond {

// Generator family Phi^v on [0, 1], linear between equally spaced knots. A
// single knot is a constant family.
struct LgaSpec {
  std::vector<Interaction> knots;
  Interaction at(double v) const;
  // sup over the knots of ||Phi^v||_nu; the family is linear in between
  double norm_budget(const FockSpace& space, double nu) const;
};

struct LgaOptions {
  double tol = 1e-12;  // local error per step, Frobenius norm over the dimension
  double h0 = 0.05;
  Eigen::Index full_limit = 4096;  // largest full-Fock dimension for sector-mixing generators
};

// U_{u,v} = T exp(-i int_u^v Phi^s ds), so that A -> U* A U implements the
// automorphism and U_{u,w} = U_{v,w} U_{u,v}. Gauge-invariant families are
// propagated sector by sector.
FockOperator build_lga(const FockSpace& space, const LgaSpec& spec, double u, double v,
                       const LgaOptions& opt = {});

struct Gate {
  Region region;
  Mat local;      // unitary on the modes of region, local Jordan-Wigner order
  Mat one_body;   // exp(-i k) on the modes of region when the gate is quadratic
};

// Layers of gates with disjoint regions; layer 0 acts first.
struct Circuit {
  std::vector<std::vector<Gate>> layers;
  int depth() const { return int(layers.size()); }
  bool quadratic() const;
};

// Brickwork of nearest-neighbour pair gates exp(-i K), K random hermitian and
// gauge invariant with ||K|| scaled to `strength`. Layers alternate between
// horizontal and vertical bonds and shift the pairing by one every two
// layers. Quadratic circuits draw K as a random one-body matrix.
Circuit random_circuit(const Lattice& lat, int depth, std::mt19937_64& rng, bool quadratic = false,
                       double strength = 1.0);
// One layer of on-site phases exp(-i theta_x n_x).
Circuit gauge_circuit(const Lattice& lat, std::mt19937_64& rng);

FockOperator circuit_unitary(const FockSpace& space, const Circuit& c);
// One-body unitary u with U c*_a U* = sum_b u_ba c*_b; throws ParamError if a
// gate is not quadratic.
Mat circuit_one_body(const Lattice& lat, const Circuit& c);

// U A U* with only the gates of the backward light cone of A applied. The
// support grows by the regions of the gates that touch it.
FockOperator conjugate(const FockSpace& space, const Circuit& c, const FockOperator& a);
// Term-wise U Phi(M) U*, centers kept.
Interaction conjugate(const FockSpace& space, const Circuit& c, const Interaction& phi);
// Term-wise U Phi(M) U* for a dense unitary; supports become the whole lattice.
Interaction conjugate(const FockSpace& space, const FockOperator& u, const Interaction& phi);

struct InvarianceReport {
  double sigma0 = 0, sigma1 = 0, delta = 0;  // global values
  double gap0 = 0, gap1 = 0;
  std::vector<SeriesPoint> windows0, windows1;
  double window_delta = 0;  // max change over the windowed series
};

// sigma of (omega_0, H) against (omega_0 o alpha, U H U*); the transformed
// system is diagonalized and its maps are rebuilt from scratch.
InvarianceReport conductance_invariance_test(const FockSpace& space, const Interaction& h,
                                             const WeightFunction& w, const Circuit& c,
                                             std::optional<Site> origin = std::nullopt);
InvarianceReport conductance_invariance_test(const FockSpace& space, const Interaction& h,
                                             const WeightFunction& w, const LgaSpec& spec,
                                             std::optional<Site> origin = std::nullopt);
// Free fermions: sea of h against the sea of u h u* for a quadratic circuit,
// both through hall_conductance_free.
InvarianceReport free_invariance_test(const Mat& h, const Lattice& lat, const Circuit& c,
                                      const FreeSwitchOptions& opt = {});

struct ParentReport {
  double sigma = 0;
  double sigma_squared = 0;  // H + c (H - E0)^2
  double delta_global = 0;
  double delta_scaled = 0;  // windowed, H against 2H with the same W
  double gap = 0, gap_squared = 0;
};

// Two parent Hamiltonians with the same ground state.
ParentReport parent_independence_test(const FockSpace& space, const Interaction& h,
                                      const WeightFunction& w, double c = 0.5);

}  // namespace hallcond
