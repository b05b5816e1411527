#pragma once

#include <cstdint>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "hallcond/interactions.hpp"

namespace hallcond {

// On-site energies -1 on even, +1 on odd orbitals; with one orbital the
// sign alternates between sites like a checkerboard.
struct Atomic {};
struct QiWuZhang {
  double u = 1.0;
};
// honeycomb in brick-wall form, orbitals (A, B)
struct Haldane {
  double t1 = 1.0, t2 = 0.3, phi = std::numbers::pi / 2, m = 0.0;
};
struct Hofstadter {
  long p = 1, q = 4;
};
// spinless, one orbital: -t hopping, V n_x n_y on bonds, -mu n_x
struct InteractingCluster {
  double t = 1.0, V = 0.0, mu = 0.0;
};

using ModelKind = std::variant<Atomic, QiWuZhang, Haldane, Hofstadter, InteractingCluster>;

struct ModelSpec {
  ModelKind kind = QiWuZhang{};
  double disorder = 0.0;  // on-site, uniform in [-w, w]
  std::uint64_t seed = 0;
};

std::string model_name(const ModelSpec& spec);
bool is_quadratic(const ModelSpec& spec);
bool is_translation_invariant(const ModelSpec& spec);
// orbitals the model needs; 0 means any
int required_orbitals(const ModelSpec& spec);

// h_{a,b} block between the orbitals of sites a and b; a == b is on-site.
// Each bond appears once, its hermitian conjugate is implied.
struct OneBodyTerm {
  Site a, b;
  Mat block;
};

std::vector<OneBodyTerm> one_body_terms(const ModelSpec& spec, const Lattice& lat);
Mat build_one_body(const ModelSpec& spec, const Lattice& lat);
Interaction build_interaction(const ModelSpec& spec, const FockSpace& space);

// Bloch matrix h(k) = sum_e T_e exp(i k.e) + h.c. for a translation-invariant
// clean model with `n_orb` orbitals.
Mat bloch_hamiltonian(const ModelSpec& spec, int n_orb, double k1, double k2);
// direct gap of the lower n_filled bands on a k-grid
double bloch_gap(const ModelSpec& spec, int n_orb, int n_filled, int grid);

}  // namespace hallcond
