#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hallcond/lga.hpp"

namespace hallcond {

// One property check: value is the worst violation (or the worst ratio for
// the commutator bound), pass is value <= tol.
struct Check {
  std::string group, name;
  double value = 0, tol = 0;
  bool pass = false;
};

bool all_pass(const std::vector<Check>& checks);

// Conditional expectation properties on random operators of a 3x3 lattice.
std::vector<Check> verify_conditional_expectation(std::uint64_t seed, int trials = 4);

// ||[A,B]||_{nu,x} <= 4^{nu+m+3} ||A||_{nu+m,y} ||B||_{nu+m,x} / (1+|x-y|)^m
// for (nu, m) in {0,1,2}^2 on `instances` random pairs; one check per pair
// (nu, m) holding the worst ratio lhs / rhs.
std::vector<Check> verify_commutator_bound(std::uint64_t seed, int instances = 200);

// Liouvillian as a sum of local terms, and the current interaction i[H, Lambda_j]
// against the half-plane sum of i L_H n_x.
std::vector<Check> verify_resummation(std::uint64_t seed);

// Operators on disjoint regions commute exactly when one is even.
std::vector<Check> verify_disjoint_supports(std::uint64_t seed);

// Gap inequality, off-diagonal property, diagonal remainder, Liouvillian of the
// off-diagonal interaction, shell closure and quadrature against spectral
// filtering on a cluster with a full eigensystem.
std::vector<Check> verify_offdiagonal(const FockSpace& space, const Interaction& h,
                                      const GroundState& gs, const WeightFunction& w,
                                      std::uint64_t seed, int trials = 10);

// verify_weight plus phi(0) = 0.
std::vector<Check> verify_weight_checks(const WeightFunction& w);

// Switch conductance under the identity, a gauge circuit and a depth-2
// quadratic circuit.
std::vector<Check> verify_local_unitaries(const FockSpace& space, const Interaction& h,
                                          const WeightFunction& w, std::uint64_t seed);

}  // namespace hallcond
