#pragma once

#include <limits>
#include <memory>
#include <vector>

#include "hallcond/interactions.hpp"

namespace hallcond {

struct SectorEigen {
  int particles = 0;
  RVec values;
  Mat vectors;  // columns in the order of space.sector(particles)
};

// Full spectrum, one block per particle-number sector.
struct EigenSystem {
  std::vector<SectorEigen> sectors;
  const SectorEigen* find(int particles) const;
};

struct GroundStateOptions {
  double degeneracy_tol = 1e-8;
  Eigen::Index dense_limit = 4096;
  bool keep_eigensystem = true;
  double lanczos_tol = 1e-10;
};

struct GroundState {
  Vec vector;
  double energy = 0;
  double gap = 0;  // E1 - E0 over the whole Fock space
  double sector_gap = std::numeric_limits<double>::infinity();  // inside the particle sector
  int particles = 0;
  std::shared_ptr<const EigenSystem> eigensystem;  // null when any sector was too large
};

GroundState ground_state(const FockSpace& space, const FockOperator& h,
                         const GroundStateOptions& opt = {});
GroundState ground_state(const FockSpace& space, const Interaction& h,
                         const GroundStateOptions& opt = {});

struct FermiSea {
  Mat p;
  double mu = 0;
  double one_body_gap = 0;
  int filled = 0;
  RVec energies;
  Mat vectors;
};

FermiSea fermi_sea(const Mat& h, double mu);

// Gap between the highest occupied and lowest empty eigenstates carrying at
// least half their weight on sites at distance >= margin from the edges.
double bulk_gap(const FermiSea& sea, const Lattice& lat, int margin);

struct GapInequalityReport {
  std::vector<double> lhs, rhs;
  double min_slack = std::numeric_limits<double>::infinity();
  bool pass = true;
};

GapInequalityReport verify_gap_inequality(const FockSpace& space, const GroundState& gs,
                                          const Interaction& h,
                                          const std::vector<FockOperator>& samples);

}  // namespace hallcond
