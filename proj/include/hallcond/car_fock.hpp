#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hallcond/lattice.hpp"
#include "hallcond/linalg.hpp"

namespace hallcond {

// Fock space of all (site, orbital) modes. Mode order is row-major in the
// site index, then orbital. Basis state b has mode j occupied iff bit j is set.
class FockSpace {
 public:
  explicit FockSpace(Lattice lat, int max_modes = 16);

  const Lattice& lattice() const { return lat_; }
  int modes() const { return modes_; }
  Eigen::Index dim() const { return Eigen::Index(1) << modes_; }

  int mode(const Site& x, int orb) const;
  std::vector<int> modes_of(const Region& r) const;
  std::uint32_t mask_of(const Region& r) const;

  // basis states with n particles, ascending
  const std::vector<std::uint32_t>& sector(int n) const { return sectors_.at(n); }
  // position of a basis state inside its particle-number sector
  std::uint32_t sector_position(std::uint32_t state) const { return sector_pos_[state]; }

 private:
  Lattice lat_;
  int modes_;
  std::vector<std::vector<std::uint32_t>> sectors_;
  std::vector<std::uint32_t> sector_pos_;
};

enum class Parity { Even, Odd, Mixed };

// Operator on the full Fock space. Parity and gauge invariance are read off
// the sparsity pattern; the support is an over-approximation carried along.
class FockOperator {
 public:
  FockOperator() = default;
  FockOperator(SpMat matrix, Region support);

  static FockOperator identity(const FockSpace& space);
  static FockOperator zero(const FockSpace& space, Region support = {});

  const SpMat& matrix() const { return m_; }
  const Region& support() const { return support_; }
  Parity parity() const { return parity_; }
  bool gauge_invariant() const { return gauge_; }
  Eigen::Index dim() const { return m_.rows(); }

  FockOperator adjoint() const;
  FockOperator with_support(Region support) const;

  FockOperator& operator+=(const FockOperator& o);
  FockOperator& operator-=(const FockOperator& o);
  FockOperator& operator*=(cplx s);

  friend FockOperator operator+(FockOperator a, const FockOperator& b) { return a += b; }
  friend FockOperator operator-(FockOperator a, const FockOperator& b) { return a -= b; }
  friend FockOperator operator*(FockOperator a, cplx s) { return a *= s; }
  friend FockOperator operator*(cplx s, FockOperator a) { return a *= s; }
  friend FockOperator operator*(const FockOperator& a, const FockOperator& b);

 private:
  void classify();

  SpMat m_;
  Region support_;
  Parity parity_ = Parity::Even;
  bool gauge_ = true;
};

FockOperator commutator(const FockOperator& a, const FockOperator& b);
FockOperator anticommutator(const FockOperator& a, const FockOperator& b);

FockOperator creation(const FockSpace& space, const Site& x, int orb);
FockOperator annihilation(const FockSpace& space, const Site& x, int orb);
FockOperator number(const FockSpace& space, const Site& x);
FockOperator number_mode(const FockSpace& space, const Site& x, int orb);
// sum_{ab} k_ab a*_a a_b over all modes
FockOperator second_quantize(const FockSpace& space, const Mat& k, Region support);

double operator_norm(const FockOperator& a);
cplx tracial_state(const FockOperator& a);
cplx expectation(const Vec& psi, const FockOperator& a);

// Operator on the modes of M (local Jordan-Wigner order, M modes ascending)
// placed in the full algebra A_M.
FockOperator embed(const FockSpace& space, const Region& m, const Mat& local);
// Normalized partial trace onto the modes of M; inverse of embed on A_M.
Mat reduce(const FockSpace& space, const Region& m, const FockOperator& a);

struct ConditionalExpectationOptions {
  int max_modes = 12;
};

FockOperator conditional_expectation(const FockSpace& space, const Region& m,
                                     const FockOperator& a,
                                     ConditionalExpectationOptions opt = {});

double local_norm(const FockSpace& space, const FockOperator& a, int nu, const Site& x,
                  ConditionalExpectationOptions opt = {});

// Random operator in A_M; gauge-invariant ones are block diagonal in the
// local particle number.
FockOperator random_local(const FockSpace& space, const Region& m, std::mt19937_64& rng,
                          bool gauge_invariant = true, bool hermitian = true);

// Dense restriction of a gauge-invariant operator to the n-particle sector.
Mat sector_block(const FockSpace& space, const SpMat& a, int n);
SpMat sector_block_sparse(const FockSpace& space, const SpMat& a, int n);
// Full-space vector from sector amplitudes, and back.
Vec sector_embed(const FockSpace& space, const Vec& v, int n);
Vec sector_restrict(const FockSpace& space, const Vec& v, int n);

}  // namespace hallcond
