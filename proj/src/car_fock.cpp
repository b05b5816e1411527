#include "hallcond/car_fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "hallcond/errors.hpp"

namespace hallcond {

namespace {

using Triplet = Eigen::Triplet<cplx>;

int popcount(std::uint32_t b) { return std::popcount(b); }

double jw_sign(std::uint32_t state, int mode) {
  return (popcount(state & ((std::uint32_t(1) << mode) - 1)) & 1) ? -1.0 : 1.0;
}

// Data for moving the modes of M to the front of the Jordan-Wigner order.
struct ModeSplit {
  std::vector<int> m_modes;
  std::uint32_t mask = 0;
  std::vector<double> sign;          // reordering sign per basis state
  std::vector<std::uint32_t> local;  // local index of the M part
};

ModeSplit split_modes(const FockSpace& space, const Region& m) {
  ModeSplit s;
  s.m_modes = space.modes_of(m);
  s.mask = space.mask_of(m);
  const auto dim = static_cast<std::uint32_t>(space.dim());
  s.sign.resize(dim);
  s.local.resize(dim);
  for (std::uint32_t b = 0; b < dim; ++b) {
    int rest_seen = 0, swaps = 0;
    for (int j = 0; j < space.modes(); ++j) {
      if (!(b >> j & 1u)) continue;
      if (s.mask >> j & 1u)
        swaps += rest_seen;
      else
        ++rest_seen;
    }
    s.sign[b] = (swaps & 1) ? -1.0 : 1.0;
    std::uint32_t l = 0;
    for (std::size_t k = 0; k < s.m_modes.size(); ++k)
      if (b >> s.m_modes[k] & 1u) l |= std::uint32_t(1) << k;
    s.local[b] = l;
  }
  return s;
}

std::uint32_t deposit(const ModeSplit& s, std::uint32_t local) {
  std::uint32_t b = 0;
  for (std::size_t k = 0; k < s.m_modes.size(); ++k)
    if (local >> k & 1u) b |= std::uint32_t(1) << s.m_modes[k];
  return b;
}

}  // namespace

FockSpace::FockSpace(Lattice lat, int max_modes) : lat_(std::move(lat)) {
  modes_ = lat_.num_sites() * lat_.n_orb();
  if (modes_ > max_modes || modes_ > 24)
    throw SizeError(std::to_string(modes_) + " modes exceed the cap of " +
                    std::to_string(max_modes));
  const auto d = static_cast<std::uint32_t>(dim());
  sectors_.assign(modes_ + 1, {});
  sector_pos_.resize(d);
  for (std::uint32_t b = 0; b < d; ++b) {
    auto& sec = sectors_[popcount(b)];
    sector_pos_[b] = static_cast<std::uint32_t>(sec.size());
    sec.push_back(b);
  }
}

int FockSpace::mode(const Site& x, int orb) const {
  if (orb < 0 || orb >= lat_.n_orb()) throw IndexError("orbital out of range");
  return lat_.index(x) * lat_.n_orb() + orb;
}

std::vector<int> FockSpace::modes_of(const Region& r) const {
  std::vector<int> out;
  for (const Site& s : r)
    for (int i = 0; i < lat_.n_orb(); ++i) out.push_back(mode(s, i));
  std::sort(out.begin(), out.end());
  return out;
}

std::uint32_t FockSpace::mask_of(const Region& r) const {
  std::uint32_t m = 0;
  for (int j : modes_of(r)) m |= std::uint32_t(1) << j;
  return m;
}

FockOperator::FockOperator(SpMat matrix, Region support)
    : m_(std::move(matrix)), support_(std::move(support)) {
  m_.makeCompressed();
  classify();
}

void FockOperator::classify() {
  bool even = false, odd = false, charged = false;
  for (int k = 0; k < m_.outerSize(); ++k) {
    for (SpMat::InnerIterator it(m_, k); it; ++it) {
      if (it.value() == cplx(0)) continue;
      int d = popcount(static_cast<std::uint32_t>(it.row())) -
              popcount(static_cast<std::uint32_t>(it.col()));
      if (d != 0) charged = true;
      if (d & 1)
        odd = true;
      else
        even = true;
    }
  }
  gauge_ = !charged;
  parity_ = (even && odd) ? Parity::Mixed : (odd ? Parity::Odd : Parity::Even);
}

FockOperator FockOperator::identity(const FockSpace& space) {
  SpMat id(space.dim(), space.dim());
  id.setIdentity();
  return FockOperator(std::move(id), Region{});
}

FockOperator FockOperator::zero(const FockSpace& space, Region support) {
  return FockOperator(SpMat(space.dim(), space.dim()), std::move(support));
}

FockOperator FockOperator::adjoint() const {
  FockOperator out = *this;
  out.m_ = SpMat(m_.adjoint());
  return out;
}

FockOperator FockOperator::with_support(Region support) const {
  FockOperator out = *this;
  out.support_ = std::move(support);
  return out;
}

FockOperator& FockOperator::operator+=(const FockOperator& o) {
  m_ = m_ + o.m_;
  support_ = region_union(support_, o.support_);
  classify();
  return *this;
}

FockOperator& FockOperator::operator-=(const FockOperator& o) {
  m_ = m_ - o.m_;
  support_ = region_union(support_, o.support_);
  classify();
  return *this;
}

FockOperator& FockOperator::operator*=(cplx s) {
  m_ *= s;
  if (s == cplx(0)) classify();
  return *this;
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  return FockOperator(SpMat(a.m_ * b.m_), region_union(a.support_, b.support_));
}

FockOperator commutator(const FockOperator& a, const FockOperator& b) {
  return FockOperator(SpMat(a.matrix() * b.matrix() - b.matrix() * a.matrix()),
                      region_union(a.support(), b.support()));
}

FockOperator anticommutator(const FockOperator& a, const FockOperator& b) {
  return FockOperator(SpMat(a.matrix() * b.matrix() + b.matrix() * a.matrix()),
                      region_union(a.support(), b.support()));
}

FockOperator creation(const FockSpace& space, const Site& x, int orb) {
  const int j = space.mode(x, orb);
  const auto d = static_cast<std::uint32_t>(space.dim());
  std::vector<Triplet> t;
  t.reserve(d / 2);
  for (std::uint32_t b = 0; b < d; ++b) {
    if (b >> j & 1u) continue;
    t.emplace_back(b | (std::uint32_t(1) << j), b, jw_sign(b, j));
  }
  SpMat m(d, d);
  m.setFromTriplets(t.begin(), t.end());
  return FockOperator(std::move(m), Region({x}));
}

FockOperator annihilation(const FockSpace& space, const Site& x, int orb) {
  return creation(space, x, orb).adjoint();
}

FockOperator number_mode(const FockSpace& space, const Site& x, int orb) {
  const int j = space.mode(x, orb);
  const auto d = static_cast<std::uint32_t>(space.dim());
  std::vector<Triplet> t;
  for (std::uint32_t b = 0; b < d; ++b)
    if (b >> j & 1u) t.emplace_back(b, b, 1.0);
  SpMat m(d, d);
  m.setFromTriplets(t.begin(), t.end());
  return FockOperator(std::move(m), Region({x}));
}

FockOperator number(const FockSpace& space, const Site& x) {
  const std::uint32_t mask = space.mask_of(Region({x}));
  const auto d = static_cast<std::uint32_t>(space.dim());
  std::vector<Triplet> t;
  for (std::uint32_t b = 0; b < d; ++b)
    if (b & mask) t.emplace_back(b, b, double(popcount(b & mask)));
  SpMat m(d, d);
  m.setFromTriplets(t.begin(), t.end());
  return FockOperator(std::move(m), Region({x}));
}

FockOperator second_quantize(const FockSpace& space, const Mat& k, Region support) {
  if (k.rows() != space.modes() || k.cols() != space.modes())
    throw IndexError("one-body kernel has wrong dimension");
  const auto d = static_cast<std::uint32_t>(space.dim());
  std::vector<Triplet> t;
  for (int a = 0; a < space.modes(); ++a) {
    for (int b = 0; b < space.modes(); ++b) {
      const cplx v = k(a, b);
      if (v == cplx(0)) continue;
      for (std::uint32_t c = 0; c < d; ++c) {
        if (!(c >> b & 1u)) continue;
        std::uint32_t c1 = c ^ (std::uint32_t(1) << b);
        if (c1 >> a & 1u) continue;
        double s = jw_sign(c, b) * jw_sign(c1, a);
        t.emplace_back(c1 | (std::uint32_t(1) << a), c, s * v);
      }
    }
  }
  SpMat m(d, d);
  m.setFromTriplets(t.begin(), t.end());
  return FockOperator(std::move(m), std::move(support));
}

Mat sector_block(const FockSpace& space, const SpMat& a, int n) {
  const auto& states = space.sector(n);
  const auto sz = static_cast<Eigen::Index>(states.size());
  Mat out = Mat::Zero(sz, sz);
  for (Eigen::Index c = 0; c < sz; ++c) {
    for (SpMat::InnerIterator it(a, states[c]); it; ++it) {
      auto r = static_cast<std::uint32_t>(it.row());
      if (popcount(r) != n) continue;
      out(space.sector_position(r), c) = it.value();
    }
  }
  return out;
}

SpMat sector_block_sparse(const FockSpace& space, const SpMat& a, int n) {
  const auto& states = space.sector(n);
  std::vector<Triplet> t;
  for (std::size_t c = 0; c < states.size(); ++c)
    for (SpMat::InnerIterator it(a, states[c]); it; ++it) {
      auto r = static_cast<std::uint32_t>(it.row());
      if (popcount(r) != n) continue;
      t.emplace_back(space.sector_position(r), static_cast<Eigen::Index>(c), it.value());
    }
  SpMat out(states.size(), states.size());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

Vec sector_embed(const FockSpace& space, const Vec& v, int n) {
  const auto& states = space.sector(n);
  Vec out = Vec::Zero(space.dim());
  for (std::size_t i = 0; i < states.size(); ++i) out(states[i]) = v(i);
  return out;
}

Vec sector_restrict(const FockSpace& space, const Vec& v, int n) {
  const auto& states = space.sector(n);
  Vec out(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) out(i) = v(states[i]);
  return out;
}

double operator_norm(const FockOperator& a) {
  if (a.matrix().nonZeros() == 0) return 0.0;
  const Eigen::Index d = a.dim();
  const int modes = std::countr_zero(static_cast<std::uint64_t>(d));
  if (a.gauge_invariant() && d > 64) {
    // block diagonal in the particle number
    FockSpace dummy(Lattice(modes, 1), modes);
    double best = 0;
    for (int n = 0; n <= modes; ++n) {
      if (dummy.sector(n).size() <= 2048) {
        best = std::max(best, spectral_norm(sector_block(dummy, a.matrix(), n)));
      } else {
        best = std::max(best, spectral_norm(sector_block_sparse(dummy, a.matrix(), n)));
      }
    }
    return best;
  }
  return spectral_norm(a.matrix());
}

cplx tracial_state(const FockOperator& a) {
  cplx tr = 0;
  for (Eigen::Index k = 0; k < a.matrix().outerSize(); ++k) tr += a.matrix().coeff(k, k);
  return tr / double(a.dim());
}

cplx expectation(const Vec& psi, const FockOperator& a) {
  return psi.dot(a.matrix() * psi);
}

FockOperator embed(const FockSpace& space, const Region& m, const Mat& local) {
  ModeSplit s = split_modes(space, m);
  const auto ld = static_cast<Eigen::Index>(1) << s.m_modes.size();
  if (local.rows() != ld || local.cols() != ld)
    throw IndexError("local operator has wrong dimension for region");
  const auto d = static_cast<std::uint32_t>(space.dim());
  std::vector<std::vector<std::pair<std::uint32_t, cplx>>> cols(ld);
  for (Eigen::Index c = 0; c < ld; ++c)
    for (Eigen::Index r = 0; r < ld; ++r)
      if (local(r, c) != cplx(0)) cols[c].emplace_back(static_cast<std::uint32_t>(r), local(r, c));
  std::vector<Triplet> t;
  for (std::uint32_t c = 0; c < d; ++c) {
    const std::uint32_t rest = c & ~s.mask;
    for (const auto& [lr, v] : cols[s.local[c]]) {
      std::uint32_t r = rest | deposit(s, lr);
      t.emplace_back(r, c, s.sign[r] * s.sign[c] * v);
    }
  }
  SpMat out(d, d);
  out.setFromTriplets(t.begin(), t.end());
  return FockOperator(std::move(out), m);
}

Mat reduce(const FockSpace& space, const Region& m, const FockOperator& a) {
  ModeSplit s = split_modes(space, m);
  const auto ld = static_cast<Eigen::Index>(1) << s.m_modes.size();
  Mat red = Mat::Zero(ld, ld);
  const SpMat& A = a.matrix();
  for (Eigen::Index k = 0; k < A.outerSize(); ++k) {
    const auto c = static_cast<std::uint32_t>(k);
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      const auto r = static_cast<std::uint32_t>(it.row());
      if ((r & ~s.mask) != (c & ~s.mask)) continue;
      red(s.local[r], s.local[c]) += s.sign[r] * s.sign[c] * it.value();
    }
  }
  const int rest = space.modes() - static_cast<int>(s.m_modes.size());
  return red / std::ldexp(1.0, rest);
}

FockOperator conditional_expectation(const FockSpace& space, const Region& m,
                                     const FockOperator& a,
                                     ConditionalExpectationOptions opt) {
  const int nm = static_cast<int>(m.size()) * space.lattice().n_orb();
  if (nm > opt.max_modes)
    throw SizeError("conditional expectation on " + std::to_string(nm) +
                    " modes exceeds the guard of " + std::to_string(opt.max_modes));
  if (a.support().subset_of(m)) return a;
  FockOperator out = embed(space, m, reduce(space, m, a));
  return out.with_support(region_intersection(m, a.support()));
}

double local_norm(const FockSpace& space, const FockOperator& a, int nu, const Site& x,
                  ConditionalExpectationOptions opt) {
  const Lattice& lat = space.lattice();
  double sup = 0;
  for (int k = 0;; ++k) {
    Region b = box(lat, x, k);
    if (a.support().subset_of(b)) break;
    FockOperator rest = a - conditional_expectation(space, b, a, opt);
    sup = std::max(sup, operator_norm(rest) * std::pow(1.0 + k, nu));
  }
  return operator_norm(a) + sup;
}

FockOperator random_local(const FockSpace& space, const Region& m, std::mt19937_64& rng,
                          bool gauge_invariant, bool hermitian) {
  const auto nm = space.modes_of(m).size();
  const Eigen::Index ld = Eigen::Index(1) << nm;
  std::normal_distribution<double> nd;
  Mat x(ld, ld);
  for (Eigen::Index c = 0; c < ld; ++c)
    for (Eigen::Index r = 0; r < ld; ++r) x(r, c) = cplx(nd(rng), nd(rng));
  if (gauge_invariant) {
    for (Eigen::Index c = 0; c < ld; ++c)
      for (Eigen::Index r = 0; r < ld; ++r)
        if (popcount(std::uint32_t(r)) != popcount(std::uint32_t(c))) x(r, c) = 0;
  }
  if (hermitian) x = (0.5 * (x + x.adjoint())).eval();
  x /= std::sqrt(double(ld));
  return embed(space, m, x);
}

}  // namespace hallcond
