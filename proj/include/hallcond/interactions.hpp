#pragma once

#include <map>
#include <string>
#include <utility>

#include "hallcond/car_fock.hpp"

namespace hallcond {

struct Term {
  Region region;
  Site center;
  FockOperator op;
};

// Finite map from regions to local operators. Each term also carries the
// site it is attributed to; by default the center of its region. Terms are
// iterated in (region, center) order.
class Interaction {
 public:
  explicit Interaction(std::string name = {}) : name_(std::move(name)) {}

  void add(const Region& region, const FockOperator& op);
  void add(const Region& region, const Site& center, const FockOperator& op);

  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  // Phi(M), summing terms that share a region
  std::map<Region, FockOperator> by_region() const;

  // max over terms of ||Phi(M) - Phi(M)^*|| and the gauge flag
  double hermiticity_defect() const;
  bool gauge_invariant() const;

 private:
  std::string name_;
  std::map<std::pair<Region, Site>, FockOperator> terms_;
};

Interaction operator+(const Interaction& a, const Interaction& b);
Interaction operator*(cplx s, const Interaction& a);

FockOperator total(const FockSpace& space, const Interaction& phi);

Interaction builtin_number(const FockSpace& space);
Interaction builtin_switch(const FockSpace& space, int j);    // Lambda_j
Interaction builtin_position(const FockSpace& space, int j);  // X_j

// sup_x sum_{M containing x} (1 + diam M)^nu ||Phi(M)||
double interaction_norm(const FockSpace& space, const Interaction& phi, double nu);
// sup_x sum_{M containing x} exp(a diam M) ||Phi(M)||
double interaction_norm_exp(const FockSpace& space, const Interaction& phi, double a);

FockOperator local_term(const FockSpace& space, const Interaction& phi, const Site& x);

// sum_M [Phi(M), A]; terms with support disjoint from A are skipped
FockOperator liouvillian(const FockSpace& space, const Interaction& phi, const FockOperator& a);

// [Phi, Psi](M) = sum over M1 u M2 = M of [Phi(M1), Psi(M2)]
Interaction commutator_interaction(const Interaction& phi, const Interaction& psi);

}  // namespace hallcond
