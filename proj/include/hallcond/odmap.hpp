#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "hallcond/spectral.hpp"
#include "hallcond/weightfn.hpp"

namespace hallcond {

enum class Filter { Spectral, Quadrature };

// Many-body data for the off-diagonal maps. alpha acts as alpha(A) = U* A U;
// omega_alpha is then the vector state of U psi0.
struct OdContext {
  OdContext() = default;
  // copies start with an empty phi table
  OdContext(const OdContext& o);
  OdContext& operator=(const OdContext& o);
  OdContext(OdContext&&) = default;
  OdContext& operator=(OdContext&&) = default;

  const FockSpace* space = nullptr;
  Interaction h;
  std::shared_ptr<const EigenSystem> eig;
  Vec psi;
  double energy = 0;
  double gap = 0;
  WeightFunction w;
  std::optional<SpMat> u;
  Filter filter = Filter::Spectral;
  double quad_tol = 1e-6;
  ConditionalExpectationOptions ce;

  Vec state() const;  // vector of omega_alpha
  // phi_quadrature over the spectral width, built on first use; w must not
  // change afterwards
  const PhiTable& phi_table() const;

 private:
  struct TableCache {
    std::once_flag once;
    std::unique_ptr<PhiTable> table;
  };
  std::shared_ptr<TableCache> table_ = std::make_shared<TableCache>();
};

// Throws StateError without a full eigensystem and ParamError when W.g
// exceeds the ground-state gap by more than 5%.
OdContext make_od_context(const FockSpace& space, const Interaction& h, const GroundState& gs,
                          WeightFunction w, std::optional<SpMat> u = std::nullopt);

struct QuadratureStatus {
  double estimate = 0;  // largest self-estimated error of phi over the transitions used
  bool warning = false;
};

FockOperator od_observable_spectral(const OdContext& ctx, const FockOperator& a);
FockOperator od_observable_quadrature(const OdContext& ctx, const FockOperator& a,
                                      QuadratureStatus* status = nullptr);
// dispatches on ctx.filter
FockOperator od_observable(const OdContext& ctx, const FockOperator& a,
                           QuadratureStatus* status = nullptr);

// (Psi^OD)_{x,*}, supported on the whole lattice
FockOperator od_local(const OdContext& ctx, const Interaction& psi, const Site& x,
                      QuadratureStatus* status = nullptr);

// E_{B_k(x)} A - E_{B_{k-1}(x)} A for k = 0..k_max, with E_{B_{-1}} the
// tracial state. The last entry takes A - E_{B_{k_max - 1}(x)} A, so the shells
// sum to A - omega_tr(A), which is A for off-diagonal operators.
std::vector<FockOperator> shell_decomposition(const FockSpace& space, const FockOperator& a,
                                              const Site& x, int k_max,
                                              ConditionalExpectationOptions opt = {});

// Terms keyed by (B_k(x), x). k_max < 0 runs until the box covers the lattice.
Interaction od_interaction(const OdContext& ctx, const Interaction& psi, int k_max = -1,
                           QuadratureStatus* status = nullptr);

// Free fermions: p a q + q a p
Mat od_free(const FermiSea& sea, const Mat& a);
// one-body W filter: phi(e_i - e_j) a_ij in the eigenbasis of h
Mat od_free_filtered(const FermiSea& sea, const WeightFunction& w, const Mat& a);
// one-body image of (Psi^OD)_{x,*}: -(phi/Delta)(e_i - e_j) c_ij with c = [psi, h_x]
Mat od_free_local(const FermiSea& sea, const WeightFunction& w, const Mat& c);

}  // namespace hallcond
