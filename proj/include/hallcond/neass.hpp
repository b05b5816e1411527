#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hallcond/conductance.hpp"

namespace hallcond {

enum class Protocol { NE, CP };

// Smooth switching profiles on [0, 1], flat outside. NE rises from 0 to 1
// as e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)}); CP is the normalized bump
// e^{-1/(t(1-t))}, so f(0) = f(1) = 0 and its integral is 1.
class SwitchingFunction {
 public:
  explicit SwitchingFunction(Protocol kind = Protocol::NE);
  Protocol kind() const { return kind_; }
  double operator()(double t) const;

 private:
  Protocol kind_;
  double norm_ = 1.0;
};

// Free fermions: the sea of h + eps lambda_1 at the same mu. Many-body: the
// ground state of H + eps Lambda_1. Both throw GaplessError when the
// perturbation closes the gap (bulk gap for the free sea).
FermiSea perturbed_state(const Mat& h, const Lattice& lat, double eps, double mu = 0.0,
                         std::optional<Site> origin = std::nullopt);
GroundState perturbed_state(const FockSpace& space, const Interaction& h, double eps,
                            const GroundStateOptions& opt = {});

// H + eps Lambda_1 as an interaction
Interaction perturbed_hamiltonian(const FockSpace& space, const Interaction& h, double eps);

struct DeltaCurrent {
  double value = 0;  // sum over box(origin, R)
  int radius = 0;
  std::vector<SeriesPoint> series;  // partial sums for R' = 0..R
};

// Sum over box(origin, R) of the current terms i[H, Lambda_2]_x weighted by
// the change of state. R < 0 picks the largest box 4 sites inside the edges.
DeltaCurrent delta_current(const FermiSea& eps, const FermiSea& zero, const Lattice& lat,
                           const Mat& h, int R = -1);
DeltaCurrent delta_current(const FockSpace& space, const Vec& eps, const Vec& zero,
                           const Interaction& h, int R = -1);

struct ResponseScan {
  std::vector<double> epsilons, delta_j, residuals;
  double slope = 0;  // least squares through the origin
  // log-log fit of |dJ - eps s0| against |eps|, s0 the slope at the smallest
  // |eps|; only entries above the floor count
  double residual_exponent = 0;
  int exponent_points = 0;
  int radius = 0;
  std::vector<std::vector<SeriesPoint>> series;  // R-series per entry
};

// Slope, residuals and residual exponent of an (eps, dJ) table.
void fit_response(ResponseScan& scan, double floor);

ResponseScan linear_response_scan(const Mat& h, const Lattice& lat, const std::vector<double>& eps,
                                  int R = -1, double mu = 0.0, double floor = 1e-12);
ResponseScan linear_response_scan(const FockSpace& space, const Interaction& h,
                                  const std::vector<double>& eps, int R = -1,
                                  double floor = 1e-12);

struct EvolveOptions {
  double tol = 1e-10;  // local error per step
  double h0 = 0.05;    // first step
  Eigen::Index dense_limit = 400;
  // called after every accepted step with (t, sector vector)
  std::function<void(double, const Vec&)> observer;
};

struct Evolution {
  Vec state;  // full Fock vector
  int steps = 0, rejected = 0;
  double max_error = 0;     // largest accepted local error estimate
  double energy_drift = 0;  // |<H0>(t_final) - <H0>(0)|
};

// psi0 -> U(t_final, 0) psi0 for H(t) = H + eps f(eta t) Lambda_1 using the
// fourth-order commutator-free Magnus step with step doubling. psi0 must
// have a fixed particle number. Throws IntegrationError when the step
// collapses and ParamError for t_final > 1/eta under NE.
Evolution adiabatic_evolve(const FockSpace& space, const Interaction& h, const Vec& psi0,
                           double eps, double eta, const SwitchingFunction& f, double t_final,
                           const EvolveOptions& opt = {});

struct PumpResult {
  double delta_q = 0;  // window-restricted Lambda_2 charge moved over the cycle
  Evolution evolution;
};

// One cycle of the CP protocol at eta = eps. The charge counts sites of the
// upper half-plane inside box(origin, R); R < 0 takes the whole lattice.
PumpResult charge_pump(const FockSpace& space, const Interaction& h, const Vec& psi0, double eps,
                       int R = -1, const EvolveOptions& opt = {});

// max over samples of |<psi|[H_eps, A]|psi>| / ||A||_{6,x}, x the center of
// the support of A.
double neass_residual(const FockSpace& space, const Vec& psi, const FockOperator& h_eps,
                      const std::vector<FockOperator>& samples);

}  // namespace hallcond
