#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hallcond/linalg.hpp"

namespace hallcond {

// Odd filter W with Fourier transform -i (1 - chi(k)) / (sqrt(2 pi) k), where
// chi(k) = 1 - S_m(k^2 / g^2) is a C^m bump supported in [-g, g]. Only s >= 0
// is stored; W(-s) = -W(s).
class WeightFunction {
 public:
  double g() const { return g_; }
  int order() const { return order_; }
  double T() const { return T_; }
  double ds() const { return ds_; }
  double scale() const { return scale_; }
  // samples at s_j = j ds, j = 0..N; values()[0] = W(0) = 0
  const RVec& values() const { return values_; }

  double chi(double k) const;
  // W(s) for any real s, by Gauss-Legendre in k
  double operator()(double s) const;
  // exact filter 1 - chi(delta); 0 at delta = 0
  double phi_spectral(double delta) const;
  // -i delta int W(s) exp(i s delta) ds from the stored samples (Filon-Simpson);
  // err receives an estimate of the discretization and truncation error
  double phi_quadrature(double delta, double* err = nullptr) const;
  // sqrt(2 pi) k What(k) reconstructed from the samples
  cplx fourier_times_k(double k) const;

  WeightFunction scaled(double c) const;
  // same W and T on a finer or coarser grid
  WeightFunction resampled(double ds) const;

  friend WeightFunction build_weight(double g, int order, double T, double ds);

 private:
  double filon(double omega, int stride) const;
  void sample(double T, double ds);

  double g_ = 1, T_ = 0, ds_ = 0, scale_ = 1, tail_ = 0;
  int order_ = 8;
  RVec values_;
  std::vector<double> coeff_;
};

// T <= 0 and ds <= 0 select 200/g and 0.02/g
WeightFunction build_weight(double g, int order = 8, double T = 0, double ds = 0);

// phi_quadrature tabulated on [0, delta_max] with spacing g/256 and read back
// through a cubic B-spline; phi is even in delta. W is resampled first when
// delta_max ds > 2.5. Beyond delta_max it falls back to direct evaluation.
class PhiTable {
 public:
  PhiTable(const WeightFunction& w, double delta_max);
  double operator()(double delta, double* err = nullptr) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

struct WeightCheck {
  std::string name;
  bool pass = false;
  double value = 0;  // worst violation or measured constant
};

struct WeightReport {
  double g = 0, T = 0, ds = 0;
  int order = 0;
  double tail = 0;  // |W(T)|
  std::vector<double> decay_constants;  // sup |s|^n |W(s)| for n = 0..order
  std::vector<WeightCheck> checks;
  bool pass() const;
};

// default k samples: 64 log-spaced points in [g, 40 g] plus g/2 (exempt)
WeightReport verify_weight(const WeightFunction& w, std::vector<double> k_samples = {},
                           double fourier_tol = 1e-6);

}  // namespace hallcond
