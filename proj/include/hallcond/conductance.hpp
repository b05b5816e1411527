#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hallcond/models.hpp"
#include "hallcond/odmap.hpp"

namespace hallcond {

enum class Method { SwitchManyBody, SwitchFree, PositionFree, PositionManyBody };

std::string method_name(Method m);

struct SeriesPoint {
  int radius = 0;
  double value = 0;
};

struct ConductanceReport {
  Method method = Method::SwitchFree;
  double sigma = 0;
  double increment = 0;  // |last - previous| of the series
  bool converged = false;
  std::vector<SeriesPoint> series;
  Site origin;
  std::string weight_id, model_id;
  // switch runs: omega(i[L2^OD, L1^OD]) over the whole lattice, from the
  // summed maps and from the double sum over local terms (free: full trace)
  double global = 0, double_sum = 0;
};

// One-body diagonals of the switch function lambda_j and the position x_j,
// relative to `origin`, repeated over orbitals.
RVec switch_diagonal(const Lattice& lat, int j, const Site& origin);
RVec position_diagonal(const Lattice& lat, int j, const Site& origin);

// k_x: entries of h grouped by the center of their site pair.
std::map<Site, SpMat> one_body_local_terms(const Lattice& lat, const Mat& h);

// -2 Im (p a q b p)_{yy} summed over the orbitals of y, for diagonal a, b.
// Sums to i tr(p [a^od, b^od]) over all sites.
std::vector<double> free_marker(const FermiSea& sea, const Lattice& lat, const RVec& a,
                                const RVec& b, const std::vector<Site>& sites);

struct FreeSwitchOptions {
  std::optional<Site> origin;
  int min_edge_distance = 8;
  double tol = 1e-6;
  bool swap = false;  // Lambda_1 <-> Lambda_2
};

// Marker of i tr(p [lambda_2^od, lambda_1^od]) summed over box(origin, r),
// r = 2, 4, ... while the box stays 4 sites inside the lattice.
ConductanceReport hall_conductance_free(const FermiSea& sea, const Lattice& lat,
                                        const FreeSwitchOptions& opt = {});

struct ManyBodySwitchOptions {
  std::optional<Site> origin;
  bool swap = false;
};

// sigma = omega(i[L2^OD, L1^OD]) computed from the summed maps; the double
// sum over local terms is kept alongside. The series holds the windowed sums
// of (x, y) in box(origin, r) x box(origin, r).
ConductanceReport hall_conductance_mb(const OdContext& ctx,
                                      const ManyBodySwitchOptions& opt = {});

// Free-fermion counterpart of the windowed many-body series, built from the
// one-body local terms of h and the one-body W filter.
std::vector<SeriesPoint> free_switch_windows(const FermiSea& sea, const WeightFunction& w,
                                             const Lattice& lat, const Mat& h,
                                             std::optional<Site> origin = std::nullopt,
                                             bool swap = false);

struct PositionOptions {
  std::optional<Site> origin;  // origin of the position operators
  int min_edge_distance = 8;   // required distance of box(x, k) from the edges
};

// Box average of -2 Im (p x2 q x1 p)_{yy} over box(x, k'), k' = 0..k.
ConductanceReport hall_conductivity_position(const FermiSea& sea, const Lattice& lat, int k,
                                             const Site& x, const PositionOptions& opt = {});
// Box average of omega(i[X2^OD, (X1^OD)_y]).
ConductanceReport hall_conductivity_position(const OdContext& ctx, int k, const Site& x,
                                             const PositionOptions& opt = {});

struct StripeCurrent {
  double value = 0;  // (1/(2k+1)) sum over the windowed stripe
  double total = 0;  // the sum itself
  std::vector<SeriesPoint> series;  // value for k' = 0..k
};

// Terms i[H, Lambda_2]_x over the stripe |x_1| <= k, dropping the 4 columns
// nearest to each edge. The free form evaluates tr(p j_x).
StripeCurrent stripe_current(const Mat& p, const Mat& h, const Lattice& lat, int k);
StripeCurrent stripe_current(const FockSpace& space, const Vec& psi, const Interaction& h, int k);

// One-body current kernel i[k_x, lambda_2] anchored at x.
std::map<Site, SpMat> one_body_current_terms(const Lattice& lat, const Mat& h,
                                             std::optional<Site> origin = std::nullopt);

// Fukui-Hatsugai-Suzuki lattice Chern number of the bands below zero energy.
// Orientation: the sign makes 2 pi sigma = C for hall_conductance_free.
struct ChernResult {
  int chern = 0;
  double raw = 0;  // unrounded sum / 2 pi at the finer grid
  int filled = 0;
  double gap = 0;
};

ChernResult chern_fhs_report(const ModelSpec& spec, int grid);
int chern_fhs(const ModelSpec& spec, int grid);

}  // namespace hallcond
