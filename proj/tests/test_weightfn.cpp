#include "doctest.h"

#include <cmath>

#include "hallcond/errors.hpp"
#include "hallcond/weightfn.hpp"

using namespace hallcond;

TEST_CASE("parameter guards") {
  CHECK_THROWS_AS(build_weight(0.0), ParamError);
  CHECK_THROWS_AS(build_weight(1.0, 1), ParamError);
  CHECK_THROWS_AS(build_weight(1.0, 6, 10.0), ParamError);
  CHECK_THROWS_AS(build_weight(1.0, 6, 40.0, 0.1), ParamError);
  CHECK_NOTHROW(build_weight(2.0, 6, 10.0, 0.025));
}

TEST_CASE("bump and filter shape") {
  WeightFunction w = build_weight(0.5);
  CHECK(w.chi(0) == 1.0);
  CHECK(w.chi(0.5) == 0.0);
  CHECK(w.chi(-0.7) == 0.0);
  CHECK(w.chi(0.2) == w.chi(-0.2));
  CHECK(w.phi_spectral(0) == 0.0);
  CHECK(w.phi_spectral(0.5) == 1.0);
  double prev = 0;
  for (int i = 1; i <= 50; ++i) {
    double v = w.phi_spectral(0.01 * i);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("W is odd with W(0) = 0") {
  WeightFunction w = build_weight(1.0);
  CHECK(w(0) == 0.0);
  CHECK(w.values()(0) == 0.0);
  for (double s : {0.01, 0.3, 2.0, 17.5}) CHECK(w(-s) == -w(s));
  // right limit at 0 is 1/2
  CHECK(w(1e-6) == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("Fourier transform outside the gap") {
  for (double g : {1.0, 0.3}) {
    WeightFunction w = build_weight(g);
    cplx target(0, -1.0 / (std::sqrt(2 * std::numbers::pi) * 2 * g));
    cplx what = w.fourier_times_k(2 * g) / (std::sqrt(2 * std::numbers::pi) * 2 * g);
    CHECK(std::abs(what - target) <= 1e-6 * std::abs(target));
  }
}

TEST_CASE("filter identity on resolved transitions") {
  WeightFunction w = build_weight(1.0);
  double worst = 0, est = 0;
  for (int i = 0; i < 200; ++i) {
    double d = std::pow(40.0, i / 199.0);
    double e = 0;
    worst = std::max(worst, std::abs(w.phi_quadrature(d, &e) - 1.0));
    worst = std::max(worst, std::abs(w.phi_quadrature(-d) - 1.0));
    est = std::max(est, e);
  }
  MESSAGE("worst filter error " << worst << ", self-estimate " << est);
  CHECK(worst <= 1e-6);
  CHECK(w.phi_quadrature(0) == 0.0);
  CHECK(std::abs(w.phi_quadrature(1e-6)) < 1e-9);
  // in-band values follow the bump
  for (double d : {0.2, 0.5, 0.8}) CHECK(std::abs(w.phi_quadrature(d) - w.phi_spectral(d)) < 1e-6);
}

TEST_CASE("verification report") {
  WeightFunction w = build_weight(1.0);
  WeightReport rep = verify_weight(w);
  for (const WeightCheck& c : rep.checks) {
    INFO(c.name << " " << c.value);
    CHECK(c.pass);
  }
  CHECK(rep.decay_constants.size() == std::size_t(w.order()) + 1);
  MESSAGE("decay constant n=" << w.order() << ": " << rep.decay_constants.back() << ", |W(T)| = " << rep.tail);

  WeightReport bad = verify_weight(w.scaled(2.0));
  CHECK(bad.checks[0].pass);
  CHECK_FALSE(bad.checks[1].pass);

  // k inside the gap is exempt
  WeightReport inside = verify_weight(w.scaled(2.0), {0.5});
  CHECK(inside.checks[1].pass);
}

TEST_CASE("tabulated quadrature filter") {
  WeightFunction w = build_weight(1.0);
  PhiTable small(w, 40.0);
  double worst = 0;
  for (int i = 0; i <= 4000; ++i) {
    double d = 0.01 * i;
    worst = std::max(worst, std::abs(small(d) - w.phi_quadrature(d)));
    CHECK(small(-d) == small(d));
  }
  CHECK(worst < 1e-8);
  CHECK(small(0) == 0.0);
  // delta ds = pi is a Filon resonance for the default grid; the table resamples
  PhiTable wide(w, 200.0);
  double res = 0;
  for (double d = 150; d < 165; d += 0.01) res = std::max(res, std::abs(wide(d) - 1.0));
  CHECK(res < 1e-7);
}
