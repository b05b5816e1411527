#include "hallcond/weightfn.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <cmath>
#include <numbers>

#include "hallcond/errors.hpp"

namespace hallcond {

namespace {

// S_m(t) = t^{m+1} sum_{j=0}^{m} C(m+j, j) C(2m+1, m-j) (-t)^j;
// its first m derivatives vanish at t = 0 and t = 1.
std::vector<double> smoothstep_coefficients(int m) {
  std::vector<double> c(m + 1);
  for (int j = 0; j <= m; ++j)
    c[j] = boost::math::binomial_coefficient<double>(m + j, j) *
           boost::math::binomial_coefficient<double>(2 * m + 1, m - j) * (j % 2 ? -1 : 1);
  return c;
}

double smoothstep(const std::vector<double>& c, double t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  double s = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * t + *it;
  return std::pow(t, double(c.size())) * s;
}

}  // namespace

double WeightFunction::chi(double k) const {
  return 1.0 - smoothstep(coeff_, (k * k) / (g_ * g_));
}

double WeightFunction::operator()(double s) const {
  if (s == 0) return 0;
  if (s < 0) return -(*this)(-s);
  // W(s) = 1/2 - (1/pi) int_0^g chi(k) sin(ks)/k dk
  auto f = [&](double k) { return k == 0 ? s : chi(k) * std::sin(k * s) / k; };
  const int panels = 16;
  double acc = 0;
  for (int p = 0; p < panels; ++p) {
    double a = g_ * p / panels, b = g_ * (p + 1) / panels;
    acc += boost::math::quadrature::gauss<double, 30>::integrate(f, a, b);
  }
  return scale_ * (0.5 - acc / std::numbers::pi);
}

double WeightFunction::phi_spectral(double delta) const { return 1.0 - chi(delta); }

double WeightFunction::filon(double omega, int stride) const {
  // int_0^T f(s) sin(omega s) ds with f(0) = W(0+)
  const double h = ds_ * stride;
  const Eigen::Index n = (values_.size() - 1) / stride;
  auto f = [&](Eigen::Index j) { return j == 0 ? 0.5 * scale_ : values_(j * stride); };
  const double th = omega * h;
  double al, be, ga;
  if (std::abs(th) < 1.0 / 6) {
    const double t2 = th * th, t3 = t2 * th;
    al = 2 * t3 / 45 - 2 * t3 * t2 / 315 + 2 * t3 * t2 * t2 / 4725;
    be = 2.0 / 3 + 2 * t2 / 15 - 4 * t2 * t2 / 105 + 2 * t2 * t2 * t2 / 567;
    ga = 4.0 / 3 - 2 * t2 / 15 + t2 * t2 / 210 - t2 * t2 * t2 / 11340;
  } else {
    const double s = std::sin(th), c = std::cos(th), t3 = th * th * th;
    al = (th * th + th * s * c - 2 * s * s) / t3;
    be = 2 * (th * (1 + c * c) - 2 * s * c) / t3;
    ga = 4 * (s - th * c) / t3;
  }
  const double T = h * n;
  // sin(omega s_j) by rotation, re-anchored every 64 steps
  const cplx step = std::polar(1.0, th);
  double even = 0, odd = 0;
  cplx z;
  for (Eigen::Index j = 0; j <= n; ++j) {
    if (j % 64 == 0) z = std::polar(1.0, th * double(j));
    double v = f(j) * z.imag();
    if (j % 2 == 0)
      even += v;
    else
      odd += v;
    z *= step;
  }
  even -= 0.5 * (f(n) * std::sin(omega * T));
  return h * (al * (f(0) - f(n) * std::cos(omega * T)) + be * even + ga * odd);
}

double WeightFunction::phi_quadrature(double delta, double* err) const {
  if (delta == 0) {
    if (err) *err = 0;
    return 0;
  }
  // W odd: -i delta int W e^{is delta} ds = 2 delta int_0^inf W sin(s delta) ds
  double fine = 2 * delta * filon(delta, 1);
  // discretization from the 2 ds rule, truncation from the envelope of W near T
  if (err) *err = std::abs(fine - 2 * delta * filon(delta, 2)) / 15 + 2 * tail_;
  return fine;
}

cplx WeightFunction::fourier_times_k(double k) const {
  // sqrt(2 pi) What(k) = int W e^{-iks} ds = -2i int_0^inf W sin(ks) ds
  if (k == 0) return 0;
  return cplx(0, -2 * k * filon(k, 1));
}

WeightFunction WeightFunction::scaled(double c) const {
  WeightFunction w = *this;
  w.scale_ *= c;
  w.values_ *= c;
  w.tail_ *= std::abs(c);
  return w;
}

WeightFunction build_weight(double g, int order, double T, double ds) {
  if (!(g > 0)) throw ParamError("g must be positive");
  if (order < 2) throw ParamError("smoothness order must be at least 2");
  if (T <= 0) T = 200 / g;
  if (ds <= 0) ds = 0.02 / g;
  if (T * g < 20) throw ParamError("T g = " + std::to_string(T * g) + " < 20");
  if (ds * g > 0.05) throw ParamError("ds g = " + std::to_string(ds * g) + " > 0.05");
  WeightFunction w;
  w.g_ = g;
  w.order_ = order;
  w.coeff_ = smoothstep_coefficients(order);
  w.sample(T, ds);
  return w;
}

void WeightFunction::sample(double T, double ds) {
  // the Filon rule and its 2 ds comparison need a multiple of 4 intervals
  Eigen::Index n = static_cast<Eigen::Index>(std::ceil(T / ds));
  n = (n + 3) / 4 * 4;
  ds_ = ds;
  T_ = n * ds;
  values_.resize(n + 1);
  for (Eigen::Index j = 0; j <= n; ++j) values_(j) = (*this)(j * ds);
  tail_ = values_.tail(n / 10).cwiseAbs().maxCoeff();
}

WeightFunction WeightFunction::resampled(double ds) const {
  WeightFunction w = *this;
  w.sample(T_, ds);
  return w;
}

struct PhiTable::Impl {
  WeightFunction w;
  double step = 0, max = 0;
  std::vector<double> err;
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
};

PhiTable::PhiTable(const WeightFunction& w, double delta_max) {
  auto impl = std::make_shared<Impl>();
  // Filon loses accuracy when delta ds approaches pi; keep delta ds <= 2.5
  impl->w = delta_max * w.ds() > 2.5 ? w.resampled(2.5 / delta_max) : w;
  impl->step = w.g() / 256;
  const auto n = static_cast<std::size_t>(std::ceil(std::max(delta_max, w.g()) / impl->step)) + 1;
  impl->max = impl->step * double(n - 1);
  std::vector<double> v(n);
  impl->err.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = impl->w.phi_quadrature(impl->step * double(i), &impl->err[i]);
  impl->spline = boost::math::interpolators::cardinal_cubic_b_spline<double>(
      v.begin(), v.end(), 0.0, impl->step, 0.0, 0.0);
  impl_ = std::move(impl);
}

double PhiTable::operator()(double delta, double* err) const {
  const double d = std::abs(delta);
  if (d > impl_->max) return impl_->w.phi_quadrature(d, err);
  if (err) {
    auto i = static_cast<std::size_t>(d / impl_->step);
    *err = std::max(impl_->err[i], impl_->err[std::min(i + 1, impl_->err.size() - 1)]);
  }
  return d == 0 ? 0.0 : impl_->spline(d);
}

bool WeightReport::pass() const {
  for (const WeightCheck& c : checks)
    if (!c.pass) return false;
  return true;
}

WeightReport verify_weight(const WeightFunction& w, std::vector<double> k_samples,
                           double fourier_tol) {
  WeightReport rep;
  rep.g = w.g();
  rep.T = w.T();
  rep.ds = w.ds();
  rep.order = w.order();
  const RVec& v = w.values();
  const Eigen::Index n = v.size() - 1;
  rep.tail = std::abs(v(n));

  double odd = std::abs(w(0));
  for (Eigen::Index j = 1; j <= n; j += std::max<Eigen::Index>(1, n / 50))
    odd = std::max(odd, std::abs(w(-j * w.ds()) + v(j)));
  rep.checks.push_back({"oddness", odd == 0.0, odd});

  if (k_samples.empty()) {
    for (int i = 0; i < 64; ++i) k_samples.push_back(w.g() * std::pow(40.0, i / 63.0));
    k_samples.push_back(0.5 * w.g());
  }
  double worst = 0;
  for (double k : k_samples) {
    if (std::abs(k) < w.g()) continue;
    worst = std::max(worst, std::abs(w.fourier_times_k(k) + cplx(0, 1)));
  }
  rep.checks.push_back({"fourier", worst <= fourier_tol, worst});

  // polynomial decay: the sup of |s|^n |W| over the outer half of the grid
  // must not exceed the sup over the inner half
  bool decay = true;
  double ratio = 0;
  for (int p = 0; p <= w.order(); ++p) {
    double inner = 0, outer = 0;
    for (Eigen::Index j = 1; j <= n; ++j) {
      double s = j * w.ds();
      double x = std::pow(s, p) * std::abs(v(j));
      (2 * j <= n ? inner : outer) = std::max(2 * j <= n ? inner : outer, x);
    }
    rep.decay_constants.push_back(std::max(inner, outer));
    ratio = std::max(ratio, outer / inner);
    decay = decay && outer <= inner;
  }
  rep.checks.push_back({"decay", decay, ratio});
  return rep;
}

}  // namespace hallcond
