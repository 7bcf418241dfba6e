#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "kmr/errors.hpp"

namespace kmr {

using Complex = std::complex<double>;

struct QuadratureSettings {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;
  bool endpoint_singular = false;  // selects the double-exponential scheme

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
      throw DomainError("quadrature tolerances must be strictly positive");
    if (max_subdivisions < 1)
      throw DomainError("max_subdivisions must be >= 1");
  }
};

// Small fixed-size complex vector so several 1-forms can be integrated in one
// adaptive pass with a shared error estimate.
template <int N>
struct CVec {
  std::array<Complex, N> v{};

  Complex& operator[](int i) { return v[static_cast<size_t>(i)]; }
  const Complex& operator[](int i) const { return v[static_cast<size_t>(i)]; }

  CVec& operator+=(const CVec& o) {
    for (int i = 0; i < N; ++i) v[i] += o.v[i];
    return *this;
  }
  CVec& operator-=(const CVec& o) {
    for (int i = 0; i < N; ++i) v[i] -= o.v[i];
    return *this;
  }
  friend CVec operator+(CVec a, const CVec& b) { return a += b; }
  friend CVec operator-(CVec a, const CVec& b) { return a -= b; }
  friend CVec operator*(double s, CVec a) {
    for (int i = 0; i < N; ++i) a.v[i] *= s;
    return a;
  }
  friend CVec operator*(Complex s, CVec a) {
    for (int i = 0; i < N; ++i) a.v[i] *= s;
    return a;
  }
};

inline double vnorm(double x) { return std::fabs(x); }
inline double vnorm(const Complex& z) { return std::abs(z); }
template <int N>
double vnorm(const CVec<N>& c) {
  double m = 0.0;
  for (int i = 0; i < N; ++i) m = std::max(m, std::abs(c.v[i]));
  return m;
}

template <class V>
struct IntegralResult {
  V value{};
  double error = 0.0;  // achieved error estimate
  int panels = 0;
  bool converged = false;
};

namespace qk {

// Gauss 7 / Kronrod 15 nodes and weights on [-1,1] (positive half; symmetric).
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace qk

// One Gauss-Kronrod 7-15 panel. Returns the Kronrod value and |K15-G7| as the
// error estimate.
template <class V, class F>
std::pair<V, double> gk15_panel(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  V resk{};
  V resg{};
  // center node
  {
    V fc = f(c);
    resk += qk::wgk[7] * fc;
    resg += qk::wg[3] * fc;
  }
  for (int j = 0; j < 7; ++j) {
    V f1 = f(c - h * qk::xgk[j]);
    V f2 = f(c + h * qk::xgk[j]);
    V fsum = f1 + f2;
    resk += qk::wgk[j] * fsum;
    if (j % 2 == 1) resg += qk::wg[j / 2] * fsum;  // j=1,3,5 -> Gauss nodes
  }
  resk = h * resk;
  resg = h * resg;
  return {resk, vnorm(resk - resg)};
}

// Globally adaptive bisection driven by per-panel Kronrod error estimates.
template <class V, class F>
IntegralResult<V> integrate_adaptive(F&& f, double a, double b,
                                     const QuadratureSettings& s = {}) {
  s.validate();
  struct Panel {
    double a, b, err;
    V value;
  };
  auto make_panel = [&](double pa, double pb) {
    auto [val, err] = gk15_panel<V>(f, pa, pb);
    return Panel{pa, pb, err, val};
  };

  std::vector<Panel> panels;
  panels.push_back(make_panel(a, b));

  for (int iter = 0; iter < s.max_subdivisions; ++iter) {
    V total{};
    double total_err = 0.0;
    size_t worst = 0;
    for (size_t i = 0; i < panels.size(); ++i) {
      total += panels[i].value;
      total_err += panels[i].err;
      if (panels[i].err > panels[worst].err) worst = i;
    }
    const double tol = std::max(s.abs_tol, s.rel_tol * vnorm(total));
    if (total_err <= tol) {
      return {total, total_err, static_cast<int>(panels.size()), true};
    }
    Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    panels[worst] = make_panel(p.a, mid);
    panels.push_back(make_panel(mid, p.b));
  }

  V total{};
  double total_err = 0.0;
  for (const auto& p : panels) {
    total += p.value;
    total_err += p.err;
  }
  return {total, total_err, static_cast<int>(panels.size()), false};
}

// Double-exponential (tanh-sinh) quadrature on [a,b] for integrands with
// integrable endpoint singularities. The integrand receives (x, xc) where
// xc = x-a for nodes in the left half and x-b in the right half, so |xc| is
// the distance to the nearest endpoint computed without cancellation. Factors
// like (b-x) must be evaluated through xc or they round to zero before the
// node weights become negligible.
template <class F2>
IntegralResult<double> integrate_tanh_sinh(F2&& f, double a, double b,
                                           const QuadratureSettings& s = {}) {
  s.validate();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double u_max = 5.0;
  const int max_level = 12;

  constexpr double half_pi = 1.5707963267948966;

  // term at parameter u plus its mirror at -u; returns false once the weight
  // has decayed to nothing or the endpoint distance underflows.
  auto node_pair = [&](double u, double& out) -> bool {
    const double y = half_pi * std::sinh(u);
    const double ed = std::exp(-2.0 * y);
    const double t = (1.0 - ed) / (1.0 + ed);  // tanh(y), stable for y >= 0
    const double dist = 2.0 * h * ed / (1.0 + ed);  // h*(1-t) without rounding
    const double w = h * half_pi * std::cosh(u) / std::pow(std::cosh(y), 2);
    if (!(dist > 0.0) || w < 1e-320) return false;
    const double xr = c + h * t;  // right-half node, xc = x-b = -dist
    const double xl = c - h * t;  // left-half node, xc = x-a = +dist
    out = w * (f(xr, -dist) + f(xl, dist));
    return true;
  };

  // level 0: spacing 1
  double sum = h * half_pi * f(c, h);  // u=0 node, distance h to each endpoint
  for (double u = 1.0; u <= u_max; u += 1.0) {
    double term;
    if (!node_pair(u, term)) break;
    sum += term;
    if (std::fabs(term) < 1e-300) break;
  }
  double integral = sum;  // h_u = 1
  double prev = integral;
  double err = vnorm(integral);

  for (int level = 1; level <= max_level; ++level) {
    const double hu = std::ldexp(1.0, -level);
    double newsum = 0.0;
    for (double u = hu; u <= u_max; u += 2.0 * hu) {
      double term;
      if (!node_pair(u, term)) break;
      newsum += term;
    }
    integral = 0.5 * prev + hu * newsum;
    err = std::fabs(integral - prev);
    const double tol = std::max(s.abs_tol, s.rel_tol * std::fabs(integral));
    if (level >= 3 && err <= tol) {
      return {integral, err, 1 << level, true};
    }
    prev = integral;
  }
  return {integral, err, 1 << max_level, false};
}

// --- public wrappers ---

// Definite integral of a real function. Throws NumericalError when the
// requested tolerance is not met within max_subdivisions.
template <class F>
double integrate_real(F&& f, double a, double b,
                      const QuadratureSettings& s = {}) {
  IntegralResult<double> r;
  if (s.endpoint_singular) {
    r = integrate_tanh_sinh([&f](double x, double) { return f(x); }, a, b, s);
  } else {
    r = integrate_adaptive<double>([&f](double x) { return f(x); }, a, b, s);
  }
  if (!r.converged)
    throw NumericalError("quadrature did not converge; achieved error " +
                             std::to_string(r.error),
                         r.error);
  return r.value;
}

// Contour integral of f(z) dz along a polyline through the given vertices.
template <class F>
Complex integrate_path(F&& f, const std::vector<Complex>& path,
                       const QuadratureSettings& s = {}) {
  Complex total = 0.0;
  for (size_t k = 0; k + 1 < path.size(); ++k) {
    const Complex z0 = path[k], dz = path[k + 1] - path[k];
    auto r = integrate_adaptive<Complex>(
        [&](double t) { return f(z0 + t * dz) * dz; }, 0.0, 1.0, s);
    if (!r.converged)
      throw NumericalError("path quadrature did not converge on segment " +
                               std::to_string(k),
                           r.error);
    total += r.value;
  }
  return total;
}

}  // namespace kmr
