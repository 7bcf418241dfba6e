#include "kmr/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace kmr {

namespace {

const Complex kI(0.0, 1.0);

CycleComponent end_loop_component(const SurfaceParams& p, const GaussMap& g,
                                  const End& e);

std::vector<Complex> circle_nodes(Complex c, double r, int n, double t0 = 0.0) {
  std::vector<Complex> path;
  path.reserve(n + 1);
  for (int k = 0; k < n; ++k)
    path.push_back(c + std::polar(r, t0 + 2.0 * M_PI * k / n));
  path.push_back(path.front());
  return path;
}

std::vector<Complex> ellipse_nodes(Complex c, double b_horiz, double a_vert,
                                   int n) {
  std::vector<Complex> path;
  path.reserve(n + 1);
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * M_PI * k / n;
    path.push_back(c + Complex(b_horiz * std::cos(t), a_vert * std::sin(t)));
  }
  path.push_back(path.front());
  return path;
}

// chordal distance on the z-sphere; infinite coordinates allowed
double chordal(std::optional<Complex> a, std::optional<Complex> b) {
  if (!a && !b) return 0.0;
  if (!a) std::swap(a, b);
  if (!b) return 2.0 / std::sqrt(1.0 + std::norm(*a));
  return 2.0 * std::abs(*a - *b) /
         std::sqrt((1.0 + std::norm(*a)) * (1.0 + std::norm(*b)));
}

Complex nearest_branch(Complex w0, Complex hint) {
  return (std::abs(w0 - hint) <= std::abs(-w0 - hint)) ? w0 : -w0;
}

// Straight stretches that run close past a branch point are replaced by an
// arc of a safety circle around it, routed through the waypoint on the left
// of the travel direction. A stretch aimed straight at the point therefore
// detours on the side that continues the construction from alpha > 0, the
// same convention the end-lift transport uses near alpha = 0.
std::vector<Complex> flank_branch_points(std::vector<Complex> path,
                                         const SurfaceParams& p) {
  const double excl = p.exclusion_radius();
  const double L = p.lambda;
  for (const Complex b : {Complex(0.0, L), Complex(0.0, -L),
                          Complex(0.0, 1.0 / L), Complex(0.0, -1.0 / L)}) {
    std::vector<Complex> out;
    out.reserve(path.size());
    out.push_back(path.front());
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const Complex a = path[k];
      const Complex c = path[k + 1];
      const double len = std::abs(c - a);
      const double R = std::min(
          8.0 * excl, 0.45 * std::min(std::abs(a - b), std::abs(c - b)));
      if (len == 0.0 || R <= 2.0 * excl) {
        out.push_back(c);
        continue;
      }
      const Complex d = (c - a) / len;
      const Complex rel = (b - a) * std::conj(d);
      const double t = rel.real();
      const double h = rel.imag();
      if (t <= 0.0 || t >= len || std::abs(h) >= R) {
        out.push_back(c);
        continue;
      }
      const double dt = std::sqrt(R * R - h * h);
      const Complex e1 = a + (t - dt) * d;
      const Complex e2 = a + (t + dt) * d;
      const Complex s = b + R * (kI * d);
      out.push_back(e1);
      double base = std::arg(e1 - b);
      for (const double target : {std::arg(s - b), std::arg(e2 - b)}) {
        const double delta = std::remainder(target - base, 2.0 * M_PI);
        const int n = std::max(2, (int)std::ceil(std::abs(delta) / 0.25));
        for (int i = 1; i <= n; ++i)
          out.push_back(b + std::polar(R, base + delta * i / n));
        base = target;
      }
      out.push_back(c);
    }
    path = std::move(out);
  }
  return path;
}

// Sheet-matched lift of the pole: w continued from the positive-w point of
// the radius-r circle at angle 0, along the circle to arg(z_inf) and then
// radially to z_inf.
TorusPoint pole_lift_from_circle(const SurfaceParams& p, Complex z_inf,
                                 double r) {
  const double phi = std::arg(z_inf);
  std::vector<Complex> path;
  const int n = 48;
  for (int k = 0; k <= n; ++k) path.push_back(std::polar(r, phi * k / n));
  path.push_back(z_inf);
  path = flank_branch_points(std::move(path), p);
  const Complex w0 = std::sqrt(curve_rhs(Complex(r, 0.0), p.lambda));
  const auto lift =
      continue_along(path, TorusPoint::finite(path.front(), w0), p);
  return TorusPoint::finite(z_inf, lift.w.back());
}

// loop radius around an end coordinate: a tenth of the distance to the
// nearest branch point, the opposite end, and optionally the circle |z| = r
double end_loop_radius(const SurfaceParams& p, Complex c, Complex other_end,
                       double circle_r) {
  double d = 1e9;
  const double L = p.lambda;
  for (const Complex& b :
       {Complex(0, L), Complex(0, -L), Complex(0, 1.0 / L),
        Complex(0, -1.0 / L)})
    d = std::min(d, std::abs(c - b));
  d = std::min(d, std::abs(c - other_end));
  if (circle_r > 0.0) d = std::min(d, std::abs(std::abs(c) - circle_r));
  return 0.1 * d;
}

CycleComponent loop_component(const SurfaceParams& p, Complex center,
                              double radius, Complex w_hint, double coeff,
                              double t0) {
  CycleComponent comp;
  comp.z_path = circle_nodes(center, radius, 64, t0);
  const Complex w0 = std::sqrt(curve_rhs(comp.z_path.front(), p.lambda));
  comp.start_w = nearest_branch(w0, w_hint);
  comp.coeff = coeff;
  comp.u_chart = false;
  return comp;
}

Cycle make_gamma2(const SurfaceParams& p) {
  const GaussMap g = gauss_coeffs(p);
  const Complex z_inf = gauss_pole(g);
  const Complex z_zero = gauss_zero(g);
  const double r_inf = std::abs(z_inf);   // may be inf at the base point
  const double r_zero = std::abs(z_zero);
  const double L = p.lambda;

  const double m = std::min({0.02, (1.0 - 1.0 / L) / 8.0, (L - 1.0) / 8.0});
  double r = -1.0;
  for (const double cand :
       {1.0, 1.0 - 2.0 * m, 1.0 + 2.0 * m, 1.0 - 4.0 * m, 1.0 + 4.0 * m,
        1.0 - 6.0 * m, 1.0 + 6.0 * m, 1.0 - 8.0 * m, 1.0 + 8.0 * m}) {
    if (cand < 1.0 / L + m || cand > L - m) continue;
    const bool clear_inf = !std::isfinite(r_inf) || std::abs(cand - r_inf) >= m;
    const bool clear_zero = std::abs(cand - r_zero) >= m;
    if (clear_inf && clear_zero) {
      r = cand;
      break;
    }
  }
  if (r < 0.0)
    throw NumericalError("no admissible circle radius near 1", m);

  Cycle c;
  c.name = CycleName::Gamma2;
  CycleComponent circle;
  circle.z_path = circle_nodes(Complex(0, 0), r, 96);
  circle.start_w = std::sqrt(curve_rhs(Complex(r, 0.0), p.lambda));
  circle.coeff = 1.0;
  circle.u_chart = false;
  c.components.push_back(circle);

  // Corrections keep the class transported from the base point: the matched
  // zero lift stays enclosed, the matched pole lift stays outside.
  const bool fire_zero = std::isfinite(r_zero) && r_zero >= r;
  const bool fire_pole = std::isfinite(r_inf) && r_inf < r;
  if (fire_zero || fire_pole) {
    const TorusPoint pole_lift = pole_lift_from_circle(p, z_inf, r);
    if (fire_zero) {
      const TorusPoint zl = apply_symmetry(SymmetryName::CalE, pole_lift);
      const double rl = end_loop_radius(p, zl.z, z_inf, r);
      c.components.push_back(loop_component(p, zl.z, rl, zl.w, 1.0, 0.0));
    }
    if (fire_pole) {
      const double rl = end_loop_radius(p, z_inf, z_zero, r);
      // start the loop where the radial continuation path lands
      const double phi = std::arg(z_inf);
      const Complex from = std::polar(r, phi);
      const double t0 = std::arg(from - z_inf);
      c.components.push_back(loop_component(p, z_inf, rl, pole_lift.w, -1.0, t0));
    }
  }
  return c;
}

Cycle make_gamma1(const SurfaceParams& p) {
  const double L = p.lambda;
  const double excl = p.exclusion_radius();
  const Complex center(0.0, 0.5 * (L + 1.0 / L));
  const GaussMap g = gauss_coeffs(p);

  double d_cap = std::min(0.1, 0.3 / L);
  bool pole_inside = false;
  double pole_h = 0.0;
  if (p.alpha == 0.0 && p.beta > 0.0) {
    pole_h = 1.0 / std::tan(0.5 * p.beta);
    if (pole_h > L)
      d_cap = std::min(d_cap, 0.5 * (pole_h - L));
    else if (pole_h < 1.0 / L)
      d_cap = std::min(d_cap, 0.5 * (1.0 / L - pole_h));
    else
      pole_inside = true;
  }
  if (d_cap < 2.0 * excl)
    throw NumericalError("branch-segment loop cannot clear the ends", d_cap);
  const double a_vert = 0.5 * (L - 1.0 / L) + d_cap;

  double b_horiz = std::min(0.05, 0.25 / L);
  if (p.alpha != 0.0) {
    for (const Complex e : {gauss_pole(g), gauss_zero(g)}) {
      if (!std::isfinite(std::abs(e))) continue;
      if (e.imag() > 1.0 / L - 2.0 * d_cap && e.imag() < L + 2.0 * d_cap)
        b_horiz = std::min(b_horiz, 0.45 * std::abs(e.real()));
    }
  }
  if (b_horiz < 2.0 * excl)
    throw NumericalError("branch-segment loop cannot clear the ends", b_horiz);

  CycleComponent ell;
  ell.z_path = ellipse_nodes(center, b_horiz, a_vert, 256);
  ell.start_w = std::sqrt(curve_rhs(ell.z_path.front(), p.lambda));
  ell.coeff = 1.0;
  ell.u_chart = false;

  Cycle c;
  c.name = CycleName::Gamma1;
  c.components.push_back(ell);

  if (pole_inside) {
    // alpha -> 0+ convention: the pole lift is reached from the start of the
    // ellipse through the right half plane
    const Complex z_inf(0.0, pole_h);
    const double rl = end_loop_radius(p, z_inf, gauss_zero(g), 0.0);
    const std::vector<Complex> approach = flank_branch_points(
        {ell.z_path.front(), Complex(b_horiz, pole_h),
         z_inf + Complex(rl, 0.0)},
        p);
    const auto lift = continue_along(
        approach, TorusPoint::finite(approach.front(), ell.start_w), p);
    CycleComponent loop;
    loop.z_path = circle_nodes(z_inf, rl, 64, 0.0);
    loop.start_w = lift.w.back();
    loop.coeff = -1.0;
    loop.u_chart = false;
    c.components.push_back(loop);
  }

  // orientation pinned by the sign of the height period
  Cycle probe;
  probe.name = CycleName::Gamma1;
  probe.components.push_back(ell);
  const CVec<3> ints = cycle_forms_integral(probe, p, g);
  if (ints[0].real() > 0.0)
    for (auto& comp : c.components) comp.coeff = -comp.coeff;

  // The bare branch-segment cycle carries the opposite horizontal flux.
  // Adding the loops around the second zero and the second pole gives the
  // class with F = -F_A without touching any period component.
  const EndSet E = ends(p);
  c.components.push_back(end_loop_component(p, g, E.Ap));
  c.components.push_back(end_loop_component(p, g, E.App));
  return c;
}

CycleComponent end_loop_component(const SurfaceParams& p, const GaussMap& g,
                                  const End& e) {
  // spherical separation of the six special points
  std::vector<std::optional<Complex>> pts;
  const Complex zi = gauss_pole(g);
  pts.push_back(std::isfinite(std::abs(zi)) ? std::optional<Complex>(zi)
                                            : std::nullopt);
  pts.push_back(gauss_zero(g));
  const double L = p.lambda;
  pts.push_back(Complex(0, L));
  pts.push_back(Complex(0, -L));
  pts.push_back(Complex(0, 1.0 / L));
  pts.push_back(Complex(0, -1.0 / L));
  double dmin = 4.0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      dmin = std::min(dmin, chordal(pts[i], pts[j]));
  const double r_sph = 0.1 * dmin;

  const Complex c0 = e.point.z;
  const double r_euc = r_sph * (1.0 + std::norm(c0)) / 2.0;

  CycleComponent comp;
  comp.z_path = circle_nodes(c0, r_euc, 64);
  comp.u_chart = e.point.at_infinity;
  const Complex w0 =
      std::sqrt(comp.u_chart ? curve_rhs_u(comp.z_path.front(), p.lambda)
                             : curve_rhs(comp.z_path.front(), p.lambda));
  comp.start_w = nearest_branch(w0, e.point.w);
  comp.coeff = 1.0;
  return comp;
}

Cycle make_end_loop(CycleName name, const SurfaceParams& p) {
  const EndSet E = ends(p);
  const End* e = nullptr;
  switch (name) {
    case CycleName::GammaA: e = &E.A; break;
    case CycleName::GammaAPrime: e = &E.Ap; break;
    case CycleName::GammaADoublePrime: e = &E.App; break;
    case CycleName::GammaATriplePrime: e = &E.Appp; break;
    default: break;
  }
  Cycle c;
  c.name = name;
  c.components.push_back(end_loop_component(p, gauss_coeffs(p), *e));
  return c;
}

}  // namespace

std::string to_string(CycleName n) {
  switch (n) {
    case CycleName::GammaA: return "gammaA";
    case CycleName::GammaAPrime: return "gammaAprime";
    case CycleName::GammaADoublePrime: return "gammaAdoubleprime";
    case CycleName::GammaATriplePrime: return "gammaAtripleprime";
    case CycleName::Gamma1: return "gamma1";
    case CycleName::Gamma2: return "gamma2";
  }
  return "";
}

CycleName cycle_name_of(const std::string& s) {
  for (const CycleName n :
       {CycleName::GammaA, CycleName::GammaAPrime,
        CycleName::GammaADoublePrime, CycleName::GammaATriplePrime,
        CycleName::Gamma1, CycleName::Gamma2})
    if (to_string(n) == s) return n;
  throw DomainError("unknown cycle name: " + s);
}

Cycle make_cycle(CycleName name, const SurfaceParams& p) {
  switch (name) {
    case CycleName::Gamma2: return make_gamma2(p);
    case CycleName::Gamma1: return make_gamma1(p);
    default: return make_end_loop(name, p);
  }
}

CVec<3> cycle_forms_integral(const Cycle& c, const SurfaceParams& p,
                             const GaussMap& g, const QuadratureSettings& s) {
  CVec<3> total{};
  for (const auto& comp : c.components) {
    const LiftedPath lift =
        comp.u_chart
            ? continue_along_u(comp.z_path, comp.start_w, p)
            : continue_along(comp.z_path,
                             TorusPoint::finite(comp.z_path.front(),
                                                comp.start_w),
                             p);
    if (!lift.closed())
      throw NumericalError("cycle component lift is not closed",
                           std::abs(lift.w.back() - lift.w.front()));
    total += comp.coeff * forms_along(lift, p, g, s);
  }
  return total;
}

CVec<3> forms_along(const LiftedPath& lift, const SurfaceParams& p,
                    const GaussMap& g, const QuadratureSettings& s) {
  CVec<3> acc{};
  for (size_t k = 0; k + 1 < lift.z.size(); ++k) {
    const Complex z0 = lift.z[k];
    const Complex dz = lift.z[k + 1] - z0;
    if (dz == Complex(0.0, 0.0)) continue;
    const Complex w0 = lift.w[k], w1 = lift.w[k + 1];
    auto f = [&](double t) -> CVec<3> {
      const Complex zeta = z0 + t * dz;
      const Complex wl = (1.0 - t) * w0 + t * w1;
      const Complex wc = std::sqrt(lift.u_chart ? curve_rhs_u(zeta, p.lambda)
                                                : curve_rhs(zeta, p.lambda));
      const Complex w = nearest_branch(wc, wl);
      const FormValues fv = forms_at(p, g, zeta, w, lift.u_chart);
      CVec<3> out;
      out[0] = fv.dh * dz;
      out[1] = fv.dh_over_g * dz;
      out[2] = fv.g_dh * dz;
      return out;
    };
    const auto r = integrate_adaptive<CVec<3>>(f, 0.0, 1.0, s);
    if (!r.converged)
      throw NumericalError("path quadrature did not converge", r.error);
    acc += r.value;
  }
  return acc;
}

}  // namespace kmr
