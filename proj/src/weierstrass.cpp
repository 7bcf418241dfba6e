#include "kmr/weierstrass.hpp"

#include <cmath>

namespace kmr {

namespace {
const Complex kI(0.0, 1.0);
}

GaussMap gauss_coeffs(double alpha, double beta) {
  GaussMap g;
  g.sigma = Complex(std::cos(0.5 * (alpha + beta)), std::cos(0.5 * (alpha - beta)));
  g.delta = Complex(std::sin(0.5 * (alpha - beta)), std::sin(0.5 * (alpha + beta)));
  return g;
}

GaussMap gauss_coeffs(const SurfaceParams& p) {
  return gauss_coeffs(p.alpha, p.beta);
}

Complex gauss_value(const GaussMap& g, const TorusPoint& pt) {
  if (pt.at_infinity)
    return (g.sigma + g.delta * pt.z) /
           (kI * (std::conj(g.sigma) * pt.z - std::conj(g.delta)));
  return (g.sigma * pt.z + g.delta) /
         (kI * (std::conj(g.sigma) - std::conj(g.delta) * pt.z));
}

Complex gauss_derivative(const GaussMap& g, Complex z) {
  const Complex d = std::conj(g.sigma) - std::conj(g.delta) * z;
  return -2.0 * kI / (d * d);
}

Complex gauss_zero(const GaussMap& g) { return -g.delta / g.sigma; }

Complex gauss_pole(const GaussMap& g) {
  return std::conj(g.sigma) / std::conj(g.delta);
}

std::vector<std::array<double, 2>> parameter_path(const SurfaceParams& p) {
  const double a = p.alpha, b = p.beta;
  // Near alpha = 0 the moving pole runs down the imaginary axis and would
  // pass through a branch point when beta crosses theta or pi - theta; a
  // detour at alpha = 0.3 keeps it clear.
  if (std::abs(a) < 0.05 && b > p.theta - 0.05)
    return {{0.0, 0.0}, {0.3, 0.0}, {0.3, b}, {a, b}};
  return {{0.0, 0.0}, {a, 0.0}, {a, b}};
}

namespace {

TorusPoint normalize_chart(TorusPoint p) {
  if (std::abs(p.z) <= 1.0) return p;
  const Complex c = 1.0 / p.z;
  // w and wtilde differ by the factor u^2 in both directions
  return {c, p.w * c * c, !p.at_infinity};
}

// Continue the marked pole lift (infinity, wtilde = +1) at the base point
// along the parameter path to p, tracking the w value of the moving pole.
TorusPoint transported_pole(const SurfaceParams& P) {
  const auto wps = parameter_path(P);
  const double L = P.lambda;
  const double excl = P.exclusion_radius();
  const std::array<Complex, 4> bset = {Complex(0, L), Complex(0, -L),
                                       Complex(0, 1.0 / L),
                                       Complex(0, -1.0 / L)};
  bool uch = true;
  Complex coord(0.0, 0.0), wv(1.0, 0.0);

  for (size_t leg = 0; leg + 1 < wps.size(); ++leg) {
    const double a0 = wps[leg][0], b0 = wps[leg][1];
    const double a1 = wps[leg + 1][0], b1 = wps[leg + 1][1];
    if (a0 == a1 && b0 == b1) continue;
    double s = 0.0, ds = 1.0 / 64.0;
    while (s < 1.0) {
      const double sn = std::min(1.0, s + ds);
      const GaussMap G = gauss_coeffs(a0 + (a1 - a0) * sn, b0 + (b1 - b0) * sn);
      const Complex zi = gauss_pole(G);
      const Complex tgt = uch ? 1.0 / zi : zi;
      const Complex w0 =
          std::sqrt(uch ? curve_rhs_u(tgt, L) : curve_rhs(tgt, L));
      const Complex cand = (std::abs(w0 - wv) <= std::abs(-w0 - wv)) ? w0 : -w0;
      const double move = std::abs(cand - wv);
      if (move > 0.3 * std::max(std::abs(cand), std::abs(wv))) {
        ds *= 0.5;
        if (ds < 1e-7)
          throw NumericalError("end transport failed to refine", move);
        continue;
      }
      for (const auto& bp : bset) {
        const double d = std::abs(tgt - bp);
        if (d < excl)
          throw NumericalError(
              "end transport passes a branch-point exclusion disk", d);
      }
      coord = tgt;
      wv = cand;
      s = sn;
      ds = std::min(0.25, ds * 1.7);
      const double az = std::abs(zi);
      if (uch && az < 0.95) {
        wv = wv / (coord * coord);
        coord = 1.0 / coord;
        uch = false;
      } else if (!uch && az > 1.05) {
        const Complex u = 1.0 / coord;
        wv = wv * u * u;
        coord = u;
        uch = true;
      }
    }
  }
  return normalize_chart(TorusPoint{coord, wv, uch});
}

}  // namespace

std::array<const End*, 4> EndSet::marked() const {
  return {&Appp, &Ap, &A, &App};
}

EndSet ends(const SurfaceParams& p) {
  const TorusPoint A_pt = transported_pole(p);
  // the marked pole coordinate must agree with the coefficient formula
  {
    const GaussMap G = gauss_coeffs(p);
    const Complex expect = A_pt.at_infinity
                               ? std::conj(G.delta) / std::conj(G.sigma)
                               : gauss_pole(G);
    if (std::abs(A_pt.z - expect) > 1e-9)
      throw NumericalError("transported end left the pole locus",
                           std::abs(A_pt.z - expect));
  }
  EndSet s{
      {A_pt, true, "A"},
      {normalize_chart(deck(A_pt)), true, "A''"},
      {normalize_chart(apply_symmetry(SymmetryName::CalE, A_pt)), false, "A'"},
      {normalize_chart(apply_symmetry(SymmetryName::CalF, A_pt)), false,
       "A'''"},
  };
  return s;
}

FormValues forms_at(const SurfaceParams& p, const GaussMap& g, Complex zeta,
                    Complex w, bool u_chart) {
  const Complex gv =
      u_chart ? (g.sigma + g.delta * zeta) /
                    (kI * (std::conj(g.sigma) * zeta - std::conj(g.delta)))
              : (g.sigma * zeta + g.delta) /
                    (kI * (std::conj(g.sigma) - std::conj(g.delta) * zeta));
  FormValues f;
  f.dh = (u_chart ? -p.mu : p.mu) / w;
  f.dh_over_g = f.dh / gv;
  f.g_dh = gv * f.dh;
  f.phi[0] = 0.5 * (f.dh_over_g - f.g_dh);
  f.phi[1] = Complex(0.0, 0.5) * (f.dh_over_g + f.g_dh);
  f.phi[2] = f.dh;
  return f;
}

CVec<3> phi_eval(const SurfaceParams& p, const GaussMap& g,
                 const TorusPoint& pt) {
  return forms_at(p, g, pt.z, pt.w, pt.at_infinity).phi;
}

EndResidues residues_at_end(const SurfaceParams& p, const GaussMap& g,
                            const End& e) {
  const bool uch = e.point.at_infinity;
  const Complex c = e.point.z;
  const Complex wv = e.point.w;
  const double L = p.lambda;

  EndResidues r;
  r.height = 0.0;
  if (e.is_pole) {
    const Complex den = uch ? std::conj(g.sigma) * std::conj(g.sigma)
                            : std::conj(g.delta) * std::conj(g.delta);
    r.g_times_height = 2.0 * kI * p.mu / (den * wv);
    r.height_over_g = 0.0;
  } else {
    const Complex den = uch ? g.delta * g.delta : g.sigma * g.sigma;
    r.height_over_g = 2.0 * kI * p.mu / (den * wv);
    r.g_times_height = 0.0;
  }
  const Complex scalar = e.is_pole ? r.g_times_height : r.height_over_g;
  r.phi[0] = (e.is_pole ? -0.5 : 0.5) * scalar;
  r.phi[1] = Complex(0.0, 0.5) * scalar;
  r.phi[2] = 0.0;

  // small-contour cross-check; the loop radius keeps every other pole of the
  // integrands at ten times its distance, so the trapezoid sum is exact to
  // machine precision
  double dist = 1e9;
  for (const Complex& b :
       {Complex(0, L), Complex(0, -L), Complex(0, 1.0 / L),
        Complex(0, -1.0 / L)}) {
    dist = std::min(dist, std::abs(c - b));
  }
  {
    // coordinate of the opposite-type end in this chart
    const Complex other =
        e.is_pole ? (uch ? -g.sigma / g.delta : gauss_zero(g))
                  : (uch ? std::conj(g.delta) / std::conj(g.sigma)
                         : gauss_pole(g));
    if (std::isfinite(std::abs(other)))
      dist = std::min(dist, std::abs(c - other));
  }
  const double rad = std::min(0.25, 0.1 * dist);

  const int n = 256;
  Complex s_dh = 0.0, s_dhg = 0.0, s_gdh = 0.0;
  Complex wl;
  {
    const Complex zeta0 = c + rad;
    const Complex w0 = std::sqrt(uch ? curve_rhs_u(zeta0, L) : curve_rhs(zeta0, L));
    wl = (std::abs(w0 - wv) <= std::abs(-w0 - wv)) ? w0 : -w0;
  }
  const Complex w_first = wl;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * M_PI * k / n;
    const Complex dir = std::exp(kI * t);
    const Complex zeta = c + rad * dir;
    const Complex w0 = std::sqrt(uch ? curve_rhs_u(zeta, L) : curve_rhs(zeta, L));
    wl = (std::abs(w0 - wl) <= std::abs(-w0 - wl)) ? w0 : -w0;
    const FormValues f = forms_at(p, g, zeta, wl, uch);
    s_dh += f.dh * rad * dir;
    s_dhg += f.dh_over_g * rad * dir;
    s_gdh += f.g_dh * rad * dir;
  }
  {
    const Complex zeta0 = c + rad;
    const Complex w0 = std::sqrt(uch ? curve_rhs_u(zeta0, L) : curve_rhs(zeta0, L));
    const Complex back = (std::abs(w0 - wl) <= std::abs(-w0 - wl)) ? w0 : -w0;
    if (std::abs(back - w_first) > 1e-6 * std::abs(w_first))
      throw NumericalError("residue loop did not close",
                           std::abs(back - w_first));
  }
  s_dh /= static_cast<double>(n);
  s_dhg /= static_cast<double>(n);
  s_gdh /= static_cast<double>(n);

  r.crosscheck = std::max({std::abs(r.height - s_dh),
                           std::abs(r.height_over_g - s_dhg),
                           std::abs(r.g_times_height - s_gdh)});
  return r;
}

Complex residue_at_end(const SurfaceParams& p, const GaussMap& g, const End& e,
                       FormKind which) {
  const EndResidues r = residues_at_end(p, g, e);
  if (r.crosscheck > 1e-9)
    throw NumericalError("end residue cross-check failed", r.crosscheck);
  switch (which) {
    case FormKind::HeightForm: return r.height;
    case FormKind::HeightOverGauss: return r.height_over_g;
    case FormKind::GaussTimesHeight: return r.g_times_height;
  }
  return {};
}

}  // namespace kmr
