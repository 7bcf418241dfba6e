#include "kmr/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "kmr/errors.hpp"
#include "kmr/quadrature.hpp"
#include "kmr/special.hpp"
#include "kmr/weierstrass.hpp"

namespace kmr {

namespace {

constexpr Complex kI{0.0, 1.0};

}  // namespace

PeriodFlux period_flux(const Cycle& c, const SurfaceParams& p) {
  const GaussMap g = gauss_coeffs(p);
  const CVec<3> s = cycle_forms_integral(c, p, g);
  // s = (dh, dh/g, g dh); Phi = ((s1 - s2)/2, i(s1 + s2)/2, s0).
  const Complex phi1 = 0.5 * (s[1] - s[2]);
  const Complex phi2 = 0.5 * kI * (s[1] + s[2]);
  const Complex phi3 = s[0];
  PeriodFlux out;
  out.P = {phi1.real(), phi2.real(), phi3.real()};
  out.F = {phi1.imag(), phi2.imag(), phi3.imag()};
  return out;
}

Complex E_factor(double theta, double alpha, double beta) {
  const SurfaceParams p = SurfaceParams::make(theta, alpha, beta);
  const double st = std::sin(theta);
  auto radicand = [st](double a, double b) -> Complex {
    const Complex m(std::sin(a) * std::cos(b), -std::sin(b));
    const double ca = std::cos(a);
    return st * st * ca * ca + m * m;
  };
  auto value_near = [&](double a, double b, Complex prev) -> Complex {
    const Complex q = radicand(a, b);
    if (std::abs(q) < 1e-14) {
      throw DomainError("E factor degenerates at this parameter point");
    }
    const Complex root = std::sqrt(q);
    const Complex cand = 1.0 / root;
    return (std::abs(cand - prev) <= std::abs(-cand - prev)) ? cand : -cand;
  };

  Complex e{1.0 / st, 0.0};
  const auto waypoints = parameter_path(p);
  for (std::size_t leg = 0; leg + 1 < waypoints.size(); ++leg) {
    const auto& from = waypoints[leg];
    const auto& to = waypoints[leg + 1];
    if (std::abs(to[0] - from[0]) < 1e-15 && std::abs(to[1] - from[1]) < 1e-15) {
      continue;
    }
    double s = 0.0;
    double ds = 1.0 / 64.0;
    while (s < 1.0) {
      if (s + ds > 1.0) ds = 1.0 - s;
      const double a = from[0] + (s + ds) * (to[0] - from[0]);
      const double b = from[1] + (s + ds) * (to[1] - from[1]);
      const Complex next = value_near(a, b, e);
      if (std::abs(next - e) <= 0.3 * std::max(std::abs(next), std::abs(e))) {
        e = next;
        s += ds;
        ds = std::min(0.25, ds * 1.7);
      } else {
        ds *= 0.5;
        if (ds < 1e-7) {
          throw NumericalError("E factor continuation stalled");
        }
      }
    }
  }
  return e;
}

PeriodFlux end_period_flux_closed_form(const SurfaceParams& p) {
  const Complex e = E_factor(p.theta, p.alpha, p.beta);
  const Complex fh = M_PI * p.mu * std::sin(p.theta) * e;
  const Complex ph = kI * fh;
  PeriodFlux out;
  out.P = {ph.real(), ph.imag(), 0.0};
  out.F = {fh.real(), fh.imag(), 0.0};
  return out;
}

ClosingReport check_closing(const SurfaceParams& p, double tol) {
  const GaussMap g = gauss_coeffs(p);
  const EndSet es = ends(p);
  const auto marked = es.marked();
  const Complex R = residue_at_end(p, g, *marked[2], FormKind::GaussTimesHeight);
  const Complex rho = residue_at_end(p, g, *marked[0], FormKind::HeightOverGauss);

  const Cycle c2 = make_cycle(CycleName::Gamma2, p);
  const CVec<3> s = cycle_forms_integral(c2, p, g);

  ClosingReport rep;
  rep.a = std::abs(R);
  rep.rot = -rep.a / R;
  rep.L1 = std::conj(rep.rot) * rho;
  rep.L2 = rep.rot * R;
  rep.L3 = std::conj(rep.rot) * s[1];
  rep.L4 = rep.rot * s[2];
  rep.b = rep.L4;
  rep.residuals[0] = std::abs(rep.L1 - rep.a);
  rep.residuals[1] = std::abs(rep.L2 + rep.a);
  rep.residuals[2] = std::abs(rep.L3 - std::conj(rep.b));
  rep.residuals[3] = std::abs(rep.L4 - rep.b);
  rep.max_residual =
      *std::max_element(rep.residuals.begin(), rep.residuals.end());
  rep.ok = rep.max_residual <= tol;
  return rep;
}

PeriodLattice period_lattice(const SurfaceParams& p) {
  PeriodLattice out;
  out.PA = end_period_flux_closed_form(p).P;
  out.P1 = period_flux(make_cycle(CycleName::Gamma1, p), p).P;
  return out;
}

Complex vertical_flux_integral(double theta, double alpha, double beta) {
  if (!(alpha >= 0.0 && alpha < M_PI_2 && beta >= 0.0 && beta < M_PI_2)) {
    throw DomainError(
        "vertical flux integral requires alpha and beta in [0, pi/2)");
  }
  const SurfaceParams p = SurfaceParams::make(theta, alpha, beta);
  const GaussMap g = gauss_coeffs(p);
  const double s2 = p.lambda * p.lambda + 1.0 / (p.lambda * p.lambda);
  const double sa = std::sin(alpha);
  const double ca = std::cos(alpha);
  const double sb = std::sin(beta);
  const double cb = std::cos(beta);
  const Complex sd = g.sigma * std::conj(g.delta);
  auto f = [&](double t) -> Complex {
    const double den1 = 2.0 - 2.0 * std::real(sd * std::exp(kI * t));
    const double den2 = std::sqrt(s2 + 2.0 * std::cos(2.0 * t));
    const Complex num(cb * std::sin(t), sa * sb * std::sin(t) - ca * std::cos(t));
    return num / (den1 * den2);
  };
  const auto r = integrate_adaptive<Complex>(f, -M_PI, M_PI, {});
  if (!r.converged) {
    throw NumericalError("vertical flux quadrature did not converge");
  }
  return -2.0 * p.mu * r.value;
}

namespace {

struct SpherePoint {
  Complex z{};
  bool inf = false;
};

SpherePoint sphere_of(const TorusPoint& t) {
  if (!t.at_infinity) return {t.z, false};
  if (std::abs(t.z) < 1e-300) return {Complex{}, true};
  return {1.0 / t.z, false};
}

double sphere_dist(const SpherePoint& a, const SpherePoint& b) {
  auto nrm = [](const SpherePoint& s) {
    return std::sqrt(1.0 + std::norm(s.z));
  };
  if (a.inf && b.inf) return 0.0;
  if (a.inf) return 2.0 / nrm(b);
  if (b.inf) return 2.0 / nrm(a);
  return 2.0 * std::abs(a.z - b.z) / (nrm(a) * nrm(b));
}

}  // namespace

IsometryGroup isometry_group(const SurfaceParams& p) {
  const double eps = 1e-12;
  const bool a_zero = std::abs(p.alpha) < eps;
  const bool b_zero = std::abs(p.beta) < eps;
  const bool b_half = std::abs(p.beta - M_PI_2) < eps;
  const bool a_half = std::abs(std::abs(p.alpha) - M_PI_2) < eps;

  IsometryGroup out;
  std::vector<SymElem> gens;
  if ((a_zero && (b_zero || b_half)) || a_half) {
    out.order = 16;
    gens = {sym_elem(SymmetryName::S1), sym_elem(SymmetryName::S2),
            sym_elem(SymmetryName::S3), sym_elem(SymmetryName::RD)};
  } else if (a_zero) {
    out.order = 8;
    gens = {sym_elem(SymmetryName::S1), sym_elem(SymmetryName::RD),
            sym_elem(SymmetryName::S2) * sym_elem(SymmetryName::S3)};
  } else if (b_zero) {
    out.order = 8;
    gens = {sym_elem(SymmetryName::S2), sym_elem(SymmetryName::Deck),
            sym_elem(SymmetryName::S1) * sym_elem(SymmetryName::S3)};
  } else if (b_half) {
    out.order = 8;
    gens = {sym_elem(SymmetryName::S3), sym_elem(SymmetryName::Deck),
            sym_elem(SymmetryName::S1) * sym_elem(SymmetryName::S2)};
  } else {
    out.order = 4;
    gens = {sym_elem(SymmetryName::Deck), sym_elem(SymmetryName::CalE)};
  }

  // Every claimed generator must map the end pair {pole, zero} of the Gauss
  // map to itself on the sphere.
  const GaussMap g = gauss_coeffs(p);
  std::array<SpherePoint, 2> target{};
  std::array<TorusPoint, 2> seed{};
  if (std::abs(g.delta) < 1e-14) {
    seed[0] = TorusPoint::infinity(1.0);
    seed[1] = TorusPoint::finite(Complex{}, 1.0);
  } else {
    seed[0] = TorusPoint::finite(gauss_pole(g), 1.0);
    seed[1] = TorusPoint::finite(gauss_zero(g), 1.0);
  }
  target[0] = sphere_of(seed[0]);
  target[1] = sphere_of(seed[1]);
  for (const SymElem& e : gens) {
    for (const TorusPoint& s : seed) {
      const SpherePoint img = sphere_of(apply_symmetry(e, s));
      const double d = std::min(sphere_dist(img, target[0]),
                                sphere_dist(img, target[1]));
      if (d > 1e-10) {
        throw NumericalError("isometry generator moved the end set");
      }
    }
  }

  out.generators = gens;
  for (const SymElem& e : gens) out.generator_labels.push_back(sym_label(e));
  return out;
}

std::string to_string(LimitKind k) {
  switch (k) {
    case LimitKind::Catenoid: return "catenoid";
    case LimitKind::Helicoid: return "helicoid";
    case LimitKind::SinglyPeriodicScherk: return "singly_periodic_scherk";
    case LimitKind::DoublyPeriodicScherk: return "doubly_periodic_scherk";
    case LimitKind::RiemannExample: return "riemann_example";
    case LimitKind::StandardExample: return "standard_example";
  }
  throw DomainError("unknown limit kind");
}

LimitClass limit_classify(double theta, double alpha, double beta) {
  const double eps = 1e-12;
  if (!(theta >= 0.0 && theta <= M_PI_2) || !std::isfinite(alpha) ||
      !std::isfinite(beta) || std::abs(alpha) > M_PI_2 + eps || beta < 0.0 ||
      beta >= M_PI) {
    throw DomainError("parameter triple is outside the closed domain");
  }
  LimitClass out;
  out.theta = theta;
  out.alpha = alpha;
  out.beta = beta;
  if (theta < eps) {
    if (std::abs(alpha) < eps && beta < eps) {
      out.kind = LimitKind::Catenoid;
    } else {
      out.kind = LimitKind::SinglyPeriodicScherk;
      out.angle = std::acos(std::cos(alpha) * std::cos(beta));
    }
    return out;
  }
  if (theta > M_PI_2 - eps) {
    if (std::abs(alpha) < eps && std::abs(beta - M_PI_2) < eps) {
      out.kind = LimitKind::Helicoid;
    } else {
      out.kind = LimitKind::DoublyPeriodicScherk;
      out.angle = std::acos(std::cos(alpha) * std::sin(beta));
    }
    return out;
  }
  if (std::abs(alpha) < eps &&
      (std::abs(beta - theta) < eps || std::abs(beta - (M_PI - theta)) < eps)) {
    out.kind = LimitKind::RiemannExample;
    return out;
  }
  std::string why;
  if (!SurfaceParams::admissible(theta, alpha, beta, &why)) {
    throw DomainError("parameter triple is outside the closed domain: " + why);
  }
  out.kind = LimitKind::StandardExample;
  return out;
}

}  // namespace kmr
