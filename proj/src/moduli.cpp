#include "kmr/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "kmr/errors.hpp"
#include "kmr/special.hpp"
#include "kmr/weierstrass.hpp"

namespace kmr {

namespace {

// class point before the Re(b) reduction; Re is continuous in the parameters
ClassPoint class_point_raw(const SurfaceParams& p) {
  const ClosingReport rep = check_closing(p);
  if (rep.max_residual > 1e-6) {
    throw NumericalError("closing residual too large to classify",
                         rep.max_residual);
  }
  return {rep.a, rep.b};
}

double wrap_into(double x, double period) {
  double y = std::fmod(x, period);
  if (y < 0.0) y += period;
  if (y >= period) y = 0.0;  // y + period can round back up to period
  return y;
}

}  // namespace

ClassPoint classify(const SurfaceParams& p) {
  ClassPoint c = class_point_raw(p);
  c.b = Complex(wrap_into(c.b.real(), 2.0 * M_PI * c.a), c.b.imag());
  return c;
}

ClassPoint scherk_boundary(double rho) {
  if (!(rho > 0.0 && rho < M_PI)) {
    throw DomainError("boundary arc parameter must lie strictly in (0, pi)");
  }
  // half-angle form keeps the arc midpoint value exact
  return {2.0 / std::sin(rho),
          Complex(0.0, 2.0 * M_PI * std::sin(rho) / (1.0 + std::cos(rho)))};
}

double scherk_arc_distance(const ClassPoint& q) {
  auto dist = [&](double rho) {
    const ClassPoint s = scherk_boundary(rho);
    const double da = q.a - s.a;
    return std::sqrt(da * da + std::norm(q.b - s.b));
  };
  const int n = 4096;
  const double lo = 1e-4, hi = M_PI - 1e-4;
  double best = 1e300;
  int best_k = 0;
  for (int k = 0; k <= n; ++k) {
    const double rho = lo + (hi - lo) * k / n;
    const double d = dist(rho);
    if (d < best) {
      best = d;
      best_k = k;
    }
  }
  // golden-section refinement on the bracketing interval
  double a = lo + (hi - lo) * std::max(0, best_k - 1) / n;
  double b = lo + (hi - lo) * std::min(n, best_k + 1) / n;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = dist(x1), f2 = dist(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a); f1 = dist(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a); f2 = dist(x2);
    }
  }
  return std::min({best, f1, f2});
}

Eigen::Matrix3d jacobian_C(const SurfaceParams& p, double h) {
  if (!(h > 0.0)) throw DomainError("step must be positive");
  if (h < 1e-7) {
    throw DomainError(
        "step below 1e-7 is dominated by quadrature noise; increase it");
  }
  const bool interior = p.theta >= 2.0 * h && p.theta <= M_PI_2 - 2.0 * h &&
                        std::abs(p.alpha) <= M_PI_2 - 2.0 * h &&
                        p.beta >= 2.0 * h && p.beta <= M_PI - 2.0 * h;
  if (!interior) {
    throw DomainError(
        "finite differences need an interior margin of two steps");
  }
  Eigen::Matrix3d J;
  const std::array<double, 3> x0 = {p.theta, p.alpha, p.beta};
  for (int i = 0; i < 3; ++i) {
    std::array<double, 3> xp = x0, xm = x0;
    xp[i] += h;
    xm[i] -= h;
    const ClassPoint cp =
        class_point_raw(SurfaceParams::make(xp[0], xp[1], xp[2]));
    const ClassPoint cm =
        class_point_raw(SurfaceParams::make(xm[0], xm[1], xm[2]));
    J(0, i) = (cp.a - cm.a) / (2.0 * h);
    J(1, i) = (cp.b.real() - cm.b.real()) / (2.0 * h);
    J(2, i) = (cp.b.imag() - cm.b.imag()) / (2.0 * h);
  }
  return J;
}

namespace {

constexpr double kThetaMin = 1e-3;
constexpr double kThetaMax = M_PI_2 - 1e-3;

std::array<double, 3> clamp_box(std::array<double, 3> x) {
  x[0] = std::clamp(x[0], kThetaMin, kThetaMax);
  x[1] = std::clamp(x[1], -M_PI_2 + 1e-6, M_PI_2 - 1e-6);
  x[2] = std::clamp(x[2], 0.0, M_PI - 1e-9);
  return x;
}

struct Eval {
  bool valid = false;
  ClassPoint cp{};
};

Eval eval_class(const std::array<double, 3>& x) {
  try {
    return {true, class_point_raw(SurfaceParams::make(x[0], x[1], x[2]))};
  } catch (const std::exception&) {
    return {};
  }
}

std::array<double, 3> residual_of(const ClassPoint& c, const ClassPoint& t) {
  const double period = 2.0 * M_PI * t.a;
  double dre = c.b.real() - t.b.real();
  dre -= period * std::round(dre / period);
  return {c.a - t.a, dre, c.b.imag() - t.b.imag()};
}

double norm3(const std::array<double, 3>& r) {
  return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
}

// central differences with one-sided fallback at the box boundary
bool fd_jacobian(const std::array<double, 3>& x, const ClassPoint& c0,
                 const ClassPoint& target, Eigen::Matrix3d& J) {
  const double h = 1e-5;
  for (int i = 0; i < 3; ++i) {
    std::array<double, 3> xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const Eval ep = eval_class(clamp_box(xp));
    const Eval em = eval_class(clamp_box(xm));
    ClassPoint hi, lo;
    double span = 0.0;
    if (ep.valid && em.valid) {
      hi = ep.cp; lo = em.cp; span = clamp_box(xp)[i] - clamp_box(xm)[i];
    } else if (ep.valid) {
      hi = ep.cp; lo = c0; span = clamp_box(xp)[i] - x[i];
    } else if (em.valid) {
      hi = c0; lo = em.cp; span = x[i] - clamp_box(xm)[i];
    } else {
      return false;
    }
    if (std::abs(span) < 1e-12) return false;
    const auto rh = residual_of(hi, target);
    const auto rl = residual_of(lo, target);
    for (int r = 0; r < 3; ++r) J(r, i) = (rh[r] - rl[r]) / span;
  }
  return true;
}

struct NewtonOutcome {
  bool converged = false;
  std::array<double, 3> x{};
  double res = 1e300;
  int iters = 0;
};

NewtonOutcome newton_run(std::array<double, 3> x, const ClassPoint& target,
                         double tol, int max_iter) {
  NewtonOutcome out;
  x = clamp_box(x);
  Eval e = eval_class(x);
  if (!e.valid) return out;
  auto r = residual_of(e.cp, target);
  double rn = norm3(r);
  int it = 0;
  while (rn > tol && it < max_iter) {
    ++it;
    Eigen::Matrix3d J;
    if (!fd_jacobian(x, e.cp, target, J)) break;
    Eigen::FullPivLU<Eigen::Matrix3d> lu(J);
    if (!lu.isInvertible()) {
      // nudge away from a symmetry plane and retry from there
      x = clamp_box({x[0] + 1e-3, x[1] + 1.3e-3, x[2] + 0.7e-3});
      e = eval_class(x);
      if (!e.valid) break;
      r = residual_of(e.cp, target);
      rn = norm3(r);
      continue;
    }
    const Eigen::Vector3d step =
        lu.solve(Eigen::Vector3d(-r[0], -r[1], -r[2]));
    bool accepted = false;
    double lam = 1.0;
    for (int halve = 0; halve <= 20; ++halve) {
      const std::array<double, 3> xn = clamp_box(
          {x[0] + lam * step(0), x[1] + lam * step(1), x[2] + lam * step(2)});
      const Eval en = eval_class(xn);
      if (en.valid) {
        const auto rn2 = residual_of(en.cp, target);
        const double n2 = norm3(rn2);
        if (n2 < rn) {
          x = xn;
          e = en;
          r = rn2;
          rn = n2;
          accepted = true;
          break;
        }
      }
      lam *= 0.5;
    }
    if (!accepted) break;
  }
  out.converged = rn <= 100.0 * tol;
  out.x = x;
  out.res = rn;
  out.iters = it;
  return out;
}

}  // namespace

InversionResult invert_classify(const ClassPoint& target,
                                std::array<double, 3> guess) {
  if (!(target.a > 0.0) || !std::isfinite(target.a) ||
      !std::isfinite(target.b.real()) || !std::isfinite(target.b.imag())) {
    throw DomainError("target class point must have a > 0 and finite b");
  }
  const double arc_d = scherk_arc_distance(target);
  if (arc_d < 1e-3) {
    throw NumericalError(
        "target lies within 1e-3 of the Scherk boundary arc; "
        "no surface in the family attains it",
        arc_d);
  }

  const double tol =
      1e-9 * (1.0 + std::sqrt(target.a * target.a + std::norm(target.b)));
  const std::vector<std::array<double, 3>> starts = {
      guess,
      {0.6, 0.3, 0.6},
      {1.0, 0.3, 1.0},
      {0.4, -0.3, 0.5},
      {1.2, -0.5, 2.0},
      {0.3, 0.3, 2.4},
      {0.9, -1.0, 1.5},
      {0.5, 0.8, 0.3},
  };
  NewtonOutcome best;
  for (const auto& s : starts) {
    const NewtonOutcome o = newton_run(s, target, tol, 40);
    if (o.res < best.res) best = o;
    if (o.converged) break;
  }
  if (!best.converged) {
    std::ostringstream msg;
    msg << "inversion did not converge; best iterate (" << best.x[0] << ", "
        << best.x[1] << ", " << best.x[2] << ") with residual " << best.res;
    if (best.x[0] <= kThetaMin + 1e-9 || best.x[0] >= kThetaMax - 1e-9) {
      msg << " (pinned at the theta clamp boundary)";
    }
    throw NumericalError(msg.str(), best.res);
  }
  InversionResult out;
  out.params = SurfaceParams::make(best.x[0], best.x[1], best.x[2]);
  out.iterations = best.iters;
  out.residual = best.res;
  return out;
}

ConjugationReport conjugate_params(const SurfaceParams& p) {
  ConjugationReport rep;
  rep.source = p;
  const double tt = M_PI_2 - p.theta;
  double ta = p.alpha;
  double tb = std::fmod(p.beta + M_PI_2, M_PI);
  if (std::abs(std::abs(ta) - M_PI_2) < 1e-12) {
    // the alpha = +-pi/2 surfaces do not depend on beta and the two signs
    // give the same surface; the canonical representative is (pi/2, 0)
    ta = M_PI_2;
    tb = 0.0;
  }
  try {
    rep.target = SurfaceParams::make(tt, ta, tb);
  } catch (const DomainError& e) {
    throw DomainError(std::string("conjugate target is outside the "
                                  "parameter domain: ") +
                      e.what());
  }
  const double m1 = std::sin(p.theta) * std::sin(p.theta);
  if (std::abs(m1 - 0.5) < 4e-16) {
    // sin^2 = cos^2 to machine precision: the ratio is 1 by symmetry
    rep.scale = 1.0;
  } else {
    rep.scale = elliptic_K(m1) / elliptic_K(1.0 - m1);
  }
  return rep;
}

ConjugationReport check_self_conjugate(const SurfaceParams& p, double tol) {
  ConjugationReport rep = conjugate_params(p);
  const double s = rep.scale;
  const SurfaceParams& q = rep.target;

  // source side: the conjugate data (g, i dh) has period lattice
  // {-F_A, -F_{gamma2}} and end scale a
  const auto pfA = period_flux(make_cycle(CycleName::GammaA, p), p);
  const auto pf2 = period_flux(make_cycle(CycleName::Gamma2, p), p);
  const double a_src = check_closing(p).a;
  const Complex FAh(pfA.F[0], pfA.F[1]);
  const Complex F2h(pf2.F[0], pf2.F[1]);

  // target side, computed directly
  const auto qfA = period_flux(make_cycle(CycleName::GammaA, q), q);
  const auto qf1 = period_flux(make_cycle(CycleName::Gamma1, q), q);
  const double a_tgt = check_closing(q).a;
  const Complex PAh(qfA.P[0], qfA.P[1]);
  const Complex P1h(qf1.P[0], qf1.P[1]);

  // vertical lattice: (P_{gamma1})_3 of the target vs the scaled vertical
  // flux component -2 pi s of the conjugate
  rep.mismatches[0] = std::abs(qf1.P[2] + 2.0 * M_PI * s);

  // end scale
  rep.mismatches[1] = M_PI * std::abs(a_tgt - s * a_src);

  // horizontal lattice after the aligning rotation; the rotation candidates
  // come from matching the end periods, and the end-loop ambiguity allows a
  // small multiple of the horizontal generator
  const Complex raw = PAh / (s * FAh);
  const Complex unit = raw / std::abs(raw);
  double m3 = 1e300;
  for (const Complex rot :
       {unit, -unit, std::conj(unit), -std::conj(unit)}) {
    for (int k = -2; k <= 2; ++k) {
      m3 = std::min(m3, std::abs(P1h + s * rot * F2h + double(k) * PAh));
    }
  }
  rep.mismatches[2] = m3;

  rep.max_mismatch =
      *std::max_element(rep.mismatches.begin(), rep.mismatches.end());
  rep.ok = rep.max_mismatch <= tol;
  return rep;
}

}  // namespace kmr
