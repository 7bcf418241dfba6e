#include "kmr/surface.hpp"

#include <bit>
#include <cmath>

#include "kmr/special.hpp"

namespace kmr {

namespace {
constexpr double kHalfPi = 1.5707963267948966;
constexpr double kPi = 3.141592653589793;
}  // namespace

bool SurfaceParams::admissible(double theta, double alpha, double beta,
                               std::string* why) {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (!(theta > 0.0 && theta < kHalfPi))
    return fail("theta must lie in (0, pi/2)");
  if (alpha == kHalfPi && beta == 0.0) return true;
  if (!(alpha > -kHalfPi && alpha < kHalfPi))
    return fail("alpha must lie in (-pi/2, pi/2); alpha = pi/2 only with beta = 0");
  if (!(beta >= 0.0 && beta < kPi)) return fail("beta must lie in [0, pi)");
  if (std::abs(alpha) < 1e-12 &&
      (std::abs(beta - theta) < 1e-12 || std::abs(beta - (kPi - theta)) < 1e-12))
    return fail("(alpha, beta) = (0, theta) and (0, pi - theta) are excluded");
  return true;
}

SurfaceParams SurfaceParams::make(double theta, double alpha, double beta) {
  std::string why;
  if (!admissible(theta, alpha, beta, &why)) throw DomainError(why);
  SurfaceParams p;
  p.theta = theta;
  p.alpha = alpha;
  p.beta = beta;
  p.lambda = lambda_of_theta(theta);
  p.mu = mu_of_theta(theta);
  return p;
}

double SurfaceParams::branch_gap() const {
  return std::min(lambda - 1.0 / lambda, 2.0 / lambda);
}

double SurfaceParams::exclusion_radius() const { return 1e-3 * branch_gap(); }

Complex curve_rhs(Complex z, double lambda) {
  const Complex z2 = z * z;
  return (z2 + lambda * lambda) * (z2 + 1.0 / (lambda * lambda));
}

Complex curve_rhs_u(Complex u, double lambda) {
  const Complex u2 = u * u;
  return (1.0 + lambda * lambda * u2) * (1.0 + u2 / (lambda * lambda));
}

double curve_residual(const TorusPoint& p, double lambda) {
  const Complex rhs =
      p.at_infinity ? curve_rhs_u(p.z, lambda) : curve_rhs(p.z, lambda);
  const double scale = 1.0 + std::pow(std::abs(p.z), 4);
  return std::abs(p.w * p.w - rhs) / scale;
}

std::array<Complex, 4> branch_points(const SurfaceParams& p) {
  const Complex i(0.0, 1.0);
  return {i * p.lambda, -i * p.lambda, i / p.lambda, -i / p.lambda};
}

TorusPoint w_at(Complex z, Complex sheet_hint, double lambda) {
  const Complex w0 = std::sqrt(curve_rhs(z, lambda));
  const Complex w =
      (std::abs(w0 - sheet_hint) <= std::abs(-w0 - sheet_hint)) ? w0 : -w0;
  return TorusPoint::finite(z, w);
}

namespace {

// Shared continuation engine for both charts. Per accepted step the branch
// of sqrt(rhs) nearest the current w must also be a small relative move,
// otherwise the segment is bisected.
LiftedPath continue_core(const std::vector<Complex>& path, Complex w_start,
                         const SurfaceParams& p, bool u_chart) {
  if (path.size() < 2)
    throw DomainError("continuation path needs at least two nodes");
  auto rhs = [&](Complex zz) {
    return u_chart ? curve_rhs_u(zz, p.lambda) : curve_rhs(zz, p.lambda);
  };
  const auto bps = branch_points(p);  // the branch set is inversion-invariant
  const double excl = p.exclusion_radius();
  auto guard = [&](Complex zz) {
    for (const Complex& b : bps) {
      const double d = std::abs(zz - b);
      if (d < excl)
        throw NumericalError(
            "continuation path enters a branch-point exclusion disk", d);
    }
  };
  guard(path.front());
  {
    const Complex r = w_start * w_start - rhs(path.front());
    if (std::abs(r) > 1e-8 * (1.0 + std::abs(rhs(path.front()))))
      throw DomainError("start value does not lie on the curve");
  }

  LiftedPath out;
  out.u_chart = u_chart;
  out.z.push_back(path.front());
  out.w.push_back(w_start);

  for (size_t k = 0; k + 1 < path.size(); ++k) {
    struct Seg {
      Complex a, b;
      int depth;
    };
    std::vector<Seg> stack{{path[k], path[k + 1], 0}};
    while (!stack.empty()) {
      Seg s = stack.back();
      stack.pop_back();
      guard(s.b);
      const Complex w_cur = out.w.back();
      const Complex w0 = std::sqrt(rhs(s.b));
      const Complex w_next =
          (std::abs(w0 - w_cur) <= std::abs(-w0 - w_cur)) ? w0 : -w0;
      const double step = std::abs(w_next - w_cur);
      const double size = std::max(std::abs(w_cur), std::abs(w_next));
      if (step <= 0.3 * size || std::abs(s.b - s.a) < 1e-14) {
        out.z.push_back(s.b);
        out.w.push_back(w_next);
        continue;
      }
      if (s.depth >= 48)
        throw NumericalError("sheet continuation failed to refine", step);
      const Complex m = 0.5 * (s.a + s.b);
      stack.push_back({m, s.b, s.depth + 1});
      stack.push_back({s.a, m, s.depth + 1});
    }
  }
  return out;
}

// In the u chart each map below acts as u' = +-conj(u), wtilde' = +-conj(wtilde),
// which follows from the z-chart formula and wtilde = w u^2.
TorusPoint map_s1(const TorusPoint& p) {
  if (p.at_infinity) return {-std::conj(p.z), -std::conj(p.w), true};
  return TorusPoint::finite(-std::conj(p.z), -std::conj(p.w));
}

TorusPoint map_s2(const TorusPoint& p) {
  if (p.at_infinity) return {std::conj(p.z), std::conj(p.w), true};
  return TorusPoint::finite(std::conj(p.z), std::conj(p.w));
}

TorusPoint map_rd(const TorusPoint& p) {
  if (p.at_infinity) return {-std::conj(p.z), std::conj(p.w), true};
  return TorusPoint::finite(-std::conj(p.z), std::conj(p.w));
}

TorusPoint map_s3(const TorusPoint& p) {
  if (p.at_infinity) {
    // swaps the charts: z' = conj(u), w' = conj(wtilde)
    return TorusPoint::finite(std::conj(p.z), std::conj(p.w));
  }
  // near z = 0 the image is stored in the u chart, exactly: u' = conj(z)
  if (std::abs(p.z) < 1e-8) return {std::conj(p.z), std::conj(p.w), true};
  const Complex zc = std::conj(p.z);
  return TorusPoint::finite(1.0 / zc, std::conj(p.w) / (zc * zc));
}

}  // namespace

LiftedPath continue_along(const std::vector<Complex>& z_path,
                          const TorusPoint& start, const SurfaceParams& p) {
  if (start.at_infinity)
    throw DomainError("z-chart continuation needs a finite start point");
  if (!z_path.empty() && std::abs(z_path.front() - start.z) > 1e-12)
    throw DomainError("path must start at the start point");
  return continue_core(z_path, start.w, p, false);
}

LiftedPath continue_along_u(const std::vector<Complex>& u_path,
                            Complex start_wtilde, const SurfaceParams& p) {
  return continue_core(u_path, start_wtilde, p, true);
}

bool SymElem::anticonformal() const {
  return (std::popcount(mask) & 1u) != 0;
}

SymElem sym_elem(SymmetryName n) {
  switch (n) {
    case SymmetryName::Identity: return {0u};
    case SymmetryName::S1: return {1u};
    case SymmetryName::S2: return {2u};
    case SymmetryName::S3: return {4u};
    case SymmetryName::RD: return {8u};
    case SymmetryName::Deck: return {9u};    // S1*RD = (z, -w)
    case SymmetryName::CalE: return {7u};    // S1*S2*S3
    case SymmetryName::CalF: return {14u};   // S2*S3*RD
  }
  return {0u};
}

std::string sym_label(SymElem e) {
  switch (e.mask) {
    case 0u: return "Id";
    case 1u: return "S1";
    case 2u: return "S2";
    case 4u: return "S3";
    case 8u: return "RD";
    case 9u: return "Deck";
    case 7u: return "CalE";
    case 14u: return "CalF";
    default: break;
  }
  std::string s;
  const char* names[4] = {"S1", "S2", "S3", "RD"};
  for (int b = 0; b < 4; ++b) {
    if (e.mask & (1u << b)) {
      if (!s.empty()) s += "*";
      s += names[b];
    }
  }
  return s;
}

TorusPoint apply_symmetry(SymElem e, const TorusPoint& p) {
  TorusPoint q = p;
  if (e.mask & 1u) q = map_s1(q);
  if (e.mask & 2u) q = map_s2(q);
  if (e.mask & 4u) q = map_s3(q);
  if (e.mask & 8u) q = map_rd(q);
  return q;
}

TorusPoint apply_symmetry(SymmetryName n, const TorusPoint& p) {
  return apply_symmetry(sym_elem(n), p);
}

TorusPoint deck(const TorusPoint& p) {
  return apply_symmetry(SymmetryName::Deck, p);
}

}  // namespace kmr
