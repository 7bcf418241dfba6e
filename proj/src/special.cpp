#include "kmr/special.hpp"

#include <cmath>

#include "kmr/errors.hpp"
#include "kmr/quadrature.hpp"

namespace kmr {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

void check_theta(double theta, const char* who) {
  if (!(theta > 0.0) || !(theta < kPi / 2.0))
    throw DomainError(std::string(who) + ": theta must lie in (0, pi/2)");
}
}  // namespace

double elliptic_K(double m) {
  if (!(m >= 0.0) || !(m < 1.0))
    throw DomainError("elliptic_K: parameter must lie in [0,1)");
  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  if (!(b > 0.0))
    throw NumericalError("elliptic_K: parameter so close to 1 that the result overflows");
  // arithmetic-geometric mean; quadratic convergence. The iteration cap
  // guards against the last-ulp oscillation of (a+b)/2 vs sqrt(ab).
  for (int i = 0; i < 60 && a - b > 1e-15 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  const double agm = 0.5 * (a + b);
  const double k = kPi / (2.0 * agm);
  if (!std::isfinite(k))
    throw NumericalError("elliptic_K: result overflows");
  return k;
}

double lambda_of_theta(double theta) {
  check_theta(theta, "lambda_of_theta");
  return std::cos(theta / 2.0) / std::sin(theta / 2.0);
}

double mu_of_theta(double theta) {
  check_theta(theta, "mu_of_theta");
  const double s = std::sin(theta);
  return kPi / (s * elliptic_K(s * s));
}

double f1_of_theta(double theta) {
  check_theta(theta, "f1_of_theta");
  const double l = lambda_of_theta(theta);
  const double mu = mu_of_theta(theta);
  QuadratureSettings s;
  s.abs_tol = 1e-12;
  s.rel_tol = 1e-12;
  auto r = integrate_tanh_sinh(
      [l](double t, double xc) {
        // lambda - t underflows near the singular endpoint; xc carries it.
        const double lmt = (xc < 0.0) ? -xc : (l - t);
        const double rad = (t * t - 1.0 / (l * l)) * lmt * (l + t);
        return 1.0 / std::sqrt(rad);
      },
      1.0, l, s);
  if (!r.converged)
    throw NumericalError("f1_of_theta: quadrature did not converge", r.error);
  return -4.0 * mu * r.value;
}

}  // namespace kmr
