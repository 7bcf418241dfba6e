#pragma once

#include <array>
#include <string>
#include <vector>

#include "kmr/cycles.hpp"

namespace kmr {

// P = Re(integral of Phi), F = Im(integral of Phi) over a cycle.
struct PeriodFlux {
  std::array<double, 3> P{};
  std::array<double, 3> F{};
};

PeriodFlux period_flux(const Cycle& c, const SurfaceParams& p);

// E = 1/sqrt(sin^2 theta cos^2 alpha + (sin alpha cos beta - i sin beta)^2),
// branch continued from E(theta,0,0) = csc(theta) along the canonical
// parameter path.
Complex E_factor(double theta, double alpha, double beta);

// Closed form of the gammaA period and flux: the horizontal complex parts
// are i pi mu sin(theta) E and pi mu sin(theta) E, the vertical parts zero.
PeriodFlux end_period_flux_closed_form(const SurfaceParams& p);

// Rotated closing data (L1, L2, L3, L4) =
//   (Res dh/g at the first zero end, Res g dh at the marked pole end,
//    integral of dh/g over gamma2, integral of g dh over gamma2),
// normalized by the horizontal rotation that makes L2 = -a with a = |L2|.
// For closed periods the shape is (a, -a, conj(b), b).
struct ClosingReport {
  double a = 0.0;
  Complex b{};
  Complex rot{};
  Complex L1{}, L2{}, L3{}, L4{};
  std::array<double, 4> residuals{};
  double max_residual = 0.0;
  bool ok = false;
};

ClosingReport check_closing(const SurfaceParams& p, double tol = 1e-8);

// The two lattice generators (P at gammaA, P at gamma1); the first is
// horizontal, the third component of the second is f1(theta) < 0.
struct PeriodLattice {
  std::array<double, 3> PA{};
  std::array<double, 3> P1{};
};

PeriodLattice period_lattice(const SurfaceParams& p);

// Explicit real-integral form of the vertical flux integral of g dh over
// gamma2; valid for alpha, beta in [0, pi/2).
Complex vertical_flux_integral(double theta, double alpha, double beta);

struct IsometryGroup {
  int order = 0;  // 4, 8, or 16
  std::vector<SymElem> generators;
  std::vector<std::string> generator_labels;
};

IsometryGroup isometry_group(const SurfaceParams& p);

enum class LimitKind {
  Catenoid,
  Helicoid,
  SinglyPeriodicScherk,
  DoublyPeriodicScherk,
  RiemannExample,
  StandardExample,
};

std::string to_string(LimitKind k);

struct LimitClass {
  LimitKind kind;
  double angle = 0.0;  // Scherk kinds only, in (0, pi)
  double theta = 0.0, alpha = 0.0, beta = 0.0;
};

// Classification of a boundary (or interior) parameter triple.
LimitClass limit_classify(double theta, double alpha, double beta);

}  // namespace kmr
