#pragma once

#include <array>

#include <Eigen/Dense>

#include "kmr/invariants.hpp"

namespace kmr {

// (a, b): the end-residue scale and the rotated vertical flux integral over
// gamma2, with Re(b) reduced into [0, 2 pi a).
struct ClassPoint {
  double a = 0.0;
  Complex b{};
};

ClassPoint classify(const SurfaceParams& p);

// Boundary arc (2 csc(rho), 2 pi i tan(rho/2)), rho in (0, pi).
ClassPoint scherk_boundary(double rho);

// Euclidean distance from q to the boundary arc in (a, Re b, Im b) space.
double scherk_arc_distance(const ClassPoint& q);

// Central finite differences of (a, Re b, Im b) with respect to
// (theta, alpha, beta). Requires an interior margin of two steps.
Eigen::Matrix3d jacobian_C(const SurfaceParams& p, double h = 1e-5);

struct InversionResult {
  SurfaceParams params{};
  int iterations = 0;
  double residual = 0.0;
};

// Damped Newton iteration recovering the parameter triple from a class
// point. Targets within 1e-3 of the boundary arc are rejected up front.
InversionResult invert_classify(
    const ClassPoint& target,
    std::array<double, 3> guess = {0.78539816339744831, 0.0, 0.0});

struct ConjugationReport {
  SurfaceParams source{};
  SurfaceParams target{};
  double scale = 0.0;
  // vertical lattice, end scale, horizontal lattice; filled by
  // check_self_conjugate
  std::array<double, 3> mismatches{};
  double max_mismatch = 0.0;
  bool ok = true;
};

// Parameter map (theta, alpha, beta) -> (pi/2 - theta, alpha, beta + pi/2
// mod pi) with the boundary identifications, plus the homothety scale
// K(sin^2 theta) / K(cos^2 theta).
ConjugationReport conjugate_params(const SurfaceParams& p);

// Verifies that the invariants of the conjugate data (g, i dh) match the
// direct invariants of the target surface after scaling and a horizontal
// rotation.
ConjugationReport check_self_conjugate(const SurfaceParams& p,
                                       double tol = 1e-6);

}  // namespace kmr
