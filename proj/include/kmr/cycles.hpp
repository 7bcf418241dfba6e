#pragma once

#include <string>
#include <vector>

#include "kmr/weierstrass.hpp"

namespace kmr {

enum class CycleName {
  GammaA,
  GammaAPrime,
  GammaADoublePrime,
  GammaATriplePrime,
  Gamma1,
  Gamma2,
};

std::string to_string(CycleName n);
CycleName cycle_name_of(const std::string& s);  // throws DomainError

// One closed polyline with a lift choice. A cycle is an integer combination
// of such components; the first component is the primary representative and
// the rest are end-loop corrections that keep the homology class continuous
// across parameter walls where an end crosses the primary path.
struct CycleComponent {
  std::vector<Complex> z_path;  // closed polyline in the component's chart
  Complex start_w;              // lift of z_path.front()
  double coeff = 1.0;           // +1 or -1
  bool u_chart = false;
};

struct Cycle {
  CycleName name;
  std::vector<CycleComponent> components;
};

// Representatives:
//   gamma2: the circle |z| = r, r deterministically perturbed from 1 to keep
//     a margin from both end radii, starting on the positive-w lift at angle
//     0, counterclockwise; plus corrections so that the zero end sheet-matched
//     to the lift stays enclosed and the matched pole end stays outside.
//   gamma1: a thin counterclockwise ellipse around the segment from i/lambda
//     to i lambda, orientation fixed by Re(integral of dh) < 0; when alpha = 0
//     and the pole lies on that segment, a pole loop is subtracted (the
//     alpha -> 0+ convention).
//   end loops: counterclockwise circles in the end's chart, radius 0.1 times
//     the smallest spherical distance among ends and branch points.
Cycle make_cycle(CycleName name, const SurfaceParams& p);

// (integral of dh, of dh/g, of g dh) over the lifted cycle.
CVec<3> cycle_forms_integral(const Cycle& c, const SurfaceParams& p,
                             const GaussMap& g,
                             const QuadratureSettings& s = {});

// Same three integrals along one lifted polyline, open or closed. Between
// lift nodes the square-root branch follows the linear interpolation of w.
CVec<3> forms_along(const LiftedPath& lift, const SurfaceParams& p,
                    const GaussMap& g, const QuadratureSettings& s = {});

}  // namespace kmr
