#pragma once

#include <array>
#include <vector>

#include "kmr/surface.hpp"

namespace kmr {

// Gauss map g(z) = (sigma z + delta) / (i (conj(sigma) - conj(delta) z)),
// with |sigma|^2 + |delta|^2 = 2. The zeros and poles of g are the four
// punctures (ends); zeros and poles are antipodal on the z-sphere.
struct GaussMap {
  Complex sigma;
  Complex delta;
};

GaussMap gauss_coeffs(double alpha, double beta);
GaussMap gauss_coeffs(const SurfaceParams& p);

Complex gauss_value(const GaussMap& g, const TorusPoint& pt);
Complex gauss_derivative(const GaussMap& g, Complex z);  // dg/dz
Complex gauss_zero(const GaussMap& g);  // -delta/sigma
Complex gauss_pole(const GaussMap& g);  // conj(sigma)/conj(delta), inf at base

// Deformation path (alpha(t), beta(t)) from the base point (0,0) used to
// mark lifts and square-root branches consistently over the whole parameter
// space. Detours around the two excluded points when alpha is small.
std::vector<std::array<double, 2>> parameter_path(const SurfaceParams& p);

struct End {
  TorusPoint point;  // marked lift, chart-normalized so |coordinate| <= 1
  bool is_pole;      // pole of g; otherwise zero
  const char* label;
};

// The four marked ends. A is the pole lift continued from (infinity,
// wtilde = +1) at the base point along parameter_path; the others are its
// images under the fixed-point-free symmetries.
struct EndSet {
  End A;     // pole
  End App;   // deck image of A, pole
  End Ap;    // CalE image of A, zero
  End Appp;  // CalF image of A, zero
  std::array<const End*, 4> marked() const;  // (Appp, Ap, A, App)
};

EndSet ends(const SurfaceParams& p);

// Coordinate values of the four 1-forms at a chart point: each entry is the
// coefficient of d zeta, where zeta is z on the finite chart and u at
// infinity. phi = ((1/g - g)/2, i (1/g + g)/2, 1) * dh.
struct FormValues {
  Complex dh;
  Complex dh_over_g;
  Complex g_dh;
  CVec<3> phi;
};

FormValues forms_at(const SurfaceParams& p, const GaussMap& g, Complex zeta,
                    Complex w, bool u_chart);
CVec<3> phi_eval(const SurfaceParams& p, const GaussMap& g,
                 const TorusPoint& pt);

enum class FormKind { HeightForm, HeightOverGauss, GaussTimesHeight };

struct EndResidues {
  Complex height;          // residue of dh (vanishes at every end)
  Complex height_over_g;   // residue of dh/g
  Complex g_times_height;  // residue of g dh
  CVec<3> phi;             // residues of the coordinate differentials
  double crosscheck;       // max |analytic - contour loop| over the scalars
};

// Analytic residues with an always-on small-contour quadrature cross-check.
EndResidues residues_at_end(const SurfaceParams& p, const GaussMap& g,
                            const End& e);
// Selected scalar residue; throws NumericalError if the cross-check exceeds
// 1e-9.
Complex residue_at_end(const SurfaceParams& p, const GaussMap& g, const End& e,
                       FormKind which);

}  // namespace kmr
