#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "kmr/errors.hpp"
#include "kmr/quadrature.hpp"

namespace kmr {

// Parameter triple (theta, alpha, beta) with the derived curve/height data.
// Admissible set: theta in (0,pi/2), alpha in (-pi/2,pi/2), beta in [0,pi),
// minus the two degenerate points (alpha,beta) = (0,theta), (0,pi-theta),
// plus the half-line alpha = +pi/2, beta = 0.
struct SurfaceParams {
  double theta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double lambda = 0.0;  // cot(theta/2) > 1
  double mu = 0.0;      // height-differential normalization

  static SurfaceParams make(double theta, double alpha, double beta);
  static bool admissible(double theta, double alpha, double beta,
                         std::string* why = nullptr);

  // smallest distance between distinct branch points: min(lambda - 1/lambda,
  // 2/lambda)
  double branch_gap() const;
  // paths must stay this far from every branch point
  double exclusion_radius() const;
};

// Point of the genus-one double cover w^2 = (z^2 + L^2)(z^2 + L^-2).
// Over z = infinity the chart u = 1/z is used and `w` stores the value of
// w*u^2, which tends to +-1 at the two points over infinity.
struct TorusPoint {
  Complex z{};
  Complex w{};
  bool at_infinity = false;

  static TorusPoint finite(Complex z, Complex w) { return {z, w, false}; }
  static TorusPoint infinity(Complex wtilde) {
    return {Complex(0.0, 0.0), wtilde, true};
  }
};

Complex curve_rhs(Complex z, double lambda);    // (z^2+L^2)(z^2+L^-2)
Complex curve_rhs_u(Complex u, double lambda);  // (1+L^2 u^2)(1+L^-2 u^2)

// |w^2 - rhs| / (1 + |z|^4), chart-aware
double curve_residual(const TorusPoint& p, double lambda);

// {i L, -i L, i/L, -i/L}
std::array<Complex, 4> branch_points(const SurfaceParams& p);

// Square-root lift closest to sheet_hint; w = 0 at branch points.
TorusPoint w_at(Complex z, Complex sheet_hint, double lambda);

// A z-polyline with the continued w value at every (refined) node.
// Consecutive nodes satisfy |w_{k+1} - w_k| <= 0.3 max(|w_k|,|w_{k+1}|), so
// between nodes the branch choice "closest to the linear interpolation of w"
// is unambiguous.
struct LiftedPath {
  std::vector<Complex> z;
  std::vector<Complex> w;
  bool u_chart = false;

  bool closed() const {
    if (z.size() < 2) return false;
    return std::abs(z.front() - z.back()) < 1e-13 &&
           std::abs(w.front() - w.back()) <
               1e-9 * (1.0 + std::abs(w.front()));
  }
};

// Continuation of w along a polyline in the z chart (resp. u chart). Throws
// NumericalError when the path enters the branch-point exclusion radius or
// the refinement limit is hit.
LiftedPath continue_along(const std::vector<Complex>& z_path,
                          const TorusPoint& start, const SurfaceParams& p);
LiftedPath continue_along_u(const std::vector<Complex>& u_path,
                            Complex start_wtilde, const SurfaceParams& p);

// --- symmetry group ---
// The four commuting anticonformal generators:
//   S1: (z,w) -> (-conj z, -conj w)   fixes lifts over z=it, 1/L<=|t|<=L
//   S2: (z,w) -> ( conj z,  conj w)   fixes lifts over the real axis
//   S3: (z,w) -> (1/conj z, conj w / conj z^2)   fixes lifts over |z|=1
//   RD: (z,w) -> (-conj z,  conj w)   fixes lifts over z=it, |t|<=1/L or >=L
// Products: Deck = S1*RD = (z,-w); CalE = S1*S2*S3; CalF = CalE*Deck.
// The generated group is (Z/2Z)^4.
enum class SymmetryName { Identity, S1, S2, S3, RD, Deck, CalE, CalF };

struct SymElem {
  unsigned mask = 0;  // bit0 S1, bit1 S2, bit2 S3, bit3 RD
  friend SymElem operator*(SymElem a, SymElem b) { return {a.mask ^ b.mask}; }
  bool operator==(const SymElem&) const = default;
  bool anticonformal() const;  // odd number of generator factors
};

SymElem sym_elem(SymmetryName n);
std::string sym_label(SymElem e);
TorusPoint apply_symmetry(SymElem e, const TorusPoint& p);
TorusPoint apply_symmetry(SymmetryName n, const TorusPoint& p);
TorusPoint deck(const TorusPoint& p);

}  // namespace kmr
