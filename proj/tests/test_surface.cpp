#include <doctest.h>

#include <cmath>
#include <vector>

#include "kmr/surface.hpp"

using kmr::Complex;
using kmr::TorusPoint;
using kmr::SymmetryName;

namespace {

const Complex I(0.0, 1.0);

std::vector<Complex> circle_path(Complex center, double radius, int n,
                                 double t0 = 0.0) {
  std::vector<Complex> path;
  path.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double t = t0 + 2.0 * M_PI * k / n;
    path.push_back(center + radius * std::exp(I * t));
  }
  path.back() = path.front();
  return path;
}

bool same_point(const TorusPoint& p, const TorusPoint& q, double tol = 1e-11) {
  if (p.at_infinity != q.at_infinity) return false;
  return std::abs(p.z - q.z) < tol && std::abs(p.w - q.w) < tol;
}

const std::vector<Complex> kSampleZ = {
    {0.7, 0.3},  {-1.4, 0.9}, {0.1, -2.2}, {2.6, 0.0},
    {-0.3, -0.4}, {0.0, 0.6},  {1.1, 1.7},  {-2.0, 0.05}};

}  // namespace

TEST_SUITE("surface") {

TEST_CASE("parameter domain") {
  CHECK_NOTHROW(kmr::SurfaceParams::make(0.7, 0.3, 1.2));
  CHECK_NOTHROW(kmr::SurfaceParams::make(0.7, 0.0, 0.0));
  CHECK_NOTHROW(kmr::SurfaceParams::make(0.7, -1.5, 3.1));
  CHECK_NOTHROW(kmr::SurfaceParams::make(0.7, M_PI_2, 0.0));  // half-line

  CHECK_THROWS_AS(kmr::SurfaceParams::make(0.0, 0.1, 0.1), kmr::DomainError);
  CHECK_THROWS_AS(kmr::SurfaceParams::make(M_PI_2, 0.1, 0.1), kmr::DomainError);
  CHECK_THROWS_AS(kmr::SurfaceParams::make(-0.5, 0.1, 0.1), kmr::DomainError);
  CHECK_THROWS_AS(kmr::SurfaceParams::make(0.7, M_PI_2, 0.2), kmr::DomainError);
  CHECK_THROWS_AS(kmr::SurfaceParams::make(0.7, -M_PI_2, 0.0), kmr::DomainError);
  CHECK_THROWS_AS(kmr::SurfaceParams::make(0.7, 1.7, 0.2), kmr::DomainError);
  CHECK_THROWS_AS(kmr::SurfaceParams::make(0.7, 0.1, -0.1), kmr::DomainError);
  CHECK_THROWS_AS(kmr::SurfaceParams::make(0.7, 0.1, M_PI), kmr::DomainError);
  // the two excluded points and their immediate neighborhoods
  CHECK_THROWS_AS(kmr::SurfaceParams::make(0.7, 0.0, 0.7), kmr::DomainError);
  CHECK_THROWS_AS(kmr::SurfaceParams::make(0.7, 0.0, M_PI - 0.7),
                  kmr::DomainError);
  CHECK_THROWS_AS(kmr::SurfaceParams::make(0.7, 1e-14, 0.7 + 1e-14),
                  kmr::DomainError);
  CHECK_NOTHROW(kmr::SurfaceParams::make(0.7, 0.0, 0.8));
}

TEST_CASE("branch points and exclusion radius") {
  const auto p = kmr::SurfaceParams::make(M_PI_4, 0.0, 0.0);
  CHECK(p.lambda == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-14));
  const auto b = kmr::branch_points(p);
  CHECK(std::abs(b[0] - I * p.lambda) < 1e-15);
  CHECK(std::abs(b[1] + I * p.lambda) < 1e-15);
  CHECK(std::abs(b[2] - I / p.lambda) < 1e-15);
  CHECK(std::abs(b[3] + I / p.lambda) < 1e-15);
  // the branch set is invariant under z -> -1/conj(z)
  for (const auto& bp : b) {
    const Complex img = -1.0 / std::conj(bp);
    double best = 1e9;
    for (const auto& other : b) best = std::min(best, std::abs(img - other));
    CHECK(best < 1e-14);
  }
  CHECK(p.branch_gap() == doctest::Approx(2.0 / p.lambda).epsilon(1e-14));
  CHECK(p.exclusion_radius() == doctest::Approx(2e-3 / p.lambda).epsilon(1e-12));
}

TEST_CASE("w_at lies on the curve and respects the hint") {
  const auto p = kmr::SurfaceParams::make(0.8, 0.0, 0.0);
  for (const Complex& z : kSampleZ) {
    const auto up = kmr::w_at(z, Complex(1.0, 0.0), p.lambda);
    const auto dn = kmr::w_at(z, -up.w, p.lambda);
    CHECK(kmr::curve_residual(up, p.lambda) < 1e-13);
    CHECK(std::abs(dn.w + up.w) < 1e-13);
  }
  // at z = 1 both factors are positive, so w is real
  const auto q = kmr::w_at(Complex(1.0, 0.0), Complex(1.0, 0.0), p.lambda);
  const double expect = std::sqrt((1.0 + p.lambda * p.lambda) *
                                  (1.0 + 1.0 / (p.lambda * p.lambda)));
  CHECK(std::abs(q.w - expect) < 1e-13);
}

TEST_CASE("unit circle lift has the product form") {
  // on |z| = 1 the curve value factors as e^{2it} (L^2 + 1/L^2 + 2 cos 2t)
  const auto p = kmr::SurfaceParams::make(0.6, 0.0, 0.0);
  const double s = p.lambda * p.lambda + 1.0 / (p.lambda * p.lambda);
  for (int k = 0; k < 12; ++k) {
    const double t = -M_PI + 2.0 * M_PI * (k + 0.3) / 12.0;
    const Complex z = std::exp(I * t);
    const Complex w = std::exp(I * t) * std::sqrt(s + 2.0 * std::cos(2.0 * t));
    CHECK(kmr::curve_residual(TorusPoint::finite(z, w), p.lambda) < 1e-13);
  }
}

TEST_CASE("continuation around branch points") {
  const auto p = kmr::SurfaceParams::make(M_PI_4, 0.0, 0.0);
  const Complex iL = I * p.lambda;
  const Complex il = I / p.lambda;

  SUBCASE("one branch point flips the sheet") {
    const double r = 0.3 * p.branch_gap();
    const auto start = kmr::w_at(iL + r, Complex(1.0, 0.0), p.lambda);
    const auto lift = kmr::continue_along(circle_path(iL, r, 48), start, p);
    CHECK(std::abs(lift.z.back() - lift.z.front()) < 1e-13);
    CHECK(std::abs(lift.w.back() + lift.w.front()) <
          1e-9 * std::abs(lift.w.front()));
  }

  SUBCASE("two branch points close the lift") {
    // circle centered between iL and i/L enclosing exactly those two
    const Complex c = 0.5 * (iL + il);
    const double r = 0.5 * (p.lambda - 1.0 / p.lambda) + 0.2 / p.lambda;
    REQUIRE(std::abs(iL - c) < r);
    REQUIRE(std::abs(il - c) < r);
    REQUIRE(std::abs(-il - c) > r);
    const auto start = kmr::w_at(c + r, Complex(1.0, 0.0), p.lambda);
    const auto lift = kmr::continue_along(circle_path(c, r, 96), start, p);
    CHECK(lift.closed());
  }

  SUBCASE("unit circle encloses two branch points") {
    const auto start = kmr::w_at(Complex(1.0, 0.0), Complex(1.0, 0.0), p.lambda);
    const auto lift = kmr::continue_along(circle_path(Complex(0, 0), 1.0, 64),
                                          start, p);
    CHECK(lift.closed());
    // along the way the lift keeps the e^{it} * sqrt(...) form of sheet one
    const double s = p.lambda * p.lambda + 1.0 / (p.lambda * p.lambda);
    for (size_t k = 0; k < lift.z.size(); ++k) {
      const double t = std::arg(lift.z[k]);
      const Complex expect =
          std::exp(I * t) * std::sqrt(s + 2.0 * std::cos(2.0 * t));
      CHECK(std::abs(lift.w[k] - expect) < 1e-9);
    }
  }

  SUBCASE("node density does not change the sheet") {
    const auto start = kmr::w_at(Complex(1.0, 0.0), Complex(1.0, 0.0), p.lambda);
    std::vector<Complex> coarse, fine;
    for (int k = 0; k <= 8; ++k)
      coarse.push_back(std::exp(I * (M_PI * k / 8.0)));
    for (int k = 0; k <= 320; ++k)
      fine.push_back(std::exp(I * (M_PI * k / 320.0)));
    const auto a = kmr::continue_along(coarse, start, p);
    const auto b = kmr::continue_along(fine, start, p);
    CHECK(std::abs(a.w.back() - b.w.back()) < 1e-10);
  }

  SUBCASE("path through a branch point is rejected") {
    const auto start = kmr::w_at(iL - 0.5, Complex(1.0, 0.0), p.lambda);
    const std::vector<Complex> path = {iL - 0.5, iL + 0.5};
    CHECK_THROWS_AS(kmr::continue_along(path, start, p), kmr::NumericalError);
  }
}

TEST_CASE("continuation in the chart at infinity") {
  const auto p = kmr::SurfaceParams::make(0.9, 0.0, 0.0);
  SUBCASE("loop around a branch point flips the sheet") {
    const Complex c = I / p.lambda;
    const double r = 0.3 * p.branch_gap();
    const Complex w0 = std::sqrt(kmr::curve_rhs_u(c + r, p.lambda));
    const auto lift = kmr::continue_along_u(circle_path(c, r, 48), w0, p);
    CHECK(std::abs(lift.w.back() + lift.w.front()) <
          1e-9 * std::abs(lift.w.front()));
  }
  SUBCASE("transition functions between the charts agree") {
    // continue from u = 0 (wtilde = 1) and compare with the z chart value
    const std::vector<Complex> path = {Complex(0, 0), Complex(0.1, -0.06)};
    const auto lift = kmr::continue_along_u(path, Complex(1.0, 0.0), p);
    const Complex u = lift.z.back();
    const Complex z = 1.0 / u;
    const Complex w = lift.w.back() / (u * u);
    CHECK(kmr::curve_residual(TorusPoint::finite(z, w), p.lambda) < 1e-11);
    // wtilde = 1 at u = 0 corresponds to w ~ z^2 for large z
    CHECK(std::abs(w / (z * z) - 1.0) < 0.1);
  }
}

TEST_CASE("symmetry group is (Z/2)^4") {
  const auto p = kmr::SurfaceParams::make(0.8, 0.0, 0.0);
  std::vector<TorusPoint> pts;
  for (const Complex& z : kSampleZ)
    pts.push_back(kmr::w_at(z, Complex(0.9, 0.4), p.lambda));
  pts.push_back(TorusPoint::infinity(Complex(1.0, 0.0)));
  pts.push_back(TorusPoint::infinity(Complex(-1.0, 0.0)));

  SUBCASE("every element is an involution preserving the curve") {
    for (unsigned m = 0; m < 16; ++m) {
      const kmr::SymElem e{m};
      for (const auto& pt : pts) {
        const auto img = kmr::apply_symmetry(e, pt);
        CHECK(kmr::curve_residual(img, p.lambda) < 1e-11);
        CHECK(same_point(kmr::apply_symmetry(e, img), pt));
      }
    }
  }

  SUBCASE("masks compose by xor") {
    const TorusPoint pt = pts[0];
    for (unsigned a = 0; a < 16; ++a) {
      for (unsigned b = 0; b < 16; ++b) {
        const auto lhs =
            kmr::apply_symmetry(kmr::SymElem{a}, kmr::apply_symmetry(kmr::SymElem{b}, pt));
        const auto rhs = kmr::apply_symmetry(kmr::SymElem{a ^ b}, pt);
        CHECK(same_point(lhs, rhs));
      }
    }
  }

  SUBCASE("product formulas") {
    for (const auto& pt : pts) {
      if (pt.at_infinity) continue;
      const Complex z = pt.z, w = pt.w;
      const auto d = kmr::apply_symmetry(SymmetryName::Deck, pt);
      CHECK(same_point(d, TorusPoint::finite(z, -w)));
      const Complex zc = std::conj(z);
      const auto e = kmr::apply_symmetry(SymmetryName::CalE, pt);
      CHECK(same_point(
          e, TorusPoint::finite(-1.0 / zc, -std::conj(w) / (zc * zc))));
      const auto f = kmr::apply_symmetry(SymmetryName::CalF, pt);
      CHECK(same_point(
          f, TorusPoint::finite(-1.0 / zc, std::conj(w) / (zc * zc))));
    }
  }

  SUBCASE("conformal or anticonformal by factor parity") {
    CHECK(kmr::sym_elem(SymmetryName::S1).anticonformal());
    CHECK(kmr::sym_elem(SymmetryName::S2).anticonformal());
    CHECK(kmr::sym_elem(SymmetryName::S3).anticonformal());
    CHECK(kmr::sym_elem(SymmetryName::RD).anticonformal());
    CHECK(!kmr::sym_elem(SymmetryName::Deck).anticonformal());
    CHECK(kmr::sym_elem(SymmetryName::CalE).anticonformal());
    CHECK(kmr::sym_elem(SymmetryName::CalF).anticonformal());
    CHECK(!kmr::sym_elem(SymmetryName::Identity).anticonformal());
  }

  SUBCASE("labels") {
    CHECK(kmr::sym_label(kmr::sym_elem(SymmetryName::Deck)) == "Deck");
    CHECK(kmr::sym_label(kmr::sym_elem(SymmetryName::CalE)) == "CalE");
    CHECK(kmr::sym_label(kmr::SymElem{3u}) == "S1*S2");
    CHECK(kmr::sym_label(kmr::SymElem{0u}) == "Id");
  }
}

TEST_CASE("fixed point sets of the generators") {
  const auto p = kmr::SurfaceParams::make(M_PI_4, 0.0, 0.0);
  const double L = p.lambda;

  SUBCASE("S1 fixes imaginary-axis lifts between the branch radii") {
    for (double t : {1.0 / L + 0.05, 1.0, L - 0.05, -1.2, -0.7}) {
      const Complex rhs = kmr::curve_rhs(I * t, L);
      REQUIRE(rhs.real() < 0.0);  // w is purely imaginary here
      const Complex w = I * std::sqrt(-rhs.real());
      const TorusPoint pt = TorusPoint::finite(I * t, w);
      CHECK(same_point(kmr::apply_symmetry(SymmetryName::S1, pt), pt));
      // RD moves this lift to its deck image
      CHECK(same_point(kmr::apply_symmetry(SymmetryName::RD, pt),
                       kmr::deck(pt)));
    }
  }

  SUBCASE("RD fixes imaginary-axis lifts outside the branch radii") {
    for (double t : {0.0, 0.2, -0.3, L + 0.5, -L - 1.0}) {
      const Complex rhs = kmr::curve_rhs(I * t, L);
      REQUIRE(rhs.real() > 0.0);  // w is real here
      const Complex w = std::sqrt(rhs.real());
      const TorusPoint pt = TorusPoint::finite(I * t, w);
      CHECK(same_point(kmr::apply_symmetry(SymmetryName::RD, pt), pt));
      CHECK(same_point(kmr::apply_symmetry(SymmetryName::S1, pt),
                       kmr::deck(pt)));
    }
  }

  SUBCASE("S2 fixes real-axis lifts on both sheets") {
    for (double x : {0.0, 0.6, -1.7, 3.0}) {
      const Complex w = std::sqrt(kmr::curve_rhs(Complex(x, 0), L));
      for (double sgn : {1.0, -1.0}) {
        const TorusPoint pt = TorusPoint::finite(Complex(x, 0), sgn * w);
        CHECK(same_point(kmr::apply_symmetry(SymmetryName::S2, pt), pt));
      }
    }
  }

  SUBCASE("S3 fixes all unit-circle lifts") {
    const double s = L * L + 1.0 / (L * L);
    for (double t : {0.1, 1.3, 2.9, -2.0, -0.6}) {
      const Complex w = std::exp(I * t) * std::sqrt(s + 2.0 * std::cos(2.0 * t));
      for (double sgn : {1.0, -1.0}) {
        const TorusPoint pt = TorusPoint::finite(std::exp(I * t), sgn * w);
        CHECK(same_point(kmr::apply_symmetry(SymmetryName::S3, pt), pt));
      }
    }
  }

  SUBCASE("CalE and CalF move every point") {
    for (const Complex& z : kSampleZ) {
      const auto pt = kmr::w_at(z, Complex(1.0, 0.0), p.lambda);
      CHECK(std::abs(kmr::apply_symmetry(SymmetryName::CalE, pt).z - pt.z) >
            0.05);
      CHECK(std::abs(kmr::apply_symmetry(SymmetryName::CalF, pt).z - pt.z) >
            0.05);
    }
  }

  SUBCASE("points over infinity") {
    const TorusPoint A = TorusPoint::infinity(Complex(1.0, 0.0));
    const auto App = kmr::deck(A);
    CHECK(App.at_infinity);
    CHECK(std::abs(App.w + 1.0) < 1e-15);
    const auto Ap = kmr::apply_symmetry(SymmetryName::CalE, A);
    CHECK(!Ap.at_infinity);
    CHECK(std::abs(Ap.z) < 1e-15);
    CHECK(std::abs(Ap.w + 1.0) < 1e-15);
    const auto Appp = kmr::apply_symmetry(SymmetryName::CalF, A);
    CHECK(!Appp.at_infinity);
    CHECK(std::abs(Appp.z) < 1e-15);
    CHECK(std::abs(Appp.w - 1.0) < 1e-15);
  }
}

}  // TEST_SUITE
