#include <doctest.h>

#include <cmath>

#include "kmr/cycles.hpp"
#include "kmr/special.hpp"

using kmr::Complex;
using kmr::CycleName;

namespace {
const Complex kTwoPiI(0.0, 2.0 * M_PI);
}

TEST_SUITE("cycles") {

TEST_CASE("gamma2 at the base point") {
  const auto p = kmr::SurfaceParams::make(M_PI_4, 0.0, 0.0);
  const auto g = kmr::gauss_coeffs(p);
  const auto c = kmr::make_cycle(CycleName::Gamma2, p);
  CHECK(c.components.size() == 1);
  CHECK(std::abs(std::abs(c.components[0].z_path.front()) - 1.0) < 1e-14);
  const auto ints = kmr::cycle_forms_integral(c, p, g);
  CHECK(std::abs(ints[0] - kTwoPiI) < 1e-9);
  CHECK(std::abs(ints[1]) < 1e-9);
  CHECK(std::abs(ints[2]) < 1e-9);
}

TEST_CASE("gamma2 on the walls is perturbed and corrected") {
  SUBCASE("beta = pi/2") {
    const auto p = kmr::SurfaceParams::make(0.7, 0.4, M_PI_2);
    const auto g = kmr::gauss_coeffs(p);
    const auto c = kmr::make_cycle(CycleName::Gamma2, p);
    REQUIRE(c.components.size() == 2);  // circle + zero loop
    CHECK(std::abs(c.components[0].z_path.front()) < 1.0 - 1e-4);
    CHECK(c.components[1].coeff == 1.0);
    const auto ints = kmr::cycle_forms_integral(c, p, g);
    CHECK(std::abs(ints[0] - kTwoPiI) < 1e-9);
  }
  SUBCASE("alpha = pi/2") {
    const auto p = kmr::SurfaceParams::make(0.7, M_PI_2, 0.0);
    const auto g = kmr::gauss_coeffs(p);
    const auto c = kmr::make_cycle(CycleName::Gamma2, p);
    REQUIRE(c.components.size() == 2);
    const auto ints = kmr::cycle_forms_integral(c, p, g);
    CHECK(std::abs(ints[0] - kTwoPiI) < 1e-9);
  }
  SUBCASE("beta beyond pi/2 needs both corrections") {
    const auto p = kmr::SurfaceParams::make(0.65, 0.5, 2.0);
    const auto g = kmr::gauss_coeffs(p);
    const auto c = kmr::make_cycle(CycleName::Gamma2, p);
    REQUIRE(c.components.size() == 3);
    CHECK(c.components[1].coeff == 1.0);
    CHECK(c.components[2].coeff == -1.0);
    const auto ints = kmr::cycle_forms_integral(c, p, g);
    CHECK(std::abs(ints[0] - kTwoPiI) < 1e-9);
  }
  SUBCASE("pole approach aimed at a branch point is flanked") {
    // alpha = 0 with cot(beta/2) < 1/lambda: the radial chord to the pole
    // runs straight through the inner branch point
    const auto p = kmr::SurfaceParams::make(0.8, 0.0, 2.6);
    const auto g = kmr::gauss_coeffs(p);
    const auto c = kmr::make_cycle(CycleName::Gamma2, p);
    REQUIRE(c.components.size() == 3);
    const auto ints = kmr::cycle_forms_integral(c, p, g);
    CHECK(std::abs(ints[0] - kTwoPiI) < 1e-9);
    // zero height period: the dh/g and g dh integrals are conjugate
    CHECK(std::abs(ints[1] - std::conj(ints[2])) < 1e-9);
  }
}

TEST_CASE("gamma2 integrals are homotopy invariant") {
  const auto p = kmr::SurfaceParams::make(0.8, 0.5, 0.7);
  const auto g = kmr::gauss_coeffs(p);
  const auto c = kmr::make_cycle(CycleName::Gamma2, p);
  auto variant = c;
  const double scale = 0.9;
  for (auto& z : variant.components[0].z_path) z *= scale;
  variant.components[0].start_w = std::sqrt(
      kmr::curve_rhs(variant.components[0].z_path.front(), p.lambda));
  const auto a = kmr::cycle_forms_integral(c, p, g);
  const auto b = kmr::cycle_forms_integral(variant, p, g);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-9);
}

TEST_CASE("gamma1 height period equals the closed form") {
  SUBCASE("base point") {
    const auto p = kmr::SurfaceParams::make(M_PI_4, 0.0, 0.0);
    const auto g = kmr::gauss_coeffs(p);
    const auto c = kmr::make_cycle(CycleName::Gamma1, p);
    // branch-segment component plus the two class-completing end loops
    CHECK(c.components.size() == 3);
    const auto ints = kmr::cycle_forms_integral(c, p, g);
    CHECK(std::abs(ints[0] - kmr::f1_of_theta(M_PI_4)) < 1e-8);
  }
  SUBCASE("generic parameters do not change the height period") {
    const auto p = kmr::SurfaceParams::make(0.8, 0.5, 0.7);
    const auto g = kmr::gauss_coeffs(p);
    const auto c = kmr::make_cycle(CycleName::Gamma1, p);
    const auto ints = kmr::cycle_forms_integral(c, p, g);
    CHECK(std::abs(ints[0] - kmr::f1_of_theta(0.8)) < 1e-8);
  }
  SUBCASE("pole on the branch segment is looped out") {
    const auto p = kmr::SurfaceParams::make(0.8, 0.0, 1.2);
    const auto g = kmr::gauss_coeffs(p);
    const auto c = kmr::make_cycle(CycleName::Gamma1, p);
    REQUIRE(c.components.size() == 4);
    CHECK(c.components[0].coeff == -c.components[1].coeff);
    const auto ints = kmr::cycle_forms_integral(c, p, g);
    CHECK(std::abs(ints[0] - kmr::f1_of_theta(0.8)) < 1e-8);
  }
}

TEST_CASE("end loops reproduce the residues") {
  const auto p = kmr::SurfaceParams::make(0.8, 0.5, 0.7);
  const auto g = kmr::gauss_coeffs(p);
  const auto E = kmr::ends(p);

  const auto cA = kmr::make_cycle(CycleName::GammaA, p);
  CHECK(cA.components.size() == 1);
  CHECK(cA.components[0].u_chart == E.A.point.at_infinity);
  const auto iA = kmr::cycle_forms_integral(cA, p, g);
  const auto rA = kmr::residues_at_end(p, g, E.A);
  CHECK(std::abs(iA[0]) < 1e-9);
  CHECK(std::abs(iA[2] - kTwoPiI * rA.g_times_height) < 1e-8);

  const auto cAp = kmr::make_cycle(CycleName::GammaAPrime, p);
  CHECK(!cAp.components[0].u_chart);
  const auto iAp = kmr::cycle_forms_integral(cAp, p, g);
  const auto rAp = kmr::residues_at_end(p, g, E.Ap);
  CHECK(std::abs(iAp[1] - kTwoPiI * rAp.height_over_g) < 1e-8);

  // the four end loops sum to zero in every form
  kmr::CVec<3> sum{};
  for (const CycleName n :
       {CycleName::GammaA, CycleName::GammaAPrime, CycleName::GammaADoublePrime,
        CycleName::GammaATriplePrime})
    sum += kmr::cycle_forms_integral(kmr::make_cycle(n, p), p, g);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(sum[i]) < 1e-8);
}

TEST_CASE("cycle names") {
  for (const CycleName n :
       {CycleName::GammaA, CycleName::GammaAPrime, CycleName::GammaADoublePrime,
        CycleName::GammaATriplePrime, CycleName::Gamma1, CycleName::Gamma2})
    CHECK(kmr::cycle_name_of(kmr::to_string(n)) == n);
  CHECK_THROWS_AS(kmr::cycle_name_of("gamma3"), kmr::DomainError);
}

TEST_CASE("construction is deterministic") {
  const auto p = kmr::SurfaceParams::make(0.65, 0.5, 2.0);
  const auto a = kmr::make_cycle(CycleName::Gamma2, p);
  const auto b = kmr::make_cycle(CycleName::Gamma2, p);
  REQUIRE(a.components.size() == b.components.size());
  for (size_t k = 0; k < a.components.size(); ++k) {
    CHECK(a.components[k].start_w == b.components[k].start_w);
    CHECK(a.components[k].z_path == b.components[k].z_path);
  }
}

}  // TEST_SUITE
