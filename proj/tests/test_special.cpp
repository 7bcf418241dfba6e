#include <doctest.h>

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "kmr/errors.hpp"
#include "kmr/quadrature.hpp"
#include "kmr/special.hpp"

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

// Independent route: the substitution t = lambda sin(s) removes the endpoint
// singularity, leaving a regular integrand for plain adaptive quadrature.
double f1_by_substitution(double theta) {
  const double l = kmr::lambda_of_theta(theta);
  const double mu = kmr::mu_of_theta(theta);
  const double s0 = std::asin(1.0 / l);
  const double integral = kmr::integrate_real(
      [l](double s) {
        const double ls = l * std::sin(s);
        return 1.0 / std::sqrt(ls * ls - 1.0 / (l * l));
      },
      s0, kPi / 2.0);
  return -4.0 * mu * integral;
}
}  // namespace

TEST_SUITE("special") {

TEST_CASE("elliptic K values and monotonicity") {
  CHECK(kmr::elliptic_K(0.0) == doctest::Approx(kPi / 2.0).epsilon(1e-15));
  CHECK(kmr::elliptic_K(0.5) == doctest::Approx(1.8540746773013719).epsilon(1e-14));

  double prev = 0.0;
  for (int i = 0; i <= 9; ++i) {
    const double k = kmr::elliptic_K(0.1 * i);
    CHECK(k >= kPi / 2.0 - 1e-15);
    CHECK(k > prev);
    prev = k;
  }

  // growth toward the m -> 1 divergence
  double last = 0.0;
  for (int e = 4; e <= 12; ++e) {
    const double k = kmr::elliptic_K(1.0 - std::pow(10.0, -e));
    CHECK(k > last);
    last = k;
  }

  CHECK_THROWS_AS(kmr::elliptic_K(-0.1), kmr::DomainError);
  CHECK_THROWS_AS(kmr::elliptic_K(1.0), kmr::DomainError);
  CHECK_THROWS_AS(kmr::elliptic_K(1.5), kmr::DomainError);
}

TEST_CASE("elliptic K agrees with its defining integral") {
  for (double m : {0.1, 0.37, 0.5, 0.83, 0.95}) {
    const double direct = kmr::integrate_real(
        [m](double u) {
          const double su = std::sin(u);
          return 1.0 / std::sqrt(1.0 - m * su * su);
        },
        0.0, kPi / 2.0);
    CHECK(kmr::elliptic_K(m) == doctest::Approx(direct).epsilon(1e-11));
  }
}

TEST_CASE("lambda of theta") {
  CHECK(kmr::lambda_of_theta(kPi / 4.0) ==
        doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-15));
  // d(cot(theta/2))/dtheta = -1 at theta = pi/2, so lambda(pi/2 - eps) = 1 + eps
  CHECK(kmr::lambda_of_theta(kPi / 2.0 - 1e-6) - 1.0 ==
        doctest::Approx(1e-6).epsilon(1e-6));

  double prev = std::numeric_limits<double>::infinity();
  for (double th = 0.1; th < kPi / 2.0 - 0.01; th += 0.1) {
    const double l = kmr::lambda_of_theta(th);
    CHECK(l > 1.0);
    CHECK(l < prev);
    prev = l;
  }

  CHECK(kmr::lambda_of_theta(1e-8) > 1e7);  // divergence toward theta -> 0

  CHECK_THROWS_AS(kmr::lambda_of_theta(0.0), kmr::DomainError);
  CHECK_THROWS_AS(kmr::lambda_of_theta(kPi / 2.0), kmr::DomainError);
  CHECK_THROWS_AS(kmr::lambda_of_theta(-0.3), kmr::DomainError);
}

TEST_CASE("mu of theta") {
  CHECK(kmr::mu_of_theta(kPi / 4.0) ==
        doctest::Approx(2.3962804694711844).epsilon(1e-13));

  double prev = std::numeric_limits<double>::infinity();
  for (double th = 0.1; th <= 1.47; th += 0.05) {
    const double m = kmr::mu_of_theta(th);
    CHECK(m > 0.0);
    CHECK(m < prev);
    prev = m;
    // product identity: mu * K(sin^2 th) * sin th == pi
    const double s = std::sin(th);
    CHECK(m * kmr::elliptic_K(s * s) * s == doctest::Approx(kPi).epsilon(1e-12));
  }

  // theta -> pi/2: mu vanishes, but only logarithmically (K(sin^2) ~ -log cos)
  const double m1 = kmr::mu_of_theta(1.4);
  const double m2 = kmr::mu_of_theta(kPi / 2.0 - 1e-3);
  const double m3 = kmr::mu_of_theta(kPi / 2.0 - 1e-6);
  CHECK(m2 < m1);
  CHECK(m3 < m2);
  CHECK(m3 < 0.25);
  // theta -> 0 asymptote 2/theta
  CHECK(kmr::mu_of_theta(1e-4) * 1e-4 == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("f1 of theta") {
  CHECK(kmr::f1_of_theta(kPi / 4.0) ==
        doctest::Approx(-6.2831853071795865).epsilon(1e-10));
  CHECK(kmr::f1_of_theta(0.3) ==
        doctest::Approx(-10.330649227952724).epsilon(1e-10));
  CHECK(kmr::f1_of_theta(1.0) ==
        doctest::Approx(-5.1446816716131071).epsilon(1e-10));

  for (double th : {0.3, 0.8, 1.3}) {
    CHECK(kmr::f1_of_theta(th) < 0.0);
  }

  // two independent routes: regularizing substitution, and the closed form
  // -2 pi K(cos^2) / K(sin^2)
  for (double th : {0.25, 0.7, kPi / 4.0, 1.1, 1.4}) {
    const double f = kmr::f1_of_theta(th);
    CHECK(f == doctest::Approx(f1_by_substitution(th)).epsilon(1e-9));
    const double c = std::cos(th), s = std::sin(th);
    const double closed = -2.0 * kPi * kmr::elliptic_K(c * c) / kmr::elliptic_K(s * s);
    CHECK(f == doctest::Approx(closed).epsilon(1e-10));
  }
}

TEST_CASE("golden value file matches the implementation") {
  std::ifstream in(KMR_GOLDEN_FILE);
  REQUIRE(in.good());
  nlohmann::json g;
  in >> g;
  CHECK(kmr::elliptic_K(g["elliptic_k_parameter"].get<double>()) ==
        doctest::Approx(g["elliptic_k_value"].get<double>()).epsilon(1e-14));
  CHECK(kmr::mu_of_theta(g["mu_theta"].get<double>()) ==
        doctest::Approx(g["mu_value"].get<double>()).epsilon(1e-13));
  CHECK(kmr::f1_of_theta(g["f1_theta"].get<double>()) ==
        doctest::Approx(g["f1_value"].get<double>()).epsilon(1e-10));
}

}  // TEST_SUITE
