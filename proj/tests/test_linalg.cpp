#include <doctest.h>

#include <algorithm>
#include <random>

#include "cwsrep/errors.hpp"
#include "cwsrep/linalg.hpp"

using namespace cwsrep;

TEST_CASE("roots of real polynomials") {
  // (x - 1)(x + 2)(x - 3) = x^3 - 2x^2 - 5x + 6
  auto r = poly_roots_real({6.0, -5.0, -2.0, 1.0});
  std::vector<double> re;
  for (const auto& z : r) {
    CHECK(std::abs(z.imag()) < 1e-12);
    re.push_back(z.real());
  }
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(-2.0));
  CHECK(re[1] == doctest::Approx(1.0));
  CHECK(re[2] == doctest::Approx(3.0));
  CHECK(poly_roots_real({2.0, 0.0}).empty());
  CHECK_THROWS_AS(poly_roots_real({0.0, 0.0}), NumericalError);
}

TEST_CASE("repeated symmetric roots") {
  // (x^2 - 1)^2 and (x^2 - 1)^3 stall plain QR on the companion matrix
  for (const auto& c : {std::vector<double>{1, 0, -2, 0, 1}, std::vector<double>{-1, 0, 3, 0, -3, 0, 1}}) {
    const auto r = poly_roots_real(c);
    CHECK(r.size() == c.size() - 1);
    for (const auto& z : r) CHECK(std::min(std::abs(z - 1.0), std::abs(z + 1.0)) < 1e-4);
  }
}

TEST_CASE("roots of complex polynomials") {
  // x^2 + 1 and (x - i)(x - 2)
  auto r = poly_roots({1.0, 0.0, 1.0});
  CHECK(r.size() == 2);
  for (const auto& z : r) CHECK(std::abs(z * z + 1.0) < 1e-12);
  const std::complex<double> i(0, 1);
  r = poly_roots({2.0 * i, -2.0 - i, 1.0});
  for (const auto& z : r) CHECK(std::min(std::abs(z - i), std::abs(z - 2.0)) < 1e-12);
}

TEST_CASE("nullspace and least squares") {
  CMat m(2, 3);
  m << 1, 0, 1, 0, 1, 1;
  const Nullspace ns = numerical_nullspace(m, 1e-12);
  REQUIRE(ns.basis.cols() == 1);
  CHECK((m * ns.basis).norm() < 1e-12);
  CHECK(ns.basis.col(0).norm() == doctest::Approx(1.0));
  CMat a(3, 2), b(3, 1);
  a << 1, 0, 0, 1, 1, 1;
  b << 1, 2, 3;
  const CMat x = least_squares(a, b);
  CHECK(std::abs(x(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(x(1, 0) - 2.0) < 1e-12);
}

TEST_CASE("random unitary") {
  std::mt19937_64 rng(1);
  const CMat u = random_unitary(5, rng);
  CHECK((u.adjoint() * u - CMat::Identity(5, 5)).norm() < 1e-12);
}
