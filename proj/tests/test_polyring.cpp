#include <doctest.h>

#include <cmath>
#include <random>

#include "cwsrep/errors.hpp"
#include "cwsrep/polyring.hpp"
#include "test_util.hpp"

using namespace cwsrep;
using testutil::random_poly;

namespace {

std::array<cplx, 3> random_point(std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  return {cplx(N(rng), N(rng)), cplx(N(rng), N(rng)), cplx(N(rng), N(rng))};
}

// Direct power-sum evaluation in (t, x, y) without going through u, v.
cplx eval_by_monomials(const HomPoly& f, cplx t, cplx x, cplx y) {
  const cplx u = x + cplx(0, 1) * y, v = x - cplx(0, 1) * y;
  cplx s = 0.0;
  f.for_each([&](int a, int j, int k, cplx c) { s += c * std::pow(t, a) * std::pow(u, j) * std::pow(v, k); });
  return s;
}

}  // namespace

TEST_CASE("storage layout puts t^d last") {
  HomPoly f(3);
  CHECK(f.size() == 10);
  f.coeff(3, 0, 0) = 2.0;
  CHECK(f.lead() == cplx(2.0));
  CHECK(HomPoly::index(3, 0, 0) == 0);
  CHECK(HomPoly::index(3, 3, 0) == 9);
  CHECK_THROWS_AS(f.coeff(1, 1, 0), ValidationError);
  CHECK_THROWS_AS(HomPoly(-1), ValidationError);
}

TEST_CASE("evaluation agrees with the expanded (t, x, y) form") {
  std::mt19937_64 rng(3);
  for (int d = 0; d <= 7; ++d) {
    const HomPoly f = random_poly(d, 100 + d);
    const TxyPoly e = expand_txy(f);
    for (int trial = 0; trial < 5; ++trial) {
      const auto p = random_point(rng);
      const cplx a = f.eval_txy(p[0], p[1], p[2]);
      const cplx b = e.eval(p[0], p[1], p[2]);
      const cplx c = eval_by_monomials(f, p[0], p[1], p[2]);
      CHECK(std::abs(a - b) <= 1e-10 * (1.0 + std::abs(b)));
      CHECK(std::abs(a - c) <= 1e-10 * (1.0 + std::abs(c)));
    }
  }
}

TEST_CASE("linear forms") {
  const cplx t(0.3, 0.1), x(-1.2, 0.4), y(0.7, -2.0);
  CHECK(std::abs(HomPoly::x().eval_txy(t, x, y) - x) < 1e-15);
  CHECK(std::abs(HomPoly::y().eval_txy(t, x, y) - y) < 1e-15);
  CHECK(std::abs(HomPoly::uv().eval_txy(t, x, y) - (x * x + y * y)) < 1e-14);
}

TEST_CASE("products and powers evaluate multiplicatively") {
  std::mt19937_64 rng(5);
  const HomPoly f = random_poly(3, 1), g = random_poly(4, 2);
  const HomPoly fg = f * g;
  const HomPoly f3 = pow(f, 3);
  CHECK(fg.degree() == 7);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = random_point(rng);
    const cplx a = f.eval_txy(p[0], p[1], p[2]), b = g.eval_txy(p[0], p[1], p[2]);
    CHECK(std::abs(fg.eval_txy(p[0], p[1], p[2]) - a * b) <= 1e-10 * (1.0 + std::abs(a * b)));
    CHECK(std::abs(f3.eval_txy(p[0], p[1], p[2]) - a * a * a) <= 1e-10 * (1.0 + std::abs(a * a * a)));
  }
  CHECK(pow(f, 0).degree() == 0);
  CHECK_THROWS_AS(pow(f, -1), ValidationError);
  CHECK_THROWS_AS(f + g, ValidationError);
}

TEST_CASE("derivatives match central differences") {
  const HomPoly f = random_poly(5, 9);
  const cplx t(0.4, -0.2), x(0.9, 0.3), y(-0.5, 0.8);
  const double h = 1e-5;
  auto fd = [&](int which) {
    std::array<cplx, 3> p{t, x, y}, q{t, x, y};
    p[which] += h;
    q[which] -= h;
    return (f.eval_txy(p[0], p[1], p[2]) - f.eval_txy(q[0], q[1], q[2])) / (2 * h);
  };
  CHECK(std::abs(f.diff_t().eval_txy(t, x, y) - fd(0)) < 1e-6);
  CHECK(std::abs(f.diff_x().eval_txy(t, x, y) - fd(1)) < 1e-6);
  CHECK(std::abs(f.diff_y().eval_txy(t, x, y) - fd(2)) < 1e-6);
}

TEST_CASE("conjugation and realness") {
  const HomPoly f = random_poly(4, 11);
  const HomPoly r = symmetrize_real(f);
  const InvarianceReport rep = invariance_report(r, 1);
  CHECK(rep.real_valued);
  CHECK(max_coeff_diff(r.conj(), r) == 0.0);
  // a real polynomial takes real values on R^3
  const cplx val = r.eval_txy(0.3, -1.1, 0.7);
  CHECK(std::abs(val.imag()) < 1e-12 * (1.0 + std::abs(val)));
  // swap_uv is y -> -y
  const cplx a = f.swap_uv().eval_txy(0.3, -1.1, 0.7);
  const cplx b = f.eval_txy(0.3, -1.1, -0.7);
  CHECK(std::abs(a - b) < 1e-12 * (1.0 + std::abs(b)));
}

TEST_CASE("normalize_lead") {
  HomPoly f = HomPoly::t() * HomPoly::t() * 4.0 - HomPoly::uv();
  const HomPoly g = normalize_lead(f);
  CHECK(g.lead() == cplx(1.0));
  CHECK(std::abs(g.coeff(0, 1, 1) + 0.25) < 1e-15);
  CHECK_THROWS_AS(normalize_lead(HomPoly::uv()), ValidationError);
}

TEST_CASE("group action matches the matrix action on points") {
  std::mt19937_64 rng(21);
  const HomPoly f = random_poly(4, 12);
  for (int n : {1, 2, 3, 5}) {
    for (int power = 0; power < n; ++power)
      for (bool reflect : {false, true}) {
        const GroupElement g{n, power, reflect, false};
        const auto M = g.matrix();
        const auto p = random_point(rng);
        std::array<cplx, 3> q{};
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) q[r] += M[3 * r + c] * p[c];
        const cplx lhs = act_group(f, g).eval_txy(p[0], p[1], p[2]);
        const cplx rhs = f.eval_txy(q[0], q[1], q[2]);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(rhs)));
      }
  }
}

TEST_CASE("group action is compatible with the product") {
  const HomPoly f = random_poly(5, 13);
  const int n = 5;
  std::vector<GroupElement> els;
  for (int p = 0; p < n; ++p)
    for (bool r : {false, true}) els.push_back({n, p, r, false});
  for (const auto& g : els)
    for (const auto& h : els) {
      const HomPoly lhs = act_group(act_group(f, g), h);
      const HomPoly rhs = act_group(f, g * h);
      CHECK(max_coeff_diff(lhs, rhs) <= 1e-11 * f.max_abs());
    }
  const GroupElement r = GroupElement::rotation(n);
  const GroupElement s = GroupElement::reflection(n);
  CHECK(s * r * s == r.inverse());
  GroupElement acc = GroupElement::identity(n);
  for (int i = 0; i < n; ++i) acc = acc * r;
  CHECK(acc == GroupElement::identity(n));
}

TEST_CASE("eigenspace projection splits f") {
  const HomPoly f = random_poly(6, 17);
  for (int n : {2, 3, 4}) {
    HomPoly sum(6);
    for (int ell = 0; ell < n; ++ell) {
      const HomPoly p = eigenspace_project(f, ell, n);
      sum += p;
      // rot^{-1} pullback scales the omega^ell component by omega^ell
      const HomPoly rotated = act_group(p, GroupElement::rotation(n).inverse());
      const cplx w = std::polar(1.0, 2.0 * std::numbers::pi * ell / n);
      CHECK(max_coeff_diff(rotated, p * w) <= 1e-11 * (1.0 + f.max_abs()));
    }
    CHECK(max_coeff_diff(sum, f) <= 1e-14 * f.max_abs());
  }
}

TEST_CASE("eigenspace dimensions") {
  CHECK(eigenspace_dimension(3, 5, 0) == 7);
  CHECK(eigenspace_dimension(3, 5, 1) == 7);
  CHECK(eigenspace_dimension(3, 5, 2) == 7);
  CHECK(eigenspace_dimension(4, 11, 0) == 18);
  CHECK(eigenspace_dimension(4, 11, 1) == 21);
  CHECK(eigenspace_dimension(4, 11, 2) == 18);
  CHECK(eigenspace_dimension(4, 11, 3) == 21);
  for (int n = 1; n <= 8; ++n)
    for (int q = 1; q <= 3; ++q) {
      int total = 0;
      for (int ell = 0; ell < n; ++ell) {
        CHECK(eigenspace_dimension(n, q * n - 1, ell) == eigenspace_dimension_closed_form(n, q, ell));
        CHECK(static_cast<int>(eigenspace_monomials(n, q * n - 1, ell).size()) ==
              eigenspace_dimension(n, q * n - 1, ell));
        total += eigenspace_dimension(n, q * n - 1, ell);
      }
      CHECK(total == static_cast<int>(HomPoly::term_count(q * n - 1)));
    }
}

TEST_CASE("invariance report on known forms") {
  const HomPoly t = HomPoly::t(), u = HomPoly::u(), v = HomPoly::v();
  const HomPoly circle = t * t - HomPoly::uv();
  const HomPoly cubic_d = pow(u, 3) + pow(v, 3);
  const HomPoly cubic_c = (pow(u, 3) - pow(v, 3)) * cplx(0, 1);
  const HomPoly tu = t * u;

  InvarianceReport r = invariance_report(circle, 7);
  CHECK((r.real_valued && r.cyclic && r.dihedral));
  r = invariance_report(cubic_d, 3);
  CHECK((r.real_valued && r.cyclic && r.dihedral));
  r = invariance_report(cubic_c, 3);
  CHECK((r.real_valued && r.cyclic));
  CHECK_FALSE(r.dihedral);
  r = invariance_report(cubic_c, 2);
  CHECK_FALSE(r.cyclic);
  r = invariance_report(tu, 1);
  CHECK_FALSE(r.real_valued);
  // the definition agrees with the action
  const HomPoly f = symmetrize_real(eigenspace_project(random_poly(6, 31), 0, 3));
  CHECK(invariance_report(f, 3).cyclic);
  CHECK(max_coeff_diff(act_group(f, GroupElement::rotation(3)), f) <= 1e-12 * f.max_abs());
}

TEST_CASE("dihedral symmetrization") {
  const HomPoly f = symmetrize_dihedral(eigenspace_project(random_poly(6, 33), 0, 3));
  const InvarianceReport r = invariance_report(f, 3);
  CHECK(r.dihedral);
  CHECK(max_coeff_diff(act_group(f, GroupElement::reflection(3)), f) <= 1e-12 * f.max_abs());
}
