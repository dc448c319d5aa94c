#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cwsrep/errors.hpp"
#include "cwsrep/hyperbolicity.hpp"
#include "test_util.hpp"

using namespace cwsrep;
using testutil::witness;

namespace {

const HomPoly kT = HomPoly::t();
const HomPoly kCircle = HomPoly::t() * HomPoly::t() - HomPoly::uv();

}  // namespace

TEST_CASE("restriction roots of the circle") {
  const HomPoly f = witness(0, {4.0});
  for (const auto& dir : sample_directions(16, 3)) {
    auto roots = restriction_roots(f, dir[0], dir[1]);
    REQUIRE(roots.size() == 2);
    std::vector<double> re{roots[0].real(), roots[1].real()};
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(re[1] == doctest::Approx(2.0).epsilon(1e-12));
  }
  const auto c = restriction(f, 1.0, 0.0);
  REQUIRE(c.size() == 3);
  CHECK(c[0] == doctest::Approx(-4.0));
  CHECK(c[2] == doctest::Approx(1.0));
}

TEST_CASE("sample directions") {
  const auto d1 = sample_directions(40, 5), d2 = sample_directions(40, 5);
  REQUIRE(d1.size() == 40);
  for (std::size_t i = 0; i < d1.size(); ++i) {
    CHECK(std::hypot(d1[i][0], d1[i][1]) == doctest::Approx(1.0));
    CHECK(d1[i] == d2[i]);
  }
  CHECK(d1[0] == std::array<double, 2>{1.0, 0.0});
}

TEST_CASE("verdicts on simple forms") {
  CHECK(hyperbolicity_verdict(kCircle).status == HypStatus::strictly_hyperbolic);
  CHECK(hyperbolicity_verdict(kT * kT + HomPoly::uv()).status == HypStatus::not_hyperbolic);
  // a repeated factor is hyperbolic but not strict
  CHECK(hyperbolicity_verdict(kCircle * kCircle).status == HypStatus::hyperbolic);
  // t^2 (t^2 - x^2 - y^2): double root at 0 in every direction
  CHECK(hyperbolicity_verdict(witness(2, {1.0})).status == HypStatus::hyperbolic);
  CHECK(hyperbolicity_verdict(witness(0, {1.0, 2.0, 3.0})).status == HypStatus::strictly_hyperbolic);
  // t^2 - x^2 + y^2 is real but not hyperbolic
  const HomPoly hyp = kT * kT - HomPoly::x() * HomPoly::x() + HomPoly::y() * HomPoly::y();
  const HypVerdict v = hyperbolicity_verdict(hyp);
  CHECK(v.status == HypStatus::not_hyperbolic);
  CHECK(v.max_imag > 0.1);
  CHECK_THROWS_AS(hyperbolicity_verdict(HomPoly::uv()), ValidationError);
}

TEST_CASE("three real lines are hyperbolic but singular") {
  // (t + x)(t - x/2 + sqrt(3) y/2)(t - x/2 - sqrt(3) y/2)
  const double r3 = std::sqrt(3.0) / 2.0;
  const HomPoly x = HomPoly::x(), y = HomPoly::y();
  const HomPoly f = (kT + x) * (kT - x * 0.5 + y * r3) * (kT - x * 0.5 - y * r3);
  CHECK(hyperbolicity_verdict(f).status == HypStatus::hyperbolic);
  CHECK(invariance_report(f, 3).dihedral);
}

TEST_CASE("Nuij step formula") {
  // T_s t^2 = t^2 - 2 s^2 uv
  const HomPoly r = nuij_step(kT * kT, 0.5);
  CHECK(r.coeff(2, 0, 0) == cplx(1.0));
  CHECK(std::abs(r.coeff(0, 1, 1) + 0.5) < 1e-15);
  // T_s t^3 = t^3 - 6 s^2 t uv
  const HomPoly r3 = nuij_step(pow(kT, 3), 0.1);
  CHECK(std::abs(r3.coeff(1, 1, 1) + 0.06) < 1e-15);
  // against the definition f - s^2 (x^2+y^2) f_tt
  const HomPoly f = witness(1, {1.0, 3.0});
  const double s = 0.3;
  const HomPoly expect = f - HomPoly::uv() * f.diff_t().diff_t() * (s * s);
  CHECK(max_coeff_diff(nuij_step(f, s), expect) < 1e-13);
}

TEST_CASE("Nuij strictification of degenerate witness forms") {
  for (const auto& f : {witness(2, {1.0}), witness(0, {1.0, 1.0}), witness(3, {}), witness(1, {2.0, 2.0, 0.5})}) {
    const HomPoly g = nuij_strictify(f, 0.2);
    CHECK(hyperbolicity_verdict(g).status == HypStatus::strictly_hyperbolic);
  }
  CHECK_THROWS_AS(nuij_strictify(kT * kT + HomPoly::uv(), 0.2), AssumptionError);
  CHECK_THROWS_AS(nuij_strictify(kCircle, 0.0), ValidationError);
}

TEST_CASE("scaling and retraction endpoints") {
  const HomPoly f = witness(1, {1.0, 2.0});
  const HomPoly g = scale_xy(f, 0.5);
  CHECK(std::abs(g.eval_txy(1.0, 0.3, 0.2) - f.eval_txy(1.0, 0.075, 0.05)) < 1e-14);
  CHECK(max_coeff_diff(retraction_point(f, 1.0), f) < 1e-14);
  // s = 0 collapses onto T_1^d t^d
  HomPoly td = pow(kT, f.degree());
  for (int i = 0; i < f.degree(); ++i) td = nuij_step(td, 1.0);
  CHECK(max_coeff_diff(retraction_point(f, 0.0), td) < 1e-12);
  for (double s : {0.0, 0.25, 0.5, 0.75})
    CHECK(hyperbolicity_verdict(retraction_point(f, s)).status == HypStatus::strictly_hyperbolic);
  CHECK_THROWS_AS(retraction_point(f, 1.5), ValidationError);
}

TEST_CASE("derivative interlaces") {
  const HomPoly f = witness(0, {1.0, 2.0, 5.0});
  const HomPoly g = default_interlacer(f);
  CHECK(g.degree() == 5);
  CHECK(max_coeff_diff(g, f.diff_t() * (1.0 / 6.0)) < 1e-14);
  const InterlaceVerdict v = interlacing_verdict(f, g);
  CHECK(v.interlaces);
  CHECK(v.strict);
  CHECK(v.status == "strict");
}

TEST_CASE("interlacing failures") {
  const HomPoly f = witness(0, {1.0, 4.0});
  // roots +-3 on every line: outside the roots +-1, +-2 of f
  const HomPoly bad = (kT * kT - HomPoly::uv() * 9.0) * kT;
  const InterlaceVerdict v = interlacing_verdict(f, bad);
  CHECK_FALSE(v.interlaces);
  CHECK(v.status == "fails");
  // t (t^2 - 2 uv) has roots 0, +-sqrt 2: the roots of f alternate with them
  const HomPoly ok = (kT * kT - HomPoly::uv() * 2.0) * kT;
  CHECK(interlacing_verdict(f, ok).strict);
  // common root: weak interlacing
  const HomPoly weak = (kT * kT - HomPoly::uv()) * kT;
  const InterlaceVerdict w = interlacing_verdict(f, weak);
  CHECK(w.interlaces);
  CHECK_FALSE(w.strict);
  CHECK_THROWS_AS(interlacing_verdict(f, f), ValidationError);
}
