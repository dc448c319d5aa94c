#include <doctest.h>

#include <cmath>

#include "cwsrep/errors.hpp"
#include "cwsrep/intersect.hpp"
#include "cwsrep/numrange.hpp"
#include "test_util.hpp"

using namespace cwsrep;

namespace {

const HomPoly kT = HomPoly::t(), kX = HomPoly::x(), kY = HomPoly::y();

bool contains(const std::vector<ProjPoint>& pts, const ProjPoint& q, double tol = 1e-8) {
  for (const auto& p : pts)
    if (projective_distance(p, q) <= tol) return true;
  return false;
}

}  // namespace

TEST_CASE("projective points") {
  const ProjPoint p = ProjPoint::from_txy(2.0, cplx(0, 4.0), 1.0);
  CHECK(std::abs(p.x() - 1.0) < 1e-15);
  CHECK_FALSE(p.at_infinity);
  CHECK(ProjPoint::from_txy(0.0, 1.0, 2.0).at_infinity);
  CHECK_THROWS_AS(ProjPoint::from_txy(0.0, 0.0, 0.0), ValidationError);
  const ProjPoint q = ProjPoint::from_tuv(1.0, 2.0, 3.0);
  CHECK(std::abs(q.u() / q.t() - 2.0) < 1e-14);
  CHECK(projective_distance(p, ProjPoint::from_txy(cplx(0, 3.0), -6.0, cplx(0, 1.5))) < 1e-14);
  ProjPoint r = q;
  for (int i = 0; i < 5; ++i) r = rotate_point(r, 5);
  CHECK(projective_distance(r, q) < 1e-14);
  CHECK(projective_distance(conj_point(conj_point(q)), q) < 1e-14);
  CHECK(projective_distance(reflect_point(reflect_point(q)), q) < 1e-14);
}

TEST_CASE("circle and ellipse meet in four real points") {
  const HomPoly f = kT * kT - kX * kX - kY * kY;
  const HomPoly g = kT * kT * 2.0 - kX * kX - kY * kY * 4.0;
  const IntersectResult r = intersect_curves(f, g);
  CHECK(r.consistent);
  REQUIRE(r.points.size() == 4);
  CHECK(r.total_multiplicity == 4);
  const double a = std::sqrt(2.0 / 3.0), b = std::sqrt(1.0 / 3.0);
  for (double sx : {-1.0, 1.0})
    for (double sy : {-1.0, 1.0}) CHECK(contains(r.points, ProjPoint::from_txy(1.0, sx * a, sy * b)));
  CHECK(r.max_residual < 1e-12);
  CHECK(r.min_transversality > 0.1);
}

TEST_CASE("circle and a line") {
  const HomPoly f = kT * kT - kX * kX - kY * kY;
  const IntersectResult r = intersect_curves(f, kX);
  REQUIRE(r.points.size() == 2);
  CHECK(contains(r.points, ProjPoint::from_txy(1.0, 0.0, 1.0)));
  CHECK(contains(r.points, ProjPoint::from_txy(1.0, 0.0, -1.0)));
}

TEST_CASE("points at infinity are found") {
  const HomPoly f = kT * kT - kX * kX - kY * kY;
  const IntersectResult r = intersect_curves(f, kT);
  REQUIRE(r.points.size() == 2);
  for (const auto& p : r.points) CHECK(p.at_infinity);
  CHECK(contains(r.points, ProjPoint::from_txy(0.0, 1.0, cplx(0, 1))));
  CHECK(contains(r.points, ProjPoint::from_txy(0.0, 1.0, cplx(0, -1))));
}

TEST_CASE("tangency shows up as multiplicity") {
  const HomPoly f = kT * kT - kX * kX - kY * kY;
  const HomPoly g = kX - kT;  // tangent at [1:1:0]
  const IntersectResult r = intersect_curves(f, g);
  REQUIRE(r.points.size() == 1);
  CHECK(r.points[0].multiplicity == 2);
  CHECK(transversality(f, g, r.points[0]) < 1e-6);
}

TEST_CASE("common component is reported") {
  const HomPoly c = kT * kT - kX * kX - kY * kY;
  CHECK_THROWS_AS(intersect_curves(c * (kT - kX * 0.3), c * kY), AssumptionError);
  CHECK_THROWS_AS(intersect_curves(HomPoly(2), c), ValidationError);
}

TEST_CASE("assumptions for generic invariant pairs") {
  struct Case {
    int n, d;
    bool real;
  };
  for (const Case& cs : {Case{3, 3, false}, Case{3, 6, false}, Case{2, 4, false}, Case{2, 4, true}, Case{4, 4, false}}) {
    const HomPoly f = char_poly(testutil::random_cws(cs.n, cs.d, 40 + cs.n * 7 + cs.d, cs.real));
    const HomPoly g = default_interlacer(f);
    const AssumptionReport r = check_assumptions(f, g, cs.n);
    INFO("n=" << cs.n << " d=" << cs.d);
    CHECK(r.a1);
    CHECK(r.a2);
    CHECK(r.a3);
    CHECK(r.a4);
    CHECK(static_cast<int>(r.intersection.points.size()) == cs.d * (cs.d - 1));
    CHECK(r.points_at_infinity == (cs.n % 2 == 1 ? 0 : cs.d));

    const OrbitSplit split = orbit_split(r.intersection.points, cs.n, cs.real);
    const int q = cs.d / cs.n;
    const int expect = cs.n % 2 == 1 ? q * (cs.d - 1) / 2 : q * cs.d / 2;
    CHECK(static_cast<int>(split.s_tilde.size()) == expect);
    // S and its conjugate cover every point once
    CHECK(static_cast<int>(split.s_points().size()) * 2 == cs.d * (cs.d - 1));
  }
}

TEST_CASE("singular and non-interlacing inputs fail the checks") {
  const HomPoly circle = kT * kT - kX * kX - kY * kY;
  const HomPoly f = circle * circle;  // hyperbolic, singular along the circle
  const AssumptionReport r = check_assumptions(f, default_interlacer(f), 2);
  CHECK_FALSE(r.a1);
  CHECK_FALSE(r.all());
  CHECK_FALSE(r.messages.empty());
  CHECK_THROWS_AS(check_assumptions(circle, circle, 2), ValidationError);
}
