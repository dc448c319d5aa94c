#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cwsrep/errors.hpp"
#include "cwsrep/hyperbolicity.hpp"
#include "cwsrep/numrange.hpp"
#include "test_util.hpp"

using namespace cwsrep;
using testutil::random_cws;
using testutil::random_matrix;

namespace {

cplx direct_fa(const CMat& A, double t, double x, double y) {
  const CMat H = (A + A.adjoint()) / 2.0;
  const CMat K = (A - A.adjoint()) / cplx(0, 2);
  const CMat M = t * CMat::Identity(A.rows(), A.cols()) + x * H + y * K;
  return M.determinant();
}

double max_shift_error(const RangeSample& s, int shift) {
  double e = 0.0;
  const int N = s.size();
  for (int i = 0; i < N; ++i) e = std::max(e, std::abs(s.h[(i + shift) % N] - s.h[i]));
  return e;
}

}  // namespace

TEST_CASE("char_poly agrees with the determinant definition") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int d : {1, 2, 3, 5, 8}) {
    const CMat A = random_matrix(d, 50 + d);
    const HomPoly F = char_poly(A);
    CHECK(F.degree() == d);
    CHECK(invariance_report(F, 1).real_valued);
    for (int trial = 0; trial < 4; ++trial) {
      const double t = U(rng), x = U(rng), y = U(rng);
      const cplx a = F.eval_txy(t, x, y), b = direct_fa(A, t, x, y);
      CHECK(std::abs(a - b) <= 1e-9 * (1.0 + std::abs(b)));
    }
  }
  CHECK_THROWS_AS(char_poly(CMat::Zero(2, 3)), ValidationError);
}

TEST_CASE("char_poly of Hermitian diagonal and block CWS matrices") {
  CMat D = CMat::Zero(3, 3);
  D(0, 0) = 1.0;
  D(1, 1) = 2.0;
  D(2, 2) = 3.0;
  const HomPoly x = HomPoly::x(), t = HomPoly::t();
  const HomPoly expect = (t + x) * (t + x * 2.0) * (t + x * 3.0);
  CHECK(max_coeff_diff(char_poly(D), expect) < 1e-12);
  for (int n : {2, 3, 5}) {
    const HomPoly F = char_poly(random_cws(n, 2 * n, 60 + n, false));
    CHECK(invariance_report(F, n, 1e-9).cyclic);
    CHECK(invariance_report(char_poly(random_cws(n, 2 * n, 70 + n, true)), n, 1e-9).dihedral);
  }
}

TEST_CASE("F_A is hyperbolic for arbitrary matrices") {
  for (int s = 0; s < 6; ++s) {
    const HomPoly F = char_poly(random_matrix(4, 90 + s));
    CHECK(hyperbolicity_verdict(F).status != HypStatus::not_hyperbolic);
  }
}

TEST_CASE("support of a normal matrix") {
  // eigenvalues 1, i, -1-i: h(theta) = max Re(e^{-i theta} z)
  CMat A = CMat::Zero(3, 3);
  A(0, 0) = 1.0;
  A(1, 1) = cplx(0, 1);
  A(2, 2) = cplx(-1, -1);
  const RangeSample s = support_sweep(A, 360);
  REQUIRE(s.size() == 360);
  CHECK(s.d == 3);
  for (int i = 0; i < s.size(); ++i) {
    const double th = s.theta[i];
    double expect = -1e9;
    for (int k = 0; k < 3; ++k) expect = std::max(expect, (std::polar(1.0, -th) * A(k, k)).real());
    CHECK(s.h[i] == doctest::Approx(expect).epsilon(1e-12));
    for (int k = 0; k + 1 < 3; ++k) CHECK(s.lambda(i, k) >= s.lambda(i, k + 1));
    CHECK((std::polar(1.0, -th) * s.z[i]).real() == doctest::Approx(s.h[i]).epsilon(1e-10));
  }
  CHECK_THROWS_AS(support_sweep(A, 0), ValidationError);
}

TEST_CASE("rotational and reflection symmetry of block CWS ranges") {
  for (int seed = 0; seed < 4; ++seed) {
    const CMat A = random_cws(5, 5, 200 + seed, false);
    const RangeSample s = support_sweep(A, 720);
    const double hmax = *std::max_element(s.h.begin(), s.h.end());
    CHECK(max_shift_error(s, 720 / 5) <= 1e-8 * (1.0 + hmax));
    const SymmetryInfo info = detect_symmetry(s, 5);
    CHECK(info.rotation_order == 5);
  }
  const CMat R = random_cws(4, 8, 5, true);
  const RangeSample s = support_sweep(R, 720);
  const SymmetryInfo info = detect_symmetry(s, 8);
  CHECK(info.rotation_order % 4 == 0);
  CHECK(info.conj_invariant);
  const SymmetryInfo none = detect_symmetry(support_sweep(random_matrix(4, 3), 720), 4);
  CHECK(none.rotation_order == 1);
}

TEST_CASE("Kippenhahn samples lie on the curve") {
  const CMat A = random_matrix(4, 17);
  const HomPoly F = char_poly(A);
  const auto pts = kippenhahn_samples(A, 90);
  CHECK(pts.size() == 90 * 4);
  double scale = 0.0;
  for (const auto& c : F.coeffs()) scale += std::abs(c);
  for (const auto& p : pts) {
    const double n = std::sqrt(p.p[0] * p.p[0] + p.p[1] * p.p[1] + p.p[2] * p.p[2]);
    const double r = std::abs(F.eval_txy(p.p[0] / n, p.p[1] / n, p.p[2] / n)) / scale;
    CHECK(r <= 1e-8);
  }
}

TEST_CASE("higher rank numerical ranges") {
  CMat D = CMat::Zero(4, 4);
  for (int i = 0; i < 4; ++i) D(i, i) = i + 1.0;
  const HigherRankRange w2 = higher_rank_range(D, 2, 720);
  CHECK_FALSE(w2.empty);
  double lo = 1e9, hi = -1e9, im = 0.0;
  for (const auto& z : w2.vertices) {
    lo = std::min(lo, z.real());
    hi = std::max(hi, z.real());
    im = std::max(im, std::abs(z.imag()));
  }
  CHECK(std::abs(lo - 2.0) <= 1e-8);
  CHECK(std::abs(hi - 3.0) <= 1e-8);
  CHECK(im <= 1e-8);

  CMat S = CMat::Zero(2, 2);
  S(0, 1) = 1.0;
  CHECK(higher_rank_range(S, 2, 720).empty);
  CHECK(higher_rank_range(S, 1, 720).vertices.size() >= 3);

  // W_{k+1} sits inside W_k
  const CMat A = random_matrix(6, 23);
  const HigherRankRange w1 = higher_rank_range(A, 1, 360), w2a = higher_rank_range(A, 2, 360);
  for (std::size_t i = 0; i < w1.support.size(); ++i) CHECK(w2a.support[i] <= w1.support[i]);
  CHECK_THROWS_AS(higher_rank_range(A, 7, 360), ValidationError);
}

TEST_CASE("synthesis returns the input range for structured matrices") {
  const CMat B = random_cws(3, 6, 31, false);
  const SynthResult r = synthesize_invariant_cws(B);
  CHECK(r.direct);
  CHECK(r.n == 3);
  CHECK(r.support_deviation <= 1e-8);
  CHECK(validate_cws(r.A.entries, 3, 1e-12).valid);
}

TEST_CASE("synthesis after a unitary change of basis") {
  const CMat B0 = random_cws(3, 3, 41, false);
  std::mt19937_64 rng(9);
  const CMat U = random_unitary(3, rng);
  const CMat B = U.adjoint() * B0 * U;
  SynthOptions opt;
  opt.n = 3;
  const SynthResult r = synthesize_invariant_cws(B, opt);
  CHECK(r.support_deviation <= 1e-6);
  CHECK(validate_cws(r.A.entries, 3, 1e-12).valid);
}

TEST_CASE("synthesis refuses asymmetric ranges") {
  CHECK_THROWS_AS(synthesize_invariant_cws(random_matrix(4, 5)), AssumptionError);
  SynthOptions opt;
  opt.n = 3;
  CHECK_THROWS_AS(synthesize_invariant_cws(random_matrix(4, 6), opt), AssumptionError);
}
