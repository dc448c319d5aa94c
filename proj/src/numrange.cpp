#include "cwsrep/numrange.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "cwsrep/errors.hpp"
#include "cwsrep/hyperbolicity.hpp"

namespace cwsrep {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct HermParts {
  CMat re, im;  // (A + A^*)/2, (A - A^*)/(2i)
};

HermParts herm_parts(const CMat& A) {
  HermParts p;
  p.re = 0.5 * (A + A.adjoint());
  p.im = (A - A.adjoint()) * cplx(0.0, -0.5);
  return p;
}

// Real-coefficient basis of the real-valued forms in Lambda(1)_e: each
// entry lists (exponent, coefficient) pairs.
struct RealBasisElem {
  std::vector<std::pair<Exponent, cplx>> terms;
};

std::vector<RealBasisElem> real_invariant_basis(int n, int e) {
  std::vector<RealBasisElem> out;
  for (const auto& m : eigenspace_monomials(n, e, 0)) {
    if (m.j == m.k) {
      out.push_back({{{m, 1.0}}});
    } else if (m.j < m.k) {
      const Exponent mc{m.a, m.k, m.j};
      out.push_back({{{m, 1.0}, {mc, 1.0}}});
      out.push_back({{{m, cplx(0, 1)}, {mc, cplx(0, -1)}}});
    }
  }
  return out;
}

}  // namespace

HomPoly char_poly(const CMat& A) {
  if (A.rows() != A.cols()) throw ValidationError("char_poly: matrix must be square");
  const int d = static_cast<int>(A.rows());
  if (d == 0) return HomPoly::constant(1.0);
  const double na = A.norm();
  const double rho = na > 1e-300 ? 2.0 / na : 1.0;
  const int m = d + 1;
  std::vector<cplx> w(m);
  for (int i = 0; i < m; ++i) w[i] = std::polar(1.0, kTwoPi * i / m);
  const CMat Ah = A.adjoint();
  const CMat I = CMat::Identity(d, d);
  // p(u, v) = det(I + (u/2) A^* + (v/2) A) at u = rho w^a, v = rho w^b
  CMat vals(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const CMat M = I + (0.5 * rho * w[a]) * Ah + (0.5 * rho * w[b]) * A;
      vals(a, b) = M.partialPivLu().determinant();
    }
  HomPoly f(d);
  double resid = 0.0;
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      cplx s = 0.0;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) s += vals(a, b) * std::conj(w[(a * j + b * k) % m]);
      s /= static_cast<double>(m * m);
      if (j + k <= d)
        f.coeff(d - j - k, j, k) = s / std::pow(rho, j + k);
      else
        resid = std::max(resid, std::abs(s));
    }
  if (!(resid <= 1e-6)) throw NumericalError("char_poly: interpolation is ill-conditioned");
  return symmetrize_real(f);
}

RangeSample support_sweep(const CMat& A, int N) {
  if (A.rows() != A.cols()) throw ValidationError("support_sweep: matrix must be square");
  if (N < 1) throw ValidationError("support_sweep: grid size must be positive");
  const int d = static_cast<int>(A.rows());
  const HermParts hp = herm_parts(A);
  RangeSample s;
  s.d = d;
  s.lambda.resize(N, d);
  Eigen::SelfAdjointEigenSolver<CMat> es;
  for (int i = 0; i < N; ++i) {
    const double th = kTwoPi * i / N;
    s.theta.push_back(th);
    if (d == 0) {
      s.h.push_back(0.0);
      s.z.push_back(0.0);
      s.crossing.push_back(false);
      continue;
    }
    es.compute(std::cos(th) * hp.re + std::sin(th) * hp.im);
    const RVec ev = es.eigenvalues();  // ascending
    for (int j = 0; j < d; ++j) s.lambda(i, j) = ev(d - 1 - j);
    s.h.push_back(s.lambda(i, 0));
    const CVec top = es.eigenvectors().col(d - 1);
    s.z.push_back(top.dot(A * top));
    const double tol = 1e-8 * (1.0 + ev.cwiseAbs().maxCoeff());
    bool cross = false;
    for (int j = 0; j + 1 < d; ++j)
      if (s.lambda(i, j) - s.lambda(i, j + 1) <= tol) cross = true;
    s.crossing.push_back(cross);
  }
  return s;
}

std::vector<CurvePoint> kippenhahn_samples(const CMat& A, int N) {
  if (A.rows() != A.cols()) throw ValidationError("kippenhahn_samples: matrix must be square");
  const int d = static_cast<int>(A.rows());
  const HermParts hp = herm_parts(A);
  std::vector<CurvePoint> out;
  Eigen::SelfAdjointEigenSolver<CMat> es;
  for (int i = 0; i < N; ++i) {
    const double th = kTwoPi * i / N;
    const double c = std::cos(th), s = std::sin(th);
    es.compute(c * hp.re + s * hp.im);
    for (int j = 0; j < d; ++j) {
      const int col = d - 1 - j;
      const CVec vj = es.eigenvectors().col(col);
      CurvePoint p;
      p.theta = th;
      p.branch = j;
      p.p = {-es.eigenvalues()(col), c, s};
      p.z = vj.dot(A * vj);
      out.push_back(p);
    }
  }
  return out;
}

SymmetryInfo detect_symmetry(const RangeSample& s, int d, double tol) {
  const int N = s.size();
  SymmetryInfo info;
  if (N == 0) return info;
  double hmax = 0.0;
  for (double v : s.h) hmax = std::max(hmax, std::abs(v));
  const double bound = tol * (1.0 + hmax);
  for (int m = std::max(d, 1); m >= 1; --m) {
    if (N % m != 0) continue;
    const int shift = N / m;
    double err = 0.0;
    for (int i = 0; i < N; ++i) err = std::max(err, std::abs(s.h[(i + shift) % N] - s.h[i]));
    if (err <= bound || m == 1) {
      info.rotation_order = m;
      info.rotation_error = err;
      break;
    }
  }
  for (int i = 0; i < N; ++i) info.conj_error = std::max(info.conj_error, std::abs(s.h[(N - i) % N] - s.h[i]));
  info.conj_invariant = info.conj_error <= bound;
  return info;
}

HigherRankRange higher_rank_range(const CMat& A, int k, int N) {
  const int d = static_cast<int>(A.rows());
  if (k < 1 || k > d) throw ValidationError("higher_rank_range: need 1 <= k <= d");
  const RangeSample s = support_sweep(A, N);
  HigherRankRange r;
  r.k = k;
  r.theta = s.theta;
  double big = 1.0;
  for (int i = 0; i < s.size(); ++i) {
    r.support.push_back(s.lambda(i, k - 1));
    big = std::max(big, std::abs(s.lambda(i, k - 1)));
  }
  const double R = 4.0 * big;
  std::vector<cplx> poly{{-R, -R}, {R, -R}, {R, R}, {-R, R}};
  const double eps = 1e-12 * big;
  for (int i = 0; i < s.size() && !poly.empty(); ++i) {
    const double c = std::cos(s.theta[i]), sn = std::sin(s.theta[i]);
    const double lim = r.support[i];
    auto val = [&](cplx p) { return c * p.real() + sn * p.imag() - lim; };
    std::vector<cplx> next;
    for (std::size_t j = 0; j < poly.size(); ++j) {
      const cplx a = poly[j], b = poly[(j + 1) % poly.size()];
      const double fa = val(a), fb = val(b);
      const bool ina = fa <= eps, inb = fb <= eps;
      if (ina) next.push_back(a);
      if (ina != inb) {
        const double tcut = fa / (fa - fb);
        next.push_back(a + tcut * (b - a));
      }
    }
    std::vector<cplx> dedup;
    for (const auto& p : next)
      if (dedup.empty() || std::abs(p - dedup.back()) > 1e-13 * R) dedup.push_back(p);
    while (dedup.size() > 1 && std::abs(dedup.front() - dedup.back()) <= 1e-13 * R) dedup.pop_back();
    poly = std::move(dedup);
  }
  r.vertices = poly;
  r.empty = poly.empty();
  return r;
}

SynthResult synthesize_invariant_cws(const CMat& B, const SynthOptions& opt) {
  if (B.rows() != B.cols() || B.rows() == 0) throw ValidationError("synthesize: matrix must be square and nonempty");
  const int d = static_cast<int>(B.rows());
  int N = opt.grid > 0 ? opt.grid : default_grid(d);
  const RangeSample sb = support_sweep(B, N);
  const SymmetryInfo sym = detect_symmetry(sb, d, opt.tol_sym);
  SynthResult res;
  res.n = opt.n > 0 ? opt.n : sym.rotation_order;
  res.conj_invariant = sym.conj_invariant;
  const int n = res.n;
  if (n < 2) throw AssumptionError("synthesize: numerical range has no rotational symmetry of order >= 2");
  if (opt.n > 0) {
    double hmax = 0.0, err = 0.0;
    for (double v : sb.h) hmax = std::max(hmax, std::abs(v));
    for (int i = 0; i < N; ++i) {
      const double th = sb.theta[i] + kTwoPi / n;
      // compare against a fresh evaluation when the shift is off-grid
      Eigen::SelfAdjointEigenSolver<CMat> es(std::cos(th) * herm_parts(B).re + std::sin(th) * herm_parts(B).im,
                                             Eigen::EigenvaluesOnly);
      err = std::max(err, std::abs(es.eigenvalues()(d - 1) - sb.h[i]));
    }
    if (err > opt.tol_sym * (1.0 + hmax))
      throw AssumptionError("synthesize: numerical range is not invariant under rotation by 2pi/" + std::to_string(n));
  }

  const HomPoly FB = normalize_lead(char_poly(B));
  HomPoly f;
  const InvarianceReport inv = invariance_report(FB, n, 1e-9);
  if (inv.cyclic) {
    res.direct = true;
    f = FB;
    res.fit_degree = d;
  } else {
    // top-branch points of V(F_B), closed under the rotation
    std::vector<std::array<double, 3>> pts;
    for (int i = 0; i < N; ++i) {
      const double tol = 1e-9 * (1.0 + std::abs(sb.h[i]));
      for (int j = 0; j < d; ++j) {
        if (sb.lambda(i, j) < sb.h[i] - tol) break;
        for (int r = 0; r < n; ++r) {
          const double th = sb.theta[i] + kTwoPi * r / n;
          pts.push_back({-sb.lambda(i, j), std::cos(th), std::sin(th)});
        }
      }
    }
    bool found = false;
    double best_ratio = 1.0;
    for (int e = n; e <= d && !found; ++e) {
      const auto basis = real_invariant_basis(n, e);
      RMat E(pts.size(), basis.size());
      for (std::size_t r = 0; r < pts.size(); ++r) {
        const cplx t = pts[r][0], u(pts[r][1], pts[r][2]), v(pts[r][1], -pts[r][2]);
        for (std::size_t c = 0; c < basis.size(); ++c) {
          cplx s = 0.0;
          for (const auto& [m, w] : basis[c].terms) s += w * std::pow(t, m.a) * std::pow(u, m.j) * std::pow(v, m.k);
          E(r, c) = s.real();
        }
        const double nr = E.row(r).norm();
        if (nr > 0) E.row(r) /= nr;
      }
      Eigen::JacobiSVD<RMat> svd(E, Eigen::ComputeFullV);
      const RVec sv = svd.singularValues();
      const int last = static_cast<int>(basis.size()) - 1;
      const double ratio =
          static_cast<int>(sv.size()) > last ? sv(last) / sv(0) : 0.0;  // more unknowns than rows: exact
      best_ratio = std::min(best_ratio, ratio);
      if (ratio > opt.tol_fit) continue;
      const RVec x = svd.matrixV().col(last);
      HomPoly cand(e);
      for (std::size_t c = 0; c < basis.size(); ++c)
        for (const auto& [m, w] : basis[c].terms) cand.coeff(m.a, m.j, m.k) += w * x(c);
      if (std::abs(cand.lead()) <= 1e-10 * cand.max_abs()) continue;
      cand = symmetrize_real(normalize_lead(cand));
      if (hyperbolicity_verdict(cand).status == HypStatus::not_hyperbolic) continue;
      f = cand;
      res.fit_degree = e;
      res.fit_sigma_ratio = ratio;
      found = true;
    }
    if (!found)
      throw NumericalError("synthesize: no invariant hyperbolic fit up to degree " + std::to_string(d) +
                           " (best sigma ratio " + std::to_string(best_ratio) + ")");
  }
  const int e = f.degree();
  const int target_deg = n * ((e + n - 1) / n);
  res.pad = target_deg - e;
  if (res.pad > 0) f = pow(HomPoly::t(), res.pad) * f;
  f = normalize_lead(f);
  if (res.conj_invariant) {
    const InvarianceReport fi = invariance_report(f, n, 1e-9);
    if (!fi.dihedral) res.conj_invariant = false;
  }
  res.target = f;
  const ConstructResult cr = construct_cws(f, n, res.conj_invariant, std::nullopt, opt.construct);
  res.A = cr.A;
  res.construct = cr.diag;
  const RangeSample sa = support_sweep(res.A.entries, N);
  for (int i = 0; i < N; ++i) res.support_deviation = std::max(res.support_deviation, std::abs(sa.h[i] - sb.h[i]));
  return res;
}

}  // namespace cwsrep
