#include "cwsrep/detrep.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "cwsrep/errors.hpp"
#include "cwsrep/hyperbolicity.hpp"
#include "cwsrep/kernels.hpp"
#include "cwsrep/numrange.hpp"

namespace cwsrep {

namespace {

CVec to_vec(const HomPoly& p) {
  CVec v(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) v(i) = p.coeffs()[i];
  return v;
}

HomPoly from_vec(const CVec& v, int degree) {
  HomPoly p(degree);
  for (std::size_t i = 0; i < p.size(); ++i) p.coeffs()[i] = v(i);
  return p;
}

// Orthonormal real basis of the real span of the columns of n (assumed
// closed under entrywise conjugation), k vectors.
CMat real_span(const CMat& n, int k) {
  RMat r(n.rows(), 2 * n.cols());
  r << n.real(), n.imag();
  Eigen::JacobiSVD<RMat> svd(r, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(k).cast<cplx>();
}

// Leading left singular vectors, real arithmetic when real_mode.
CMat leading_columns(const CMat& m, int k, bool real_mode) {
  if (k <= 0) return CMat(m.rows(), 0);
  if (real_mode) {
    Eigen::JacobiSVD<RMat> svd(m.real(), Eigen::ComputeThinU);
    return svd.matrixU().leftCols(k).cast<cplx>();
  }
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(k);
}

double eval_abs(const HomPoly& f, cplx t, cplx u, cplx v) {
  double s = 0.0;
  const double at = std::abs(t), au = std::abs(u), av = std::abs(v);
  f.for_each([&](int a, int j, int k, cplx c) {
    if (c != 0.0) s += std::abs(c) * std::pow(at, a) * std::pow(au, j) * std::pow(av, k);
  });
  return s;
}

bool allowed(int i, int j, int n, int which) {
  // which: 0 -> t, 1 -> u, 2 -> v ; entry (i,j) lies in Lambda(i - j)_1
  const int r = mod(i - j, n);
  if (which == 0) return r == 0;
  if (which == 1) return r == mod(1, n);
  return r == mod(-1, n);
}

// Column layout of the linear map (a, b) -> a f + b g on full coefficient
// vectors of degree deg h.
class NoetherSystem {
 public:
  NoetherSystem(const HomPoly& f, const HomPoly& g, int degree, int ell, int n)
      : f_(f), g_(g), degree_(degree) {
    amons_ = eigenspace_monomials(n, degree - f.degree(), ell);
    bmons_ = eigenspace_monomials(n, degree - g.degree(), ell);
    const int rows = static_cast<int>(HomPoly::term_count(degree));
    CMat m = CMat::Zero(rows, amons_.size() + bmons_.size());
    int col = 0;
    auto fill = [&](const HomPoly& p, const Exponent& e) {
      p.for_each([&](int a, int j, int, cplx c) {
        if (c != 0.0) m(HomPoly::index(degree, a + e.a, j + e.j), col) += c;
      });
      ++col;
    };
    for (const auto& e : amons_) fill(f, e);
    for (const auto& e : bmons_) fill(g, e);
    scale_ = m.colwise().norm();
    for (int c = 0; c < m.cols(); ++c)
      if (scale_(c) > 0) m.col(c) /= scale_(c);
    qr_.compute(m);
    m_ = std::move(m);
  }

  NoetherResult solve(const HomPoly& h) const {
    if (h.degree() != degree_) throw ValidationError("noether_solve: degree of h mismatch");
    const CVec rhs = to_vec(h);
    CVec x = qr_.solve(rhs);
    const double hn = rhs.norm();
    NoetherResult r;
    r.residual = hn > 0 ? (m_ * x - rhs).norm() / hn : 0.0;
    for (int c = 0; c < x.size(); ++c)
      if (scale_(c) > 0) x(c) /= scale_(c);
    r.a = HomPoly(degree_ - f_.degree());
    r.b = HomPoly(degree_ - g_.degree());
    const int na = static_cast<int>(amons_.size());
    for (int i = 0; i < na; ++i) r.a.coeff(amons_[i].a, amons_[i].j, amons_[i].k) = x(i);
    for (std::size_t i = 0; i < bmons_.size(); ++i)
      r.b.coeff(bmons_[i].a, bmons_[i].j, bmons_[i].k) = x(na + static_cast<int>(i));
    return r;
  }

 private:
  HomPoly f_, g_;
  int degree_;
  std::vector<Exponent> amons_, bmons_;
  RVec scale_;
  CMat m_;
  Eigen::CompleteOrthogonalDecomposition<CMat> qr_;
};

HomPoly random_invariant_form(int n, int degree, bool dihedral, std::mt19937_64& rng) {
  HomPoly h(degree);
  for (const auto& e : eigenspace_monomials(n, degree, 0)) h.coeff(e.a, e.j, e.k) = complex_normal(rng);
  h = dihedral ? symmetrize_dihedral(h) : symmetrize_real(h);
  const double m = h.max_abs();
  return m > 0 ? h * (1.0 / m) : h;
}

HomPoly invariant_projection(const HomPoly& f, int n, bool dihedral) {
  const HomPoly p = eigenspace_project(f, 0, n);
  return dihedral ? symmetrize_dihedral(p) : symmetrize_real(p);
}

}  // namespace

CWSReport validate_cws(const CMat& A, int n, double tol) {
  if (A.rows() != A.cols()) throw ValidationError("validate_cws: matrix must be square");
  if (n < 1) throw ValidationError("group order must be positive");
  CWSReport r;
  const int d = static_cast<int>(A.rows());
  double amax = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double a = std::abs(A(i, j));
      amax = std::max(amax, a);
      if (mod(j - i, n) != mod(1, n)) r.off_pattern = std::max(r.off_pattern, a);
      r.max_imag = std::max(r.max_imag, std::abs(A(i, j).imag()));
    }
  // Omega^* A Omega - omega A, entry (i,j): (omega^{j-i} - omega) A(i,j)
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const int e = mod(j - i, n);
      const cplx wji = e == mod(1, n) ? std::polar(1.0, 2.0 * std::numbers::pi / n)
                                      : std::polar(1.0, 2.0 * std::numbers::pi * e / n);
      const cplx w = std::polar(1.0, 2.0 * std::numbers::pi / n);
      r.omega_defect = std::max(r.omega_defect, std::abs((wji - w) * A(i, j)));
    }
  r.tolerance = tol * (1.0 + amax);
  r.real = r.max_imag <= r.tolerance;
  r.valid = r.off_pattern <= r.tolerance && r.omega_defect <= std::max(r.tolerance, 1e-15 * (1.0 + amax) * 4);
  return r;
}

std::vector<HomPoly> vanishing_subspace(const std::vector<ProjPoint>& s_tilde, int ell, int n, int degree,
                                        bool real_basis) {
  if (n < 1 || degree < 0) throw ValidationError("vanishing_subspace: invalid parameters");
  const std::vector<Exponent> mons = eigenspace_monomials(n, degree, ell);
  const bool skip_infinity = (n % 2 == 0) && (mod(ell, n) % 2 == 0);
  kernels::PointBatch pts;
  for (const auto& p : s_tilde) {
    if (skip_infinity && p.at_infinity) continue;
    Eigen::Vector3cd w(p.t(), p.u(), p.v());
    w.normalize();
    pts.push_back(w(0), w(1), w(2));
  }
  const int dim = static_cast<int>(mons.size());
  const int rows = static_cast<int>(pts.size());
  CMat basis;
  if (rows == 0) {
    basis = CMat::Identity(dim, dim);
  } else {
    std::vector<cplx> vals(static_cast<std::size_t>(rows) * dim);
    kernels::eval_monomials(mons, pts, vals);
    CMat e(rows, dim);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < dim; ++c) e(r, c) = vals[static_cast<std::size_t>(r) * dim + c];
      const double nr = e.row(r).norm();
      if (nr > 0) e.row(r) /= nr;
    }
    Eigen::BDCSVD<CMat> svd(e);
    const RVec s = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < s.size(); ++i)
      if (s(i) > 1e-9 * s(0)) ++rank;
    const int k = dim - rank;
    basis = smallest_right_singular(e, std::max(k, 0)).basis;
  }
  const int q = ((degree + 1) % n == 0) ? (degree + 1) / n : 0;
  if (basis.cols() < q)
    throw NumericalError("vanishing_subspace: nullspace dimension " + std::to_string(basis.cols()) + " < q = " +
                         std::to_string(q));
  if (real_basis && basis.cols() > 0) basis = real_span(basis, static_cast<int>(basis.cols()));
  std::vector<HomPoly> out;
  for (int c = 0; c < basis.cols(); ++c) {
    HomPoly h(degree);
    for (int i = 0; i < dim; ++i) h.coeff(mons[i].a, mons[i].j, mons[i].k) = basis(i, c);
    out.push_back(h);
  }
  return out;
}

NoetherResult noether_solve(const HomPoly& f, const HomPoly& g, const HomPoly& h, int ell, int n, double tol) {
  if (h.degree() <= f.degree() || h.degree() <= g.degree())
    throw ValidationError("noether_solve: deg h must exceed deg f and deg g");
  NoetherSystem sys(f, g, h.degree(), ell, n);
  NoetherResult r = sys.solve(h);
  if (r.residual > tol)
    throw NumericalError("noether_solve: residual " + std::to_string(r.residual) + " above tolerance");
  return r;
}

GramMatrix assemble_gram(const HomPoly& f, const HomPoly& g, const OrbitSplit& split, int n, bool real_mode,
                         const GramOptions& opt) {
  const int d = f.degree();
  if (n < 1 || d % n != 0) throw ValidationError("assemble_gram: degree must be a multiple of n");
  if (g.degree() != d - 1) throw ValidationError("assemble_gram: deg g must be deg f - 1");
  const int q = d / n;
  std::mt19937_64 rng(opt.seed);
  const CVec gvec = to_vec(g);
  const double gnorm = gvec.norm();

  // first-row candidates per eigenspace, as full coefficient vectors
  std::vector<CMat> rowvecs(n);
  for (int ell = 0; ell < n; ++ell) {
    const auto basis = vanishing_subspace(split.s_tilde, ell, n, d - 1, real_mode);
    CMat nm(HomPoly::term_count(d - 1), basis.size());
    for (std::size_t c = 0; c < basis.size(); ++c) nm.col(c) = to_vec(basis[c]);
    if (opt.mix > 0 && nm.cols() > 1) {
      CMat w = random_unitary(static_cast<int>(nm.cols()), rng);
      if (real_mode) w = leading_columns(w.real().cast<cplx>(), static_cast<int>(w.cols()), true);
      nm = nm * w;
    }
    if (ell == 0) {
      const CVec gu = gvec / gnorm;
      const CMat proj = nm - gu * (gu.adjoint() * nm);
      rowvecs[0] = leading_columns(proj, q - 1, real_mode);
    } else {
      rowvecs[ell] = nm.leftCols(q);
    }
  }

  GramMatrix G;
  G.d = d;
  G.entries.assign(static_cast<std::size_t>(d) * d, HomPoly(d - 1));
  for (int j = 0; j < d; ++j) {
    const int ell = mod(-j, n);
    const int r = j / n;
    if (j == 0) {
      G.at(0, 0) = g;
      continue;
    }
    CVec v = ell == 0 ? CVec(rowvecs[0].col(r - 1)) : CVec(rowvecs[ell].col(r));
    v *= gnorm / v.norm();
    G.at(0, j) = from_vec(v, d - 1);
  }

  std::map<int, NoetherSystem> systems;
  for (int ell = 0; ell < n; ++ell) systems.emplace(ell, NoetherSystem(f, g, 2 * d - 2, ell, n));
  for (int i = 1; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const int ell = mod(i - j, n);
      const HomPoly h = G.at(0, i).conj() * G.at(0, j);
      NoetherResult nr = systems.at(ell).solve(h);
      if (nr.residual > 1e-6)
        throw NumericalError("assemble_gram: Noether step residual " + std::to_string(nr.residual) + " at (" +
                             std::to_string(i) + "," + std::to_string(j) + ")");
      HomPoly b = eigenspace_project(nr.b, ell, n);
      if (real_mode) b.for_each_mut([](int, int, int, cplx& c) { c = c.real(); });
      if (i == j) b = real_mode ? symmetrize_dihedral(b) : symmetrize_real(b);
      G.at(i, j) = b;
    }
  for (int j = 1; j < d; ++j) G.at(j, 0) = G.at(0, j).conj();
  for (int i = 1; i < d; ++i)
    for (int j = i + 1; j < d; ++j) G.at(j, i) = G.at(i, j).conj();
  return G;
}

LinearPencil pencil_from_adjugate(const GramMatrix& G, const HomPoly& f, const PencilOptions& opt) {
  const int d = G.d;
  if (d < 1 || static_cast<int>(G.entries.size()) != d * d) throw ValidationError("pencil_from_adjugate: bad Gram matrix");
  if (f.degree() != d) throw ValidationError("pencil_from_adjugate: deg f must equal matrix size");
  const int S = std::max(opt.samples, 12);
  std::mt19937_64 rng(opt.seed);
  kernels::PointBatch pts;
  std::vector<Eigen::Vector3cd> ws;
  int guard = 0;
  while (static_cast<int>(ws.size()) < S) {
    if (++guard > 100 * S) throw NumericalError("pencil_from_adjugate: could not sample points off V(f)");
    Eigen::Vector3cd w(complex_normal(rng), complex_normal(rng), complex_normal(rng));
    w.normalize();
    const double fa = std::abs(f.eval_tuv(w(0), w(1), w(2)));
    if (fa < 1e-6 * eval_abs(f, w(0), w(1), w(2))) continue;
    ws.push_back(w);
    pts.push_back(w(0), w(1), w(2));
  }
  std::vector<std::vector<cplx>> ent(static_cast<std::size_t>(d) * d, std::vector<cplx>(S));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) kernels::eval_dense(G.at(i, j), pts, ent[static_cast<std::size_t>(i) * d + j]);

  CMat Z(S, 3), Y(S, d * d);
  for (int s = 0; s < S; ++s) {
    CMat gp(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) gp(i, j) = ent[static_cast<std::size_t>(i) * d + j][s];
    Eigen::PartialPivLU<CMat> lu(gp);
    const CMat adj = lu.determinant() * lu.inverse();
    const cplx fp = f.eval_tuv(ws[s](0), ws[s](1), ws[s](2));
    const CMat m = adj / std::pow(fp, d - 2);
    Z(s, 0) = ws[s](0);
    Z(s, 1) = ws[s](1);
    Z(s, 2) = ws[s](2);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) Y(s, i * d + j) = m(i, j);
  }
  const CMat C = Z.colPivHouseholderQr().solve(Y);
  LinearPencil P;
  const double yn = Y.norm();
  P.fit_residual = yn > 0 ? (Z * C - Y).norm() / yn : 0.0;
  if (!std::isfinite(P.fit_residual) || P.fit_residual > opt.tol_fit)
    throw NumericalError("pencil_from_adjugate: adjugate is not divisible by f^(d-2) (fit residual " +
                         std::to_string(P.fit_residual) + ")");
  P.ct.resize(d, d);
  P.cu.resize(d, d);
  P.cv.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      P.ct(i, j) = C(0, i * d + j);
      P.cu(i, j) = C(1, i * d + j);
      P.cv(i, j) = C(2, i * d + j);
    }
  P.ct = (0.5 * (P.ct + P.ct.adjoint())).eval();
  P.cv = (0.5 * (P.cv + P.cu.adjoint())).eval();
  P.cu = P.cv.adjoint();
  if (opt.n > 0) {
    double big = 0.0, off = 0.0;
    CMat* mats[3] = {&P.ct, &P.cu, &P.cv};
    for (int w = 0; w < 3; ++w)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          const double a = std::abs((*mats[w])(i, j));
          big = std::max(big, a);
          if (!allowed(i, j, opt.n, w)) {
            off = std::max(off, a);
            (*mats[w])(i, j) = 0.0;
          }
        }
    P.pattern_defect = big > 0 ? off / big : 0.0;
    if (P.pattern_defect > opt.tol_fit)
      throw NumericalError("pencil_from_adjugate: entries outside the eigenspace pattern (" +
                           std::to_string(P.pattern_defect) + ")");
  }
  return P;
}

BlockCWS normalize_pencil(const LinearPencil& M, int n, int q, bool real_mode, NormalizeInfo* info) {
  const int d = n * q;
  if (n < 1 || q < 1 || M.ct.rows() != d || M.ct.cols() != d)
    throw ValidationError("normalize_pencil: pencil size must be n*q");
  NormalizeInfo local;
  NormalizeInfo& inf = info ? *info : local;
  CMat ct = M.ct, cv = M.cv;
  Eigen::SelfAdjointEigenSolver<CMat> es(ct, Eigen::EigenvaluesOnly);
  const RVec ev = es.eigenvalues();
  if (ev.maxCoeff() < 0) {
    ct = -ct;
    cv = -cv;
    inf.flipped = true;
  } else if (ev.minCoeff() <= 0) {
    throw NumericalError("normalize_pencil: M(1,0,0) is not definite");
  }
  CMat T = CMat::Zero(d, d);
  for (int b = 0; b < n; ++b) {
    std::vector<int> idx;
    for (int a = 0; a < q; ++a) idx.push_back(a * n + b);
    CMat B(q, q);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) B(i, j) = ct(idx[i], idx[j]);
    Eigen::LLT<CMat> llb(B);
    if (llb.info() != Eigen::Success) throw NumericalError("normalize_pencil: diagonal block is not positive definite");
    CMat binv = llb.solve(CMat::Identity(q, q));
    binv = (0.5 * (binv + binv.adjoint())).eval();
    if (real_mode) binv = binv.real().cast<cplx>();
    Eigen::LLT<CMat> ll(binv);
    if (ll.info() != Eigen::Success) throw NumericalError("normalize_pencil: Cholesky of inverse block failed");
    const CMat U = ll.matrixL();
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) T(idx[i], idx[j]) = U(i, j);
  }
  const CMat ct2 = T.adjoint() * ct * T;
  CMat cv2 = T.adjoint() * cv * T;
  inf.ct_identity_error = (ct2 - CMat::Identity(d, d)).cwiseAbs().maxCoeff();
  BlockCWS out;
  out.n = n;
  out.d = d;
  out.real = real_mode;
  out.entries = 2.0 * cv2;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (mod(j - i, n) != mod(1, n)) out.entries(i, j) = 0.0;
  if (real_mode) {
    inf.imag_dropped = out.entries.imag().cwiseAbs().maxCoeff();
    out.entries = out.entries.real().cast<cplx>();
  }
  return out;
}

BlockCWS construct_from_pair(const HomPoly& f, const HomPoly& g, int n, bool dihedral, const OrbitSplit& split,
                             const GramOptions& gopt, const PencilOptions& popt, NormalizeInfo* info,
                             LinearPencil* pencil_out) {
  const GramMatrix G = assemble_gram(f, g, split, n, dihedral, gopt);
  PencilOptions po = popt;
  po.n = n;
  LinearPencil M = pencil_from_adjugate(G, f, po);
  if (dihedral) {
    const double im = std::max({M.ct.imag().cwiseAbs().maxCoeff(), M.cu.imag().cwiseAbs().maxCoeff(),
                                M.cv.imag().cwiseAbs().maxCoeff()});
    const double re = std::max({M.ct.cwiseAbs().maxCoeff(), M.cu.cwiseAbs().maxCoeff(), M.cv.cwiseAbs().maxCoeff()});
    if (im > 1e-8 * re) throw NumericalError("construct: pencil is not real in dihedral mode");
    M.ct = M.ct.real().cast<cplx>();
    M.cu = M.cu.real().cast<cplx>();
    M.cv = M.cv.real().cast<cplx>();
  }
  if (pencil_out) *pencil_out = M;
  return normalize_pencil(M, n, f.degree() / n, dihedral, info);
}

ConstructResult construct_cws(const HomPoly& f_in, int n, bool dihedral, const std::optional<HomPoly>& g_in,
                              const ConstructOptions& opt) {
  if (n < 1) throw ValidationError("group order must be positive");
  const int d = f_in.degree();
  if (d < 1 || d % n != 0) {
    const int pad = d < 1 ? n : n - d % n;
    throw ValidationError("construct_cws: degree " + std::to_string(d) + " is not a multiple of n = " +
                          std::to_string(n) + "; multiply by t^" + std::to_string(pad) + " first");
  }
  const HomPoly f0 = normalize_lead(f_in);
  const InvarianceReport inv = invariance_report(f0, n);
  if (!inv.real_valued) throw AssumptionError("construct_cws: f is not real-valued");
  if (!inv.cyclic) throw AssumptionError("construct_cws: f is not C_n-invariant");
  if (dihedral && !inv.dihedral) throw AssumptionError("construct_cws: f is not D_2n-invariant");
  const HomPoly f = invariant_projection(f0, n, dihedral);
  const HypVerdict hv = hyperbolicity_verdict(f, opt.check.hyp);
  if (hv.status == HypStatus::not_hyperbolic)
    throw AssumptionError("construct_cws: f is not hyperbolic with respect to (1,0,0)");
  if (g_in && g_in->degree() != d - 1) throw ValidationError("construct_cws: deg g must be deg f - 1");

  const double fnorm = f.max_abs();
  std::optional<ConstructResult> best;
  ConstructDiagnostics trail;
  std::vector<double> svals{0.0};
  svals.insert(svals.end(), opt.perturb_schedule.begin(), opt.perturb_schedule.end());
  std::vector<double> evals{0.0};
  if (d >= 3) evals.insert(evals.end(), opt.interlacer_eps.begin(), opt.interlacer_eps.end());
  std::mt19937_64 rng(opt.seed);
  const HomPoly hpert = d >= 3 ? random_invariant_form(n, d - 3, dihedral, rng) * HomPoly::uv() : HomPoly(0);
  HomPoly fpert = random_invariant_form(n, d, dihedral, rng);
  fpert.coeff(d, 0, 0) = 0.0;
  const double fpnorm = fpert.max_abs();

  struct FCand {
    double s, delta;
  };
  std::vector<FCand> fcands{{0.0, 0.0}};
  for (double s : opt.perturb_schedule) {
    fcands.push_back({s, 0.0});
    if (fpnorm > 0)
      for (double c : opt.generic_shift) fcands.push_back({s, c * s * s});
  }

  for (const FCand& fc : fcands) {
    const double s = fc.s;
    if (best && best->diag.s == s && fc.delta > 0) continue;
    HomPoly fs = f;
    if (s > 0) {
      for (int i = 0; i < d; ++i) fs = nuij_step(fs, s);
      fs = normalize_lead(fs);
      if (fc.delta > 0) fs += fpert * (fc.delta * fnorm / fpnorm);
      fs = invariant_projection(fs, n, dihedral);
    }
    HomPoly gbase = (s == 0.0 && g_in) ? *g_in : default_interlacer(fs);
    gbase = invariant_projection(gbase, n, dihedral);
    for (double eps : evals) {
      HomPoly gs = gbase;
      if (eps > 0) gs += hpert * (eps * gbase.max_abs() / hpert.max_abs());
      ++trail.candidates;
      const AssumptionReport rep = check_assumptions(fs, gs, n, opt.check);
      if (!rep.all()) {
        std::string msg = "s=" + std::to_string(s) + " delta=" + std::to_string(fc.delta) + " eps=" + std::to_string(eps) + ":";
        for (const auto& m : rep.messages) msg += " " + m + ";";
        trail.notes.push_back(msg);
        continue;
      }
      bool built = false;
      for (int attempt = 0; attempt <= opt.retries && !built; ++attempt) {
        try {
          const OrbitSplit split = orbit_split(rep.intersection.points, n, dihedral, 1e-7);
          GramOptions gopt;
          gopt.seed = opt.seed + 101ULL * attempt;
          gopt.mix = attempt;
          PencilOptions popt;
          popt.seed = opt.seed + 7ULL + 211ULL * attempt;
          popt.tol_fit = opt.tol_fit;
          NormalizeInfo ni;
          LinearPencil pen;
          BlockCWS A = construct_from_pair(fs, gs, n, dihedral, split, gopt, popt, &ni, &pen);
          const HomPoly FA = char_poly(A.entries);
          ConstructDiagnostics dg = trail;
          dg.s = s;
          dg.eps = eps;
          dg.delta = fc.delta;
          dg.retries = attempt;
          dg.fit_residual = pen.fit_residual;
          dg.pattern_defect = pen.pattern_defect;
          dg.ct_identity_error = ni.ct_identity_error;
          dg.flipped = ni.flipped;
          dg.err_used = max_coeff_diff(FA, fs) / fnorm;
          dg.err_target = max_coeff_diff(FA, f) / fnorm;
          dg.f_used = fs;
          dg.g_used = gs;
          if (dg.err_used > 1e-6) {
            trail.notes.push_back("s=" + std::to_string(s) + " eps=" + std::to_string(eps) + " attempt " +
                                  std::to_string(attempt) + ": F_A misses f_used by " + std::to_string(dg.err_used));
            continue;
          }
          built = true;
          if (!best || dg.err_target < best->diag.err_target) best = ConstructResult{A, dg};
        } catch (const AssumptionError& ex) {
          trail.notes.push_back("s=" + std::to_string(s) + " eps=" + std::to_string(eps) + ": " + ex.what());
          break;
        } catch (const NumericalError& ex) {
          trail.notes.push_back("s=" + std::to_string(s) + " eps=" + std::to_string(eps) + " attempt " +
                                std::to_string(attempt) + ": " + ex.what());
        }
      }
      if (built) break;  // other interlacer perturbations give the same f
    }
    if (best && best->diag.s == 0.0) break;
  }
  if (!best) {
    std::string msg = "construct_cws: perturbation schedule exhausted";
    for (const auto& m : trail.notes) msg += "\n  " + m;
    throw NumericalError(msg);
  }
  best->diag.candidates = trail.candidates;
  best->diag.notes = trail.notes;
  return *best;
}

}  // namespace cwsrep
