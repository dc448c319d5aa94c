#include "cwsrep/intersect.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "cwsrep/errors.hpp"
#include "cwsrep/kernels.hpp"
#include "cwsrep/linalg.hpp"

namespace cwsrep {

namespace {

constexpr cplx kI(0.0, 1.0);

using V3 = Eigen::Vector3cd;

V3 tuv_of(const ProjPoint& p) { return V3(p.t(), p.u(), p.v()); }

cplx unit_root(int n, long k) {
  const double ang = 2.0 * std::numbers::pi * static_cast<double>(k % n) / n;
  return {std::cos(ang), std::sin(ang)};
}

// |f(w)| / sum |c| for unit w
double rel_residual(const HomPoly& f, const V3& w) {
  double s = 0.0;
  for (const cplx& c : f.coeffs()) s += std::abs(c);
  return s > 0 ? std::abs(f.eval_tuv(w(0), w(1), w(2))) / s : 0.0;
}

V3 gradient(const HomPoly& ft, const HomPoly& fu, const HomPoly& fv, const V3& w) {
  return V3(ft.eval_tuv(w(0), w(1), w(2)), fu.eval_tuv(w(0), w(1), w(2)), fv.eval_tuv(w(0), w(1), w(2)));
}

double sine_between(V3 a, V3 b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  a /= na;
  b /= nb;
  return (a - b * b.dot(a)).norm();
}

// Coefficients in s of lambda -> f(L (s, x, 1)) for many x at once.
class ChartSampler {
 public:
  ChartSampler(const HomPoly& f, const CMat& L) : f_(f), L_(L) {}

  std::vector<std::vector<cplx>> coefficients(const std::vector<cplx>& xs) const {
    const int d = f_.degree();
    const int m = d + 1;
    kernels::PointBatch pts;
    pts.reserve(xs.size() * m);
    for (const cplx& x : xs)
      for (int r = 0; r < m; ++r) {
        const V3 w = L_ * V3(unit_root(m, r), x, 1.0);
        pts.push_back(w(0), w(1), w(2));
      }
    std::vector<cplx> vals(pts.size());
    kernels::eval_dense(f_, pts, vals);
    std::vector<std::vector<cplx>> out(xs.size(), std::vector<cplx>(m));
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (int k = 0; k < m; ++k) {
        cplx s = 0.0;
        for (int r = 0; r < m; ++r) s += vals[i * m + r] * std::conj(unit_root(m, static_cast<long>(r) * k));
        out[i][k] = s / static_cast<double>(m);
      }
    return out;
  }

 private:
  const HomPoly& f_;
  const CMat& L_;
};

CMat sylvester(const std::vector<cplx>& p, const std::vector<cplx>& q) {
  const int d = static_cast<int>(p.size()) - 1, e = static_cast<int>(q.size()) - 1;
  CMat s = CMat::Zero(d + e, d + e);
  for (int r = 0; r < e; ++r)
    for (int i = 0; i <= d; ++i) s(r, r + i) = p[d - i];
  for (int r = 0; r < d; ++r)
    for (int i = 0; i <= e; ++i) s(e + r, r + i) = q[e - i];
  return s;
}

struct Attempt {
  std::vector<ProjPoint> raw;  // one per resultant root
  std::vector<double> residual;
  bool complete = false;
};

}  // namespace

ProjPoint ProjPoint::from_txy(cplx t, cplx x, cplx y, double inf_tol) {
  ProjPoint p;
  std::array<cplx, 3> c{t, x, y};
  int imax = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(c[i]) > std::abs(c[imax]) * (1.0 + 1e-12)) imax = i;
  if (std::abs(c[imax]) == 0.0) throw ValidationError("projective point with all coordinates zero");
  const cplx s = c[imax];
  for (auto& z : c) z /= s;
  p.c = c;
  p.at_infinity = std::abs(c[0]) <= inf_tol;
  return p;
}

ProjPoint ProjPoint::from_tuv(cplx t, cplx u, cplx v, double inf_tol) {
  return from_txy(t, 0.5 * (u + v), (u - v) / (2.0 * kI), inf_tol);
}

double projective_distance(const ProjPoint& p, const ProjPoint& q) {
  const V3 a(p.c[0], p.c[1], p.c[2]), b(q.c[0], q.c[1], q.c[2]);
  return sine_between(a, b);
}

std::array<cplx, 3> canonical_coords(const ProjPoint& p) {
  V3 a(p.c[0], p.c[1], p.c[2]);
  a.normalize();
  for (int i = 0; i < 3; ++i)
    if (std::abs(a(i)) > 1e-5) {
      a *= std::conj(a(i)) / std::abs(a(i));
      a(i) = std::abs(a(i));
      break;
    }
  return {a(0), a(1), a(2)};
}

bool canonical_less(const ProjPoint& p, const ProjPoint& q, double tol) {
  const auto a = canonical_coords(p), b = canonical_coords(q);
  for (int i = 0; i < 3; ++i) {
    if (std::abs(a[i].real() - b[i].real()) > tol) return a[i].real() < b[i].real();
    if (std::abs(a[i].imag() - b[i].imag()) > tol) return a[i].imag() < b[i].imag();
  }
  return false;
}

ProjPoint rotate_point(const ProjPoint& p, int n, int k) {
  const cplx w = unit_root(n, mod(k, n));
  ProjPoint r = ProjPoint::from_tuv(p.t(), std::conj(w) * p.u(), w * p.v());
  r.at_infinity = p.at_infinity;
  r.multiplicity = p.multiplicity;
  return r;
}

ProjPoint conj_point(const ProjPoint& p) {
  ProjPoint r = ProjPoint::from_txy(std::conj(p.c[0]), std::conj(p.c[1]), std::conj(p.c[2]));
  r.at_infinity = p.at_infinity;
  r.multiplicity = p.multiplicity;
  return r;
}

ProjPoint reflect_point(const ProjPoint& p) {
  ProjPoint r = ProjPoint::from_txy(p.c[0], p.c[1], -p.c[2]);
  r.at_infinity = p.at_infinity;
  r.multiplicity = p.multiplicity;
  return r;
}

double transversality(const HomPoly& f, const HomPoly& g, const ProjPoint& p) {
  V3 w = tuv_of(p);
  w.normalize();
  const V3 gf = gradient(f.diff_t(), f.diff_u(), f.diff_v(), w);
  const V3 gg = gradient(g.diff_t(), g.diff_u(), g.diff_v(), w);
  return sine_between(gf, gg);
}

namespace {

// Total-degree homotopy in the chart (x', y') -> L (x', y', 1) from the start
// system x'^d = 1, y'^e = 1. Returns the endpoints of the tracked paths.
std::vector<V3> homotopy_endpoints(const HomPoly& f, const HomPoly& g, const std::array<HomPoly, 6>& grads, const CMat& L,
                                   std::mt19937_64& rng) {
  const int d = f.degree(), e = g.degree();
  const cplx gamma = std::polar(1.0, std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng));
  auto lift = [&](const Eigen::Vector2cd& z) { return V3(L * V3(z(0), z(1), 1.0)); };
  auto target = [&](const Eigen::Vector2cd& z, Eigen::Vector2cd& val, Eigen::Matrix2cd& jac) {
    const V3 w = lift(z);
    val << f.eval_tuv(w(0), w(1), w(2)), g.eval_tuv(w(0), w(1), w(2));
    const V3 df = gradient(grads[0], grads[1], grads[2], w), dg = gradient(grads[3], grads[4], grads[5], w);
    jac << df.transpose() * L.col(0), df.transpose() * L.col(1), dg.transpose() * L.col(0), dg.transpose() * L.col(1);
  };
  // H(z, s) = (1 - s) gamma G(z) + s F(z)
  auto homotopy = [&](const Eigen::Vector2cd& z, double s, Eigen::Vector2cd& h, Eigen::Matrix2cd& hz,
                      Eigen::Vector2cd& hs) {
    Eigen::Vector2cd fv;
    Eigen::Matrix2cd fj;
    target(z, fv, fj);
    const Eigen::Vector2cd gv(std::pow(z(0), d) - 1.0, std::pow(z(1), e) - 1.0);
    Eigen::Matrix2cd gj = Eigen::Matrix2cd::Zero();
    gj(0, 0) = static_cast<double>(d) * std::pow(z(0), d - 1);
    gj(1, 1) = static_cast<double>(e) * std::pow(z(1), e - 1);
    h = (1.0 - s) * gamma * gv + s * fv;
    hz = (1.0 - s) * gamma * gj + s * fj;
    hs = fv - gamma * gv;
  };
  auto tangent = [&](const Eigen::Vector2cd& z, double s) {
    Eigen::Vector2cd h, hs;
    Eigen::Matrix2cd hz;
    homotopy(z, s, h, hz, hs);
    return Eigen::Vector2cd(-hz.fullPivLu().solve(hs));
  };
  std::vector<V3> ends;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < e; ++b) {
      Eigen::Vector2cd z(unit_root(d, a), unit_root(e, b));
      double s = 0.0, ds = 0.02;
      int good = 0;
      bool failed = false;
      while (s < 1.0) {
        if (ds < 1e-10) {
          failed = true;
          break;
        }
        const double h = std::min(ds, 1.0 - s);
        // RK4 predictor
        const Eigen::Vector2cd k1 = tangent(z, s);
        const Eigen::Vector2cd k2 = tangent(z + 0.5 * h * k1, s + 0.5 * h);
        const Eigen::Vector2cd k3 = tangent(z + 0.5 * h * k2, s + 0.5 * h);
        const Eigen::Vector2cd k4 = tangent(z + h * k3, s + h);
        Eigen::Vector2cd zn = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!zn.allFinite()) {
          ds *= 0.5;
          good = 0;
          continue;
        }
        bool conv = false;
        for (int it = 0; it < 3; ++it) {
          Eigen::Vector2cd hv, hs;
          Eigen::Matrix2cd hz;
          homotopy(zn, s + h, hv, hz, hs);
          const Eigen::Vector2cd step = hz.fullPivLu().solve(hv);
          if (!step.allFinite()) break;
          zn -= step;
          if (step.norm() <= 1e-9 * (1.0 + zn.norm())) {
            conv = true;
            break;
          }
        }
        if (!conv || (zn - z).norm() > 0.3 * (1.0 + z.norm())) {
          ds *= 0.5;
          good = 0;
          continue;
        }
        z = zn;
        s += h;
        if (++good >= 3) {
          ds = std::min(2.0 * ds, 0.1);
          good = 0;
        }
        if (z.norm() > 1e8) {
          failed = true;
          break;
        }
      }
      if (!failed) ends.push_back(lift(z));
    }
  return ends;
}

// Roots x of Res_s(p(s, x), q(s, x)), interpolated on the circle |x| = radius.
std::vector<cplx> resultant_roots(const ChartSampler& sf, const ChartSampler& sg, int bezout, double radius) {
  const int N = bezout + 1;
  std::vector<cplx> nodes(N);
  for (int m = 0; m < N; ++m) nodes[m] = radius * unit_root(N, m);
  const auto pc = sf.coefficients(nodes), qc = sg.coefficients(nodes);
  std::vector<cplx> phase(N);
  std::vector<double> logmag(N);
  for (int m = 0; m < N; ++m) {
    Eigen::PartialPivLU<CMat> lu(sylvester(pc[m], qc[m]));
    const CMat& U = lu.matrixLU();
    double lm = 0.0;
    cplx ph = static_cast<double>(lu.permutationP().determinant());
    for (int i = 0; i < U.rows(); ++i) {
      const double a = std::abs(U(i, i));
      if (a == 0.0) {
        lm = -std::numeric_limits<double>::infinity();
        break;
      }
      lm += std::log(a);
      ph *= U(i, i) / a;
    }
    logmag[m] = lm;
    phase[m] = ph;
  }
  double offset = -std::numeric_limits<double>::infinity();
  for (double lm : logmag) offset = std::max(offset, lm);
  std::vector<cplx> rvals(N);
  for (int m = 0; m < N; ++m) rvals[m] = std::isfinite(logmag[m]) ? phase[m] * std::exp(logmag[m] - offset) : cplx(0.0);
  std::vector<cplx> rc(N);
  for (int k = 0; k < N; ++k) {
    cplx s = 0.0;
    for (int m = 0; m < N; ++m) s += rvals[m] * std::conj(unit_root(N, static_cast<long>(m) * k));
    rc[k] = s / static_cast<double>(N);
  }
  std::vector<cplx> roots = poly_roots(rc);
  for (auto& r : roots) r *= radius;
  return roots;
}

}  // namespace

IntersectResult intersect_curves(const HomPoly& f0, const HomPoly& g0, const IntersectOptions& opt) {
  if (f0.is_zero() || g0.is_zero()) throw ValidationError("intersect_curves: zero polynomial");
  const HomPoly f = f0 * (1.0 / f0.max_abs());
  const HomPoly g = g0 * (1.0 / g0.max_abs());
  const int d = f.degree(), e = g.degree();
  IntersectResult best;
  if (d == 0 || e == 0) {
    best.consistent = true;
    return best;
  }
  const int bezout = d * e;
  const HomPoly ft = f.diff_t(), fu = f.diff_u(), fv = f.diff_v();
  const HomPoly gt = g.diff_t(), gu = g.diff_u(), gv = g.diff_v();
  bool rot_sym = false, conj_sym = false;
  if (opt.symmetry > 1) {
    const InvarianceReport fi = invariance_report(f, opt.symmetry, 1e-12), gi = invariance_report(g, opt.symmetry, 1e-12);
    rot_sym = fi.cyclic && gi.cyclic;
    conj_sym = fi.real_valued && gi.real_valued;
  }
  bool have_best = false;
  std::vector<ProjPoint> pool;
  std::vector<double> pool_res, pool_tv;

  auto pool_add = [&](const ProjPoint& p, double res) {
    for (const auto& q : pool)
      if (projective_distance(q, p) <= opt.tol_cluster) return;
    const double tv = transversality(f, g, p);
    if (tv <= 1e-6) return;
    ProjPoint c = p;
    c.multiplicity = 1;
    pool.push_back(c);
    pool_res.push_back(res);
    pool_tv.push_back(tv);
  };
  auto pool_add_orbit = [&](const ProjPoint& p, double res) {
    std::vector<ProjPoint> orbit{p};
    if (rot_sym)
      for (int k = 1; k < opt.symmetry; ++k) orbit.push_back(rotate_point(p, opt.symmetry, k));
    if (conj_sym) {
      const std::size_t m = orbit.size();
      for (std::size_t i = 0; i < m; ++i) orbit.push_back(conj_point(orbit[i]));
    }
    for (const auto& q : orbit) {
      ProjPoint r = ProjPoint::from_txy(q.c[0], q.c[1], q.c[2], opt.tol_point);
      pool_add(r, res);
    }
  };

  for (int attempt = 0; attempt < std::max(1, opt.attempts); ++attempt) {
    std::mt19937_64 rng(opt.seed + 7919ULL * attempt);
    const CMat L = random_unitary(3, rng);
    ChartSampler sf(f, L), sg(g, L);

    // common component: Sylvester rank-deficient at several random x
    {
      std::vector<cplx> probe;
      for (int i = 0; i < 3; ++i) probe.push_back(complex_normal(rng));
      const auto pc = sf.coefficients(probe), qc = sg.coefficients(probe);
      double worst = 0.0;
      for (int i = 0; i < 3; ++i) {
        Eigen::JacobiSVD<CMat> svd(sylvester(pc[i], qc[i]));
        const auto& s = svd.singularValues();
        worst = std::max(worst, s(s.size() - 1) / s(0));
      }
      if (worst <= opt.tol_rank)
        throw AssumptionError("intersect_curves: resultant vanishes identically (common component)");
    }

    // Newton on the chart from (s, x)
    auto lift = [&](const Eigen::Vector2cd& q) { return V3(L * V3(q(0), q(1), 1.0)); };
    auto refine = [&](Eigen::Vector2cd z, Attempt& at) {
      double prev = std::numeric_limits<double>::infinity();
      for (int it = 0; it < 40; ++it) {
        const V3 w = lift(z);
        const cplx F = f.eval_tuv(w(0), w(1), w(2)), G = g.eval_tuv(w(0), w(1), w(2));
        const V3 df = gradient(ft, fu, fv, w), dg = gradient(gt, gu, gv, w);
        Eigen::Matrix2cd J;
        J << df.transpose() * L.col(0), df.transpose() * L.col(1), dg.transpose() * L.col(0),
            dg.transpose() * L.col(1);
        const Eigen::Vector2cd step = J.fullPivLu().solve(Eigen::Vector2cd(F, G));
        if (!step.allFinite()) break;
        z -= step;
        const double sz = step.norm() / (1.0 + z.norm());
        if (sz < 1e-15 || (sz >= prev && it > 5)) break;
        prev = sz;
      }
      const V3 w = lift(z);
      ProjPoint p = ProjPoint::from_tuv(w(0), w(1), w(2), opt.tol_point);
      V3 wn = tuv_of(p);
      wn.normalize();
      at.raw.push_back(p);
      at.residual.push_back(std::max(rel_residual(f, wn), rel_residual(g, wn)));
    };
    // recover s for each x, then refine
    auto polish = [&](const std::vector<cplx>& xroots, Attempt& at) {
      const auto pr = sf.coefficients(xroots), qr = sg.coefficients(xroots);
      for (std::size_t i = 0; i < xroots.size(); ++i) {
        cplx sbest = 0.0;
        double pbest = std::numeric_limits<double>::infinity();
        std::vector<cplx> sroots;
        try {
          sroots = poly_roots(qr[i]);
        } catch (const NumericalError&) {
          sroots = {};
        }
        for (const cplx& s : sroots) {
          cplx acc = 0.0;
          for (int k = d; k >= 0; --k) acc = acc * s + pr[i][k];
          const double val = std::abs(acc) / (1.0 + std::pow(std::abs(s), d));
          if (val < pbest) {
            pbest = val;
            sbest = s;
          }
        }
        refine(Eigen::Vector2cd(sbest, xroots[i]), at);
      }
    };

    Attempt at;
    try {
      polish(resultant_roots(sf, sg, bezout, 1.0), at);
    } catch (const NumericalError&) {
      continue;
    }
    at.complete = static_cast<int>(at.raw.size()) == bezout;

    // cluster
    const int m = static_cast<int>(at.raw.size());
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (projective_distance(at.raw[i], at.raw[j]) <= opt.tol_cluster) parent[find(i)] = find(j);
    IntersectResult res;
    res.attempts_used = attempt + 1;
    std::vector<int> seen(m, -1);
    for (int i = 0; i < m; ++i) {
      const int r = find(i);
      if (seen[r] < 0) {
        // keep the member with the smallest residual
        int bestk = i;
        for (int k = i; k < m; ++k)
          if (find(k) == r && at.residual[k] < at.residual[bestk]) bestk = k;
        seen[r] = static_cast<int>(res.points.size());
        ProjPoint p = at.raw[bestk];
        p.multiplicity = 0;
        res.points.push_back(p);
      }
      res.points[seen[r]].multiplicity += 1;
      res.max_residual = std::max(res.max_residual, at.residual[i]);
    }
    res.total_multiplicity = m;
    bool ok = at.complete && res.max_residual <= opt.tol_residual;
    for (const auto& p : res.points) {
      const double tv = transversality(f, g, p);
      res.min_transversality = std::min(res.min_transversality, tv);
      // a cluster around a transverse point means a root was lost to it
      if (p.multiplicity > 1 && tv > 1e-6) ok = false;
    }
    res.consistent = ok;
    std::sort(res.points.begin(), res.points.end(),
              [](const ProjPoint& a, const ProjPoint& b) { return canonical_less(a, b); });
    if (!have_best || (ok && !best.consistent) ||
        (ok == best.consistent && res.max_residual < best.max_residual)) {
      best = res;
      have_best = true;
    }
    if (ok) break;

    // lost roots: pool polished transverse points across charts and radii
    for (int i = 0; i < m; ++i)
      if (at.residual[i] <= opt.tol_residual) pool_add_orbit(at.raw[i], at.residual[i]);
    for (double radius : {0.3, 3.0}) {
      if (static_cast<int>(pool.size()) >= bezout) break;
      Attempt extra;
      try {
        polish(resultant_roots(sf, sg, bezout, radius), extra);
      } catch (const NumericalError&) {
        continue;
      }
      for (std::size_t i = 0; i < extra.raw.size(); ++i)
        if (extra.residual[i] <= opt.tol_residual) pool_add_orbit(extra.raw[i], extra.residual[i]);
    }
    if (static_cast<int>(pool.size()) < bezout) {
      Attempt extra;
      for (const V3& w : homotopy_endpoints(f, g, {ft, fu, fv, gt, gu, gv}, L, rng)) {
        const V3 q = L.adjoint() * w;
        if (std::abs(q(2)) < 1e-14) continue;
        refine(Eigen::Vector2cd(q(0) / q(2), q(1) / q(2)), extra);
      }
      for (std::size_t i = 0; i < extra.raw.size(); ++i)
        if (extra.residual[i] <= opt.tol_residual) pool_add_orbit(extra.raw[i], extra.residual[i]);
    }
    if (static_cast<int>(pool.size()) == bezout) {
      IntersectResult pr;
      pr.points = pool;
      pr.total_multiplicity = bezout;
      pr.max_residual = *std::max_element(pool_res.begin(), pool_res.end());
      pr.min_transversality = *std::min_element(pool_tv.begin(), pool_tv.end());
      pr.attempts_used = attempt + 1;
      pr.consistent = true;
      std::sort(pr.points.begin(), pr.points.end(),
                [](const ProjPoint& a, const ProjPoint& b) { return canonical_less(a, b); });
      best = pr;
      break;
    }
  }
  if (!have_best) throw NumericalError("intersect_curves: resultant root finding failed");
  return best;
}

AssumptionReport check_assumptions(const HomPoly& f, const HomPoly& g, int n, const CheckOptions& opt) {
  if (n < 1) throw ValidationError("group order must be positive");
  if (g.degree() != f.degree() - 1) throw ValidationError("check_assumptions: deg g must equal deg f - 1");
  AssumptionReport r;
  r.n = n;
  r.d = f.degree();
  const int d = r.d;

  // A1
  r.hyperbolicity = hyperbolicity_verdict(f, opt.hyp);
  const bool strict = r.hyperbolicity.status == HypStatus::strictly_hyperbolic;
  if (!strict) r.messages.push_back("A1: verdict " + to_string(r.hyperbolicity.status));
  {
    const HomPoly ft = f.diff_t(), fu = f.diff_u(), fv = f.diff_v();
    if (d <= 1) {
      r.smooth = !(ft.is_zero() && fu.is_zero() && fv.is_zero());
    } else {
      std::mt19937_64 rng(opt.inter.seed ^ 0x5eedULL);
      std::array<cplx, 6> w;
      for (auto& z : w) z = complex_normal(rng);
      const HomPoly h1 = ft * w[0] + fu * w[1] + fv * w[2];
      const HomPoly h2 = ft * w[3] + fu * w[4] + fv * w[5];
      try {
        const IntersectResult ir = intersect_curves(h1, h2, opt.inter);
        r.smooth = true;
        r.singular_residual = std::numeric_limits<double>::infinity();
        for (const auto& p : ir.points) {
          V3 x = tuv_of(p);
          x.normalize();
          const double res = std::max({rel_residual(ft, x), rel_residual(fu, x), rel_residual(fv, x)});
          r.singular_residual = std::min(r.singular_residual, res);
          if (res <= 1e-11) r.smooth = false;
        }
      } catch (const AssumptionError&) {
        r.smooth = false;
        r.singular_residual = 0.0;
      }
    }
    if (!r.smooth) r.messages.push_back("A1: V(f) is singular");
  }
  r.a1 = strict && r.smooth;

  // A2
  r.interlacing = interlacing_verdict(f, g, opt.hyp);
  r.a2 = r.interlacing.strict;
  if (!r.a2) r.messages.push_back("A2: interlacing " + r.interlacing.status);

  // A3
  try {
    IntersectOptions io = opt.inter;
    io.symmetry = n;
    r.intersection = intersect_curves(f, g, io);
    bool simple = true;
    for (const auto& p : r.intersection.points) simple = simple && p.multiplicity == 1;
    r.a3 = simple && r.intersection.consistent && static_cast<int>(r.intersection.points.size()) == d * (d - 1) &&
           r.intersection.min_transversality >= opt.tol_transverse;
    if (!r.a3)
      r.messages.push_back("A3: " + std::to_string(r.intersection.points.size()) + " distinct points, min transversality " +
                           std::to_string(r.intersection.min_transversality));
  } catch (const AssumptionError& ex) {
    r.a3 = false;
    r.messages.push_back(std::string("A3: ") + ex.what());
  }

  // A4
  r.expected_at_infinity = (n % 2 == 1) ? 0 : d;
  r.points_at_infinity = 0;
  for (const auto& p : r.intersection.points)
    if (p.at_infinity) ++r.points_at_infinity;
  r.a4 = r.a3 && r.points_at_infinity == r.expected_at_infinity;
  if (!r.a4)
    r.messages.push_back("A4: " + std::to_string(r.points_at_infinity) + " points on t=0, expected " +
                         std::to_string(r.expected_at_infinity));
  return r;
}

std::vector<ProjPoint> OrbitSplit::s_points() const {
  std::vector<ProjPoint> out;
  for (std::size_t i = 0; i < orbits.size(); ++i)
    if (in_s[i]) out.insert(out.end(), orbits[i].begin(), orbits[i].end());
  return out;
}

namespace {

int first_nonreal_sign(const ProjPoint& p) {
  for (const cplx& z : canonical_coords(p))
    if (std::abs(z.imag()) > 1e-9) return z.imag() > 0 ? 1 : -1;
  return 0;
}

int find_orbit(const std::vector<std::vector<ProjPoint>>& orbits, const ProjPoint& p, double tol) {
  for (std::size_t i = 0; i < orbits.size(); ++i)
    for (const auto& q : orbits[i])
      if (projective_distance(p, q) <= tol) return static_cast<int>(i);
  return -1;
}

// true when orbit a (rather than its conjugate b) goes to S
bool prefer(const std::vector<ProjPoint>& a, const std::vector<ProjPoint>& b) {
  const int sa = first_nonreal_sign(a.front()), sb = first_nonreal_sign(b.front());
  if (sa > 0 && sb <= 0) return true;
  if (sb > 0 && sa <= 0) return false;
  return canonical_less(a.front(), b.front());
}

}  // namespace

OrbitSplit orbit_split(const std::vector<ProjPoint>& points, int n, bool dihedral, double tol) {
  if (n < 1) throw ValidationError("group order must be positive");
  OrbitSplit out;
  out.n = n;
  out.dihedral = dihedral;
  const int m = static_cast<int>(points.size());
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
  for (int i = 0; i < m; ++i) {
    const ProjPoint r = rotate_point(points[i], n, 1);
    int match = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
      const double dist = projective_distance(r, points[j]);
      if (dist < best) {
        best = dist;
        match = j;
      }
    }
    if (match < 0 || best > tol)
      throw NumericalError("orbit_split: point set is not closed under rotation (mismatch " + std::to_string(best) + ")");
    parent[find(i)] = find(match);
  }
  std::vector<std::vector<ProjPoint>> orbits;
  std::vector<int> slot(m, -1);
  for (int i = 0; i < m; ++i) {
    const int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(orbits.size());
      orbits.emplace_back();
    }
    orbits[slot[r]].push_back(points[i]);
  }
  auto less = [](const ProjPoint& a, const ProjPoint& b) { return canonical_less(a, b); };
  for (auto& o : orbits) std::sort(o.begin(), o.end(), less);
  std::sort(orbits.begin(), orbits.end(), [&](const auto& a, const auto& b) { return less(a.front(), b.front()); });

  const int no = static_cast<int>(orbits.size());
  std::vector<int> cidx(no), ridx(no, -1);
  for (int i = 0; i < no; ++i) {
    cidx[i] = find_orbit(orbits, conj_point(orbits[i].front()), tol);
    if (cidx[i] < 0) throw NumericalError("orbit_split: point set is not closed under conjugation");
    if (cidx[i] == i) throw AssumptionError("orbit_split: an orbit meets its own conjugate");
    if (dihedral) {
      ridx[i] = find_orbit(orbits, reflect_point(orbits[i].front()), tol);
      if (ridx[i] < 0) throw NumericalError("orbit_split: point set is not closed under reflection");
      if (ridx[i] == i) throw AssumptionError("orbit_split: an orbit meets its own reflection");
    }
  }
  std::vector<int> assigned(no, -1);  // 1 = S, 0 = conj S
  for (int i = 0; i < no; ++i) {
    if (assigned[i] >= 0) continue;
    const int c = cidx[i];
    const bool take = prefer(orbits[i], orbits[c]);
    if (!dihedral) {
      assigned[i] = take ? 1 : 0;
      assigned[c] = take ? 0 : 1;
      continue;
    }
    // i is the smallest orbit of its class {O, cO, rO, rcO}
    const int r = ridx[i];
    const int rc = ridx[c];
    const int mine = take ? 1 : 0;
    for (int k : {i, rc}) {
      if (assigned[k] >= 0 && assigned[k] != mine)
        throw AssumptionError("orbit_split: reflection/conjugation classes overlap inconsistently");
      assigned[k] = mine;
    }
    for (int k : {c, r}) {
      if (assigned[k] >= 0 && assigned[k] != 1 - mine)
        throw AssumptionError("orbit_split: reflection/conjugation classes overlap inconsistently");
      assigned[k] = 1 - mine;
    }
  }
  out.orbits = orbits;
  for (int i = 0; i < no; ++i) {
    out.in_s.push_back(assigned[i] == 1);
    if (assigned[i] == 1) out.s_tilde.push_back(orbits[i].front());
  }
  return out;
}

}  // namespace cwsrep
