#include <immintrin.h>

#include <algorithm>

#include "cwsrep/errors.hpp"
#include "cwsrep/kernels.hpp"

namespace cwsrep::kernels::avx2 {

namespace {

struct C4 {
  __m256d re, im;
};

inline C4 load(const std::vector<double>& r, const std::vector<double>& i, std::size_t p) {
  return {_mm256_loadu_pd(r.data() + p), _mm256_loadu_pd(i.data() + p)};
}

inline C4 mul(C4 a, C4 b) {
  // (ar + i ai)(br + i bi)
  return {_mm256_fmsub_pd(a.re, b.re, _mm256_mul_pd(a.im, b.im)),
          _mm256_fmadd_pd(a.re, b.im, _mm256_mul_pd(a.im, b.re))};
}

// acc + s * z for a scalar complex s
inline C4 fma_scalar(C4 acc, cplx s, C4 z) {
  const __m256d sr = _mm256_set1_pd(s.real());
  const __m256d si = _mm256_set1_pd(s.imag());
  acc.re = _mm256_fmadd_pd(sr, z.re, acc.re);
  acc.re = _mm256_fnmadd_pd(si, z.im, acc.re);
  acc.im = _mm256_fmadd_pd(sr, z.im, acc.im);
  acc.im = _mm256_fmadd_pd(si, z.re, acc.im);
  return acc;
}

inline C4 one() { return {_mm256_set1_pd(1.0), _mm256_setzero_pd()}; }
inline C4 zero() { return {_mm256_setzero_pd(), _mm256_setzero_pd()}; }

void store(C4 z, std::span<cplx> out, std::size_t offset, std::size_t stride) {
  alignas(32) double re[4], im[4];
  _mm256_store_pd(re, z.re);
  _mm256_store_pd(im, z.im);
  for (int l = 0; l < 4; ++l) out[offset + l * stride] = cplx(re[l], im[l]);
}

PointBatch tail(const PointBatch& pts, std::size_t from) {
  PointBatch t;
  for (std::size_t p = from; p < pts.size(); ++p)
    t.push_back({pts.tr[p], pts.ti[p]}, {pts.ur[p], pts.ui[p]}, {pts.vr[p], pts.vi[p]});
  return t;
}

}  // namespace

void eval_dense(const HomPoly& f, const PointBatch& pts, std::span<cplx> out) {
  if (out.size() != pts.size()) throw ValidationError("eval_dense: output size mismatch");
  const int d = f.degree();
  const auto c = f.coeffs();
  const std::size_t n = pts.size();
  const std::size_t nblk = n / 4 * 4;
  std::vector<C4> up(d + 1), vp(d + 1);
  for (std::size_t p = 0; p < nblk; p += 4) {
    const C4 t = load(pts.tr, pts.ti, p), u = load(pts.ur, pts.ui, p), v = load(pts.vr, pts.vi, p);
    up[0] = vp[0] = one();
    for (int i = 1; i <= d; ++i) {
      up[i] = mul(up[i - 1], u);
      vp[i] = mul(vp[i - 1], v);
    }
    C4 acc = zero();
    for (int a = d; a >= 0; --a) {
      const int m = d - a;
      const std::size_t base = HomPoly::index(d, a, 0);
      C4 slice = zero();
      for (int j = 0; j <= m; ++j) slice = fma_scalar(slice, c[base + j], mul(up[j], vp[m - j]));
      acc = mul(acc, t);
      acc.re = _mm256_add_pd(acc.re, slice.re);
      acc.im = _mm256_add_pd(acc.im, slice.im);
    }
    store(acc, out.subspan(p), 0, 1);
  }
  if (nblk < n) scalar::eval_dense(f, tail(pts, nblk), out.subspan(nblk));
}

void eval_monomials(std::span<const Exponent> mons, const PointBatch& pts, std::span<cplx> out) {
  const std::size_t nm = mons.size();
  if (out.size() != nm * pts.size()) throw ValidationError("eval_monomials: output size mismatch");
  int maxdeg = 0;
  for (const auto& e : mons) maxdeg = std::max({maxdeg, e.a, e.j, e.k});
  const std::size_t n = pts.size();
  const std::size_t nblk = n / 4 * 4;
  std::vector<C4> tp(maxdeg + 1), up(maxdeg + 1), vp(maxdeg + 1);
  for (std::size_t p = 0; p < nblk; p += 4) {
    const C4 t = load(pts.tr, pts.ti, p), u = load(pts.ur, pts.ui, p), v = load(pts.vr, pts.vi, p);
    tp[0] = up[0] = vp[0] = one();
    for (int i = 1; i <= maxdeg; ++i) {
      tp[i] = mul(tp[i - 1], t);
      up[i] = mul(up[i - 1], u);
      vp[i] = mul(vp[i - 1], v);
    }
    for (std::size_t m = 0; m < nm; ++m) {
      const C4 z = mul(tp[mons[m].a], mul(up[mons[m].j], vp[mons[m].k]));
      store(z, out, p * nm + m, nm);
    }
  }
  if (nblk < n) scalar::eval_monomials(mons, tail(pts, nblk), out.subspan(nblk * nm));
}

}  // namespace cwsrep::kernels::avx2
