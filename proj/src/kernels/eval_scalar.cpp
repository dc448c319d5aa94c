#include <algorithm>

#include "cwsrep/errors.hpp"
#include "cwsrep/kernels.hpp"

namespace cwsrep::kernels {

void PointBatch::push_back(cplx t, cplx u, cplx v) {
  tr.push_back(t.real());
  ti.push_back(t.imag());
  ur.push_back(u.real());
  ui.push_back(u.imag());
  vr.push_back(v.real());
  vi.push_back(v.imag());
}

void PointBatch::reserve(std::size_t n) {
  for (auto* c : {&tr, &ti, &ur, &ui, &vr, &vi}) c->reserve(n);
}

namespace scalar {

void eval_dense(const HomPoly& f, const PointBatch& pts, std::span<cplx> out) {
  if (out.size() != pts.size()) throw ValidationError("eval_dense: output size mismatch");
  const int d = f.degree();
  const auto c = f.coeffs();
  std::vector<cplx> up(d + 1), vp(d + 1);
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const cplx t(pts.tr[p], pts.ti[p]), u(pts.ur[p], pts.ui[p]), v(pts.vr[p], pts.vi[p]);
    up[0] = vp[0] = 1.0;
    for (int i = 1; i <= d; ++i) {
      up[i] = up[i - 1] * u;
      vp[i] = vp[i - 1] * v;
    }
    cplx acc = 0.0;
    for (int a = d; a >= 0; --a) {
      const int m = d - a;
      const std::size_t base = HomPoly::index(d, a, 0);
      cplx slice = 0.0;
      for (int j = 0; j <= m; ++j) slice += c[base + j] * (up[j] * vp[m - j]);
      acc = acc * t + slice;
    }
    out[p] = acc;
  }
}

void eval_monomials(std::span<const Exponent> mons, const PointBatch& pts, std::span<cplx> out) {
  const std::size_t nm = mons.size();
  if (out.size() != nm * pts.size()) throw ValidationError("eval_monomials: output size mismatch");
  int maxdeg = 0;
  for (const auto& e : mons) maxdeg = std::max({maxdeg, e.a, e.j, e.k});
  std::vector<cplx> tp(maxdeg + 1), up(maxdeg + 1), vp(maxdeg + 1);
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const cplx t(pts.tr[p], pts.ti[p]), u(pts.ur[p], pts.ui[p]), v(pts.vr[p], pts.vi[p]);
    tp[0] = up[0] = vp[0] = 1.0;
    for (int i = 1; i <= maxdeg; ++i) {
      tp[i] = tp[i - 1] * t;
      up[i] = up[i - 1] * u;
      vp[i] = vp[i - 1] * v;
    }
    for (std::size_t m = 0; m < nm; ++m) out[p * nm + m] = tp[mons[m].a] * (up[mons[m].j] * vp[mons[m].k]);
  }
}

}  // namespace scalar
}  // namespace cwsrep::kernels
