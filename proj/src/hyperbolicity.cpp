#include "cwsrep/hyperbolicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "cwsrep/errors.hpp"
#include "cwsrep/linalg.hpp"

namespace cwsrep {

std::string to_string(HypStatus s) {
  switch (s) {
    case HypStatus::strictly_hyperbolic: return "strictly_hyperbolic";
    case HypStatus::hyperbolic: return "hyperbolic";
    case HypStatus::not_hyperbolic: return "not_hyperbolic";
    case HypStatus::undetermined: return "undetermined";
  }
  return "undetermined";
}

std::vector<std::array<double, 2>> sample_directions(int count, std::uint64_t seed) {
  std::vector<std::array<double, 2>> dirs;
  const double r = std::numbers::sqrt2 / 2;
  const std::array<std::array<double, 2>, 8> fixed{
      {{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {r, r}, {-r, r}, {-r, -r}, {r, -r}}};
  for (int i = 0; i < std::min(count, 8); ++i) dirs.push_back(fixed[i]);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  for (int i = 8; i < count; ++i) {
    const double th = ang(rng);
    dirs.push_back({std::cos(th), std::sin(th)});
  }
  return dirs;
}

std::vector<double> restriction(const HomPoly& f, double a, double b) {
  const int d = f.degree();
  const cplx u(a, b), v(a, -b);
  std::vector<cplx> up(d + 1), vp(d + 1);
  up[0] = vp[0] = 1.0;
  for (int i = 1; i <= d; ++i) {
    up[i] = up[i - 1] * u;
    vp[i] = vp[i - 1] * v;
  }
  std::vector<double> c(d + 1, 0.0);
  for (int A = 0; A <= d; ++A) {
    cplx s = 0.0;
    const int m = d - A;
    const std::size_t base = HomPoly::index(d, A, 0);
    for (int j = 0; j <= m; ++j) s += f.coeffs()[base + j] * up[j] * vp[m - j];
    c[A] = s.real();
  }
  return c;
}

std::vector<cplx> restriction_roots(const HomPoly& f, double a, double b) {
  std::vector<double> c = restriction(f, a, b);
  // exact zero roots from vanishing low-order coefficients
  std::size_t z = 0;
  while (z + 1 < c.size() && c[z] == 0.0) ++z;
  std::vector<cplx> roots(z, cplx(0.0));
  if (z > 0) c.erase(c.begin(), c.begin() + z);
  if (c.size() > 1) {
    auto rest = poly_roots_real(c);
    roots.insert(roots.end(), rest.begin(), rest.end());
  }
  return roots;
}

namespace {

struct LineCheck {
  double imag_excess = 0.0;  // max |Im| / (1 + |root|)
  double min_gap = std::numeric_limits<double>::infinity();
  double scale = 1.0;  // 1 + max |root|
  std::vector<double> real_parts;
};

LineCheck check_line(const HomPoly& f, double a, double b) {
  LineCheck lc;
  const auto roots = restriction_roots(f, a, b);
  double maxabs = 0.0;
  for (const auto& r : roots) {
    lc.imag_excess = std::max(lc.imag_excess, std::abs(r.imag()) / (1.0 + std::abs(r)));
    maxabs = std::max(maxabs, std::abs(r));
    lc.real_parts.push_back(r.real());
  }
  lc.scale = 1.0 + maxabs;
  std::sort(lc.real_parts.begin(), lc.real_parts.end());
  for (std::size_t i = 1; i < lc.real_parts.size(); ++i)
    lc.min_gap = std::min(lc.min_gap, lc.real_parts[i] - lc.real_parts[i - 1]);
  return lc;
}

}  // namespace

HypVerdict hyperbolicity_verdict(const HomPoly& f, const HypOptions& opt) {
  if (std::abs(f.lead()) <= 1e-14 * std::max(1.0, f.max_abs()))
    throw ValidationError("degenerate leading coefficient: f(1,0,0) = 0");
  HypVerdict v;
  v.tol_root = opt.tol_root;
  v.tol_gap = opt.tol_gap;
  v.min_gap = std::numeric_limits<double>::infinity();
  bool any_complex = false, any_band = false, any_collapse = false;
  double worst_imag = -1.0, worst_gap_ratio = std::numeric_limits<double>::infinity();
  std::array<double, 2> imag_witness{1, 0}, gap_witness{1, 0};
  for (const auto& dir : sample_directions(opt.num_directions, opt.seed)) {
    const LineCheck lc = check_line(f, dir[0], dir[1]);
    ++v.directions;
    v.max_imag = std::max(v.max_imag, lc.imag_excess);
    if (lc.imag_excess > worst_imag) {
      worst_imag = lc.imag_excess;
      imag_witness = dir;
    }
    if (lc.imag_excess > opt.tol_band)
      any_complex = true;
    else if (lc.imag_excess > opt.tol_root)
      any_band = true;
    v.min_gap = std::min(v.min_gap, lc.min_gap);
    const double ratio = lc.min_gap / lc.scale;
    if (ratio < worst_gap_ratio) {
      worst_gap_ratio = ratio;
      gap_witness = dir;
    }
    if (lc.min_gap <= opt.tol_gap * lc.scale) any_collapse = true;
  }
  if (f.degree() <= 1) v.min_gap = std::numeric_limits<double>::infinity();
  if (any_complex) {
    v.status = HypStatus::not_hyperbolic;
    v.witness = imag_witness;
  } else if (any_band) {
    v.status = HypStatus::undetermined;
    v.witness = imag_witness;
  } else if (any_collapse) {
    v.status = HypStatus::hyperbolic;
    v.witness = gap_witness;
  } else {
    v.status = HypStatus::strictly_hyperbolic;
    v.witness = gap_witness;
  }
  return v;
}

InterlaceVerdict interlacing_verdict(const HomPoly& f, const HomPoly& g, const HypOptions& opt) {
  const int d = f.degree();
  if (g.degree() != d - 1) throw ValidationError("interlacer must have degree deg f - 1");
  if (std::abs(f.lead()) <= 1e-14 * std::max(1.0, f.max_abs()) ||
      std::abs(g.lead()) <= 1e-14 * std::max(1.0, g.max_abs()))
    throw ValidationError("degenerate leading coefficient");
  InterlaceVerdict r;
  r.min_separation = std::numeric_limits<double>::infinity();
  bool weak = false, fails = false, complex_roots = false;
  if (f.lead().real() * g.lead().real() <= 0) fails = true;
  for (const auto& dir : sample_directions(opt.num_directions, opt.seed)) {
    ++r.directions;
    const LineCheck lf = check_line(f, dir[0], dir[1]);
    const LineCheck lg = check_line(g, dir[0], dir[1]);
    if (lf.imag_excess > opt.tol_root || lg.imag_excess > opt.tol_root) {
      if (!complex_roots) r.witness = dir;
      complex_roots = true;
      continue;
    }
    const double scale = std::max(lf.scale, lg.scale);
    const double tol = opt.tol_gap * scale;
    // descending order: f_1 >= g_1 >= f_2 >= ... >= g_{d-1} >= f_d
    std::vector<double> fr(lf.real_parts.rbegin(), lf.real_parts.rend());
    std::vector<double> gr(lg.real_parts.rbegin(), lg.real_parts.rend());
    bool line_fail = false, line_weak = false;
    for (int i = 0; i + 1 < d; ++i) {
      const double up = fr[i] - gr[i];
      const double lo = gr[i] - fr[i + 1];
      if (up < -tol || lo < -tol) line_fail = true;
      if (up <= tol || lo <= tol) line_weak = true;
      r.min_separation = std::min({r.min_separation, up, lo});
    }
    if (line_fail && !fails) r.witness = dir;
    if (line_weak && !weak && !fails) r.witness = dir;
    fails = fails || line_fail;
    weak = weak || line_weak;
  }
  if (complex_roots) {
    r.status = "not_real_rooted";
  } else if (fails) {
    r.status = "fails";
  } else if (weak) {
    r.status = "weak";
    r.interlaces = true;
  } else {
    r.status = "strict";
    r.interlaces = true;
    r.strict = true;
  }
  return r;
}

HomPoly nuij_step(const HomPoly& f, double s) {
  HomPoly r = f;
  const double s2 = s * s;
  if (s2 == 0.0) return r;
  f.for_each([&](int a, int j, int k, cplx c) {
    if (a >= 2) r.coeff(a - 2, j + 1, k + 1) -= s2 * static_cast<double>(a * (a - 1)) * c;
  });
  return r;
}

HomPoly nuij_strictify(const HomPoly& f, double s, const HypOptions& opt) {
  if (!(s > 0.0)) throw ValidationError("nuij_strictify needs s > 0");
  const HypVerdict in = hyperbolicity_verdict(f, opt);
  if (in.status == HypStatus::not_hyperbolic)
    throw AssumptionError("nuij_strictify: input is not hyperbolic with respect to (1,0,0)");
  HomPoly r = f;
  for (int i = 0; i < f.degree(); ++i) r = nuij_step(r, s);
  const HypVerdict out = hyperbolicity_verdict(r, opt);
  if (out.status != HypStatus::strictly_hyperbolic)
    throw NumericalError("nuij_strictify: output verdict is " + to_string(out.status));
  return r;
}

HomPoly scale_xy(const HomPoly& f, double s) {
  HomPoly r = f;
  const double s2 = s * s;
  r.for_each_mut([&](int, int j, int k, cplx& c) { c *= std::pow(s2, j + k); });
  return r;
}

HomPoly retraction_point(const HomPoly& f, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("retraction parameter must lie in [0, 1]");
  HomPoly r = scale_xy(f, s);
  for (int i = 0; i < f.degree(); ++i) r = nuij_step(r, 1.0 - s);
  return r;
}

HomPoly default_interlacer(const HomPoly& f) {
  if (f.degree() < 1) throw ValidationError("default_interlacer needs degree >= 1");
  return f.diff_t() * (1.0 / f.degree());
}

}  // namespace cwsrep
