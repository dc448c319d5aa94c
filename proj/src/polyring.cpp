#include "cwsrep/polyring.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cwsrep/errors.hpp"

namespace cwsrep {

namespace {

constexpr cplx kI(0.0, 1.0);

cplx root_of_unity_power(int n, int e) {
  // omega^e, omega = exp(2 pi i / n); quarter turns are exact.
  const int r = mod(e, n);
  if (r == 0) return 1.0;
  if (2 * r == n) return -1.0;
  if (4 * r == n) return kI;
  if (4 * r == 3 * n) return -kI;
  const double ang = 2.0 * std::numbers::pi * r / n;
  return {std::cos(ang), std::sin(ang)};
}

void check_same_degree(const HomPoly& a, const HomPoly& b) {
  if (a.degree() != b.degree())
    throw ValidationError("degree mismatch: " + std::to_string(a.degree()) + " vs " +
                          std::to_string(b.degree()));
}

}  // namespace

HomPoly::HomPoly(int degree) : degree_(degree) {
  if (degree < 0) throw ValidationError("negative degree");
  coeffs_.assign(term_count(degree), cplx(0.0));
}

HomPoly HomPoly::monomial(int a, int j, int k, cplx c) {
  if (a < 0 || j < 0 || k < 0) throw ValidationError("negative exponent");
  HomPoly p(a + j + k);
  p.coeff(a, j, k) = c;
  return p;
}

HomPoly HomPoly::constant(cplx c) {
  HomPoly p(0);
  p.coeffs_[0] = c;
  return p;
}

HomPoly HomPoly::t() { return monomial(1, 0, 0); }
HomPoly HomPoly::u() { return monomial(0, 1, 0); }
HomPoly HomPoly::v() { return monomial(0, 0, 1); }
HomPoly HomPoly::x() { return (u() + v()) * 0.5; }
HomPoly HomPoly::y() { return (u() - v()) * cplx(0.0, -0.5); }
HomPoly HomPoly::uv() { return monomial(0, 1, 1); }

cplx HomPoly::coeff(int a, int j, int k) const {
  if (a < 0 || j < 0 || k < 0 || a + j + k != degree_)
    throw ValidationError("exponent triple does not match degree " + std::to_string(degree_));
  return coeffs_[index(degree_, a, j)];
}

cplx& HomPoly::coeff(int a, int j, int k) {
  if (a < 0 || j < 0 || k < 0 || a + j + k != degree_)
    throw ValidationError("exponent triple does not match degree " + std::to_string(degree_));
  return coeffs_[index(degree_, a, j)];
}

cplx HomPoly::eval_tuv(cplx t, cplx u, cplx v) const {
  // Horner in t over the bivariate slices.
  std::vector<cplx> up(degree_ + 1), vp(degree_ + 1);
  up[0] = vp[0] = 1.0;
  for (int i = 1; i <= degree_; ++i) {
    up[i] = up[i - 1] * u;
    vp[i] = vp[i - 1] * v;
  }
  cplx acc = 0.0;
  for (int a = degree_; a >= 0; --a) {
    const int m = degree_ - a;
    cplx slice = 0.0;
    const std::size_t base = index(degree_, a, 0);
    for (int j = 0; j <= m; ++j) slice += coeffs_[base + j] * up[j] * vp[m - j];
    acc = acc * t + slice;
  }
  return acc;
}

double HomPoly::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

HomPoly& HomPoly::operator+=(const HomPoly& o) {
  check_same_degree(*this, o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

HomPoly& HomPoly::operator-=(const HomPoly& o) {
  check_same_degree(*this, o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

HomPoly& HomPoly::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

HomPoly operator*(const HomPoly& p, const HomPoly& q) {
  const int d = p.degree() + q.degree();
  HomPoly r(d);
  p.for_each([&](int a1, int j1, int, cplx c1) {
    if (c1 == 0.0) return;
    q.for_each([&](int a2, int j2, int, cplx c2) {
      r.coeffs()[HomPoly::index(d, a1 + a2, j1 + j2)] += c1 * c2;
    });
  });
  return r;
}

HomPoly HomPoly::conj() const {
  HomPoly r(degree_);
  for_each([&](int a, int j, int k, cplx c) { r.coeff(a, k, j) = std::conj(c); });
  return r;
}

HomPoly HomPoly::swap_uv() const {
  HomPoly r(degree_);
  for_each([&](int a, int j, int k, cplx c) { r.coeff(a, k, j) = c; });
  return r;
}

HomPoly HomPoly::diff_t() const {
  if (degree_ == 0) return HomPoly(0);
  HomPoly r(degree_ - 1);
  for_each([&](int a, int j, int k, cplx c) {
    if (a > 0) r.coeff(a - 1, j, k) += static_cast<double>(a) * c;
  });
  return r;
}

HomPoly HomPoly::diff_u() const {
  if (degree_ == 0) return HomPoly(0);
  HomPoly r(degree_ - 1);
  for_each([&](int a, int j, int k, cplx c) {
    if (j > 0) r.coeff(a, j - 1, k) += static_cast<double>(j) * c;
  });
  return r;
}

HomPoly HomPoly::diff_v() const {
  if (degree_ == 0) return HomPoly(0);
  HomPoly r(degree_ - 1);
  for_each([&](int a, int j, int k, cplx c) {
    if (k > 0) r.coeff(a, j, k - 1) += static_cast<double>(k) * c;
  });
  return r;
}

HomPoly pow(const HomPoly& p, int e) {
  if (e < 0) throw ValidationError("negative power");
  HomPoly r = HomPoly::constant(1.0);
  HomPoly base = p;
  while (e > 0) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

double max_coeff_diff(const HomPoly& a, const HomPoly& b) {
  check_same_degree(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

double rel_coeff_diff(const HomPoly& a, const HomPoly& b) {
  const double scale = b.max_abs();
  return max_coeff_diff(a, b) / (scale > 0 ? scale : 1.0);
}

HomPoly normalize_lead(const HomPoly& f) {
  const cplx c = f.lead();
  if (std::abs(c) <= 1e-14 * std::max(1.0, f.max_abs()))
    throw ValidationError("degenerate leading coefficient: coeff(t^d) vanishes, so f(1,0,0) = 0");
  return f * (1.0 / c);
}

HomPoly symmetrize_real(const HomPoly& f) {
  HomPoly r(f.degree());
  f.for_each([&](int a, int j, int k, cplx c) {
    if (j > k) return;
    const cplx avg = 0.5 * (c + std::conj(f.coeff(a, k, j)));
    if (j == k) {
      r.coeff(a, j, k) = avg.real();
    } else {
      r.coeff(a, j, k) = avg;
      r.coeff(a, k, j) = std::conj(avg);
    }
  });
  return r;
}

HomPoly symmetrize_dihedral(const HomPoly& f) {
  HomPoly r(f.degree());
  f.for_each([&](int a, int j, int k, cplx c) {
    if (j > k) return;
    const double avg = 0.5 * (c.real() + f.coeff(a, k, j).real());
    r.coeff(a, j, k) = avg;
    r.coeff(a, k, j) = avg;
  });
  return r;
}

cplx TxyPoly::eval(cplx t, cplx x, cplx y) const {
  cplx acc = 0.0;
  std::size_t idx = 0;
  for (int a = 0; a <= degree; ++a)
    for (int i = 0; i <= degree - a; ++i, ++idx)
      acc += coeffs[idx] * std::pow(t, a) * std::pow(x, i) * std::pow(y, degree - a - i);
  return acc;
}

TxyPoly expand_txy(const HomPoly& f) {
  const int d = f.degree();
  // binomial table
  std::vector<std::vector<double>> binom(d + 1, std::vector<double>(d + 1, 0.0));
  for (int n = 0; n <= d; ++n) {
    binom[n][0] = 1.0;
    for (int r = 1; r <= n; ++r) binom[n][r] = binom[n - 1][r - 1] + (r <= n - 1 ? binom[n - 1][r] : 0.0);
  }
  auto ipow = [](int e) {
    static const cplx cycle[4] = {1.0, kI, -1.0, -kI};
    return cycle[mod(e, 4)];
  };
  TxyPoly r;
  r.degree = d;
  r.coeffs.assign(HomPoly::term_count(d), cplx(0.0));
  f.for_each([&](int a, int j, int k, cplx c) {
    if (c == 0.0) return;
    // (x + iy)^j (x - iy)^k
    for (int p = 0; p <= j; ++p)      // y-power from u
      for (int q = 0; q <= k; ++q) {  // y-power from v
        const cplx w = binom[j][p] * binom[k][q] * ipow(p) * ipow(q) * (q % 2 ? -1.0 : 1.0);
        const int xpow = (j - p) + (k - q);
        r.coeffs[HomPoly::index(d, a, xpow)] += c * w;
      }
  });
  return r;
}

// --- group actions --------------------------------------------------------

GroupElement GroupElement::rotation(int n, int k) {
  if (n < 1) throw ValidationError("group order must be positive");
  return {n, mod(k, n), false, false};
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
  if (order != o.order) throw ValidationError("group elements of different orders");
  // R^p F^r R^q F^s = R^(p + (-1)^r q) F^(r+s)
  GroupElement g;
  g.order = order;
  g.power = mod(power + (reflect ? -o.power : o.power), order);
  g.reflect = reflect != o.reflect;
  g.conjugate = conjugate != o.conjugate;
  return g;
}

GroupElement GroupElement::inverse() const {
  GroupElement g = *this;
  // (R^p)^-1 = R^-p ; (R^p F)^-1 = R^p F
  if (!reflect) g.power = mod(-power, order);
  return g;
}

std::array<double, 9> GroupElement::matrix() const {
  const double ang = 2.0 * std::numbers::pi * power / order;
  const double c = std::cos(ang), s = std::sin(ang);
  // rot^p acts as [[1,0,0],[0,c,s],[0,-s,c]]; ref flips y (a column sign).
  const double f = reflect ? -1.0 : 1.0;
  return {1, 0, 0, 0, c, s * f, 0, -s, c * f};
}

HomPoly act_group(const HomPoly& f, const GroupElement& gamma) {
  if (gamma.order < 1) throw ValidationError("group order must be positive");
  // u -> w^-p u, v -> w^p v under rot^p, so c(a,j,k) picks up w^{p(k-j)}.
  HomPoly r(f.degree());
  f.for_each([&](int a, int j, int k, cplx c) {
    cplx val = c * root_of_unity_power(gamma.order, gamma.power * (k - j));
    int jj = j, kk = k;
    if (gamma.reflect) std::swap(jj, kk);
    r.coeff(a, jj, kk) = val;
  });
  return gamma.conjugate ? r.conj() : r;
}

HomPoly eigenspace_project(const HomPoly& f, int ell, int n) {
  if (n < 1) throw ValidationError("group order must be positive");
  if (ell < 0 || ell >= n) throw ValidationError("eigenspace index out of range");
  HomPoly r(f.degree());
  f.for_each([&](int a, int j, int k, cplx c) {
    if (mod(j - k, n) == ell) r.coeff(a, j, k) = c;
  });
  return r;
}

std::vector<Exponent> eigenspace_monomials(int n, int degree, int ell) {
  if (n < 1) throw ValidationError("group order must be positive");
  std::vector<Exponent> out;
  for (int a = 0; a <= degree; ++a)
    for (int j = 0; j <= degree - a; ++j) {
      const int k = degree - a - j;
      if (mod(j - k, n) == mod(ell, n)) out.push_back({a, j, k});
    }
  return out;
}

int eigenspace_dimension(int n, int degree, int ell) {
  if (n < 1 || degree < 0) throw ValidationError("invalid eigenspace parameters");
  int count = 0;
  for (int j = 0; j <= degree; ++j)
    for (int k = 0; j + k <= degree; ++k)
      if (mod(j - k, n) == mod(ell, n)) ++count;
  return count;
}

int eigenspace_dimension_closed_form(int n, int q, int ell) {
  if (n < 1 || q < 1) return -1;
  const int d = q * n;
  if (n % 2 == 1) return (d * q + q) / 2;
  if (mod(ell, 2) == 1) return d * q / 2 + q;
  return d * q / 2;
}

InvarianceReport invariance_report(const HomPoly& f, int n, double rel_tol) {
  if (n < 1) throw ValidationError("group order must be positive");
  InvarianceReport rep;
  rep.n = n;
  rep.lead = f.lead();
  rep.tolerance = rel_tol * (1.0 + f.max_abs());
  f.for_each([&](int a, int j, int k, cplx c) {
    rep.real_violation = std::max(rep.real_violation, std::abs(c - std::conj(f.coeff(a, k, j))));
    if (mod(j - k, n) != 0) rep.cyclic_violation = std::max(rep.cyclic_violation, std::abs(c));
    rep.dihedral_violation = std::max(rep.dihedral_violation, std::abs(c - f.coeff(a, k, j)));
  });
  rep.dihedral_violation = std::max(rep.dihedral_violation, rep.cyclic_violation);
  rep.real_valued = rep.real_violation <= rep.tolerance;
  rep.cyclic = rep.cyclic_violation <= rep.tolerance;
  rep.dihedral = rep.dihedral_violation <= rep.tolerance;
  return rep;
}

}  // namespace cwsrep
