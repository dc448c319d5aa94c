#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cwsrep {

using cplx = std::complex<double>;

struct Exponent {
  int a = 0;  // power of t
  int j = 0;  // power of u = x + iy
  int k = 0;  // power of v = x - iy
  friend bool operator==(const Exponent&, const Exponent&) = default;
};

/// Homogeneous polynomial in (t, x, y), stored in the basis t^a u^j v^k with
/// u = x + iy and v = x - iy. Coefficients are dense over the triangle
/// a + j + k = degree, ordered lexicographically in (a, j).
///
/// Real polynomials are not a separate type: a polynomial is real-valued on
/// R^3 exactly when c(a,j,k) == conj(c(a,k,j)).
class HomPoly {
 public:
  HomPoly() : HomPoly(0) {}
  explicit HomPoly(int degree);

  static HomPoly monomial(int a, int j, int k, cplx c = 1.0);
  static HomPoly constant(cplx c);
  // Linear forms.
  static HomPoly t();
  static HomPoly u();
  static HomPoly v();
  static HomPoly x();
  static HomPoly y();
  // x^2 + y^2 = u v
  static HomPoly uv();

  static std::size_t term_count(int degree) {
    return static_cast<std::size_t>(degree + 1) * static_cast<std::size_t>(degree + 2) / 2;
  }
  static std::size_t index(int degree, int a, int j) {
    return static_cast<std::size_t>(a * (degree + 1) - a * (a - 1) / 2 + j);
  }

  int degree() const { return degree_; }
  std::size_t size() const { return coeffs_.size(); }

  cplx coeff(int a, int j, int k) const;
  cplx& coeff(int a, int j, int k);
  cplx lead() const { return coeffs_.back(); }  // coefficient of t^d

  std::span<const cplx> coeffs() const { return coeffs_; }
  std::span<cplx> coeffs() { return coeffs_; }

  // Calls fn(a, j, k, c) for every slot of the triangle in canonical order.
  template <class Fn>
  void for_each(Fn&& fn) const {
    std::size_t idx = 0;
    for (int a = 0; a <= degree_; ++a)
      for (int j = 0; j <= degree_ - a; ++j, ++idx) fn(a, j, degree_ - a - j, coeffs_[idx]);
  }
  template <class Fn>
  void for_each_mut(Fn&& fn) {
    std::size_t idx = 0;
    for (int a = 0; a <= degree_; ++a)
      for (int j = 0; j <= degree_ - a; ++j, ++idx) fn(a, j, degree_ - a - j, coeffs_[idx]);
  }

  cplx eval_tuv(cplx t, cplx u, cplx v) const;
  cplx eval_txy(cplx t, cplx x, cplx y) const { return eval_tuv(t, x + cplx(0, 1) * y, x - cplx(0, 1) * y); }

  double max_abs() const;
  bool is_zero(double tol = 0.0) const { return max_abs() <= tol; }

  HomPoly& operator+=(const HomPoly& o);
  HomPoly& operator-=(const HomPoly& o);
  HomPoly& operator*=(cplx s);
  friend HomPoly operator+(HomPoly a, const HomPoly& b) { return a += b; }
  friend HomPoly operator-(HomPoly a, const HomPoly& b) { return a -= b; }
  friend HomPoly operator*(HomPoly a, cplx s) { return a *= s; }
  friend HomPoly operator*(cplx s, HomPoly a) { return a *= s; }
  friend HomPoly operator-(HomPoly a) { return a *= -1.0; }
  friend HomPoly operator*(const HomPoly& a, const HomPoly& b);

  // Complex conjugation of the polynomial as a function on R^3:
  // c(a,j,k) -> conj(c(a,k,j)).
  HomPoly conj() const;
  // Swap of u and v without conjugation (the reflection y -> -y).
  HomPoly swap_uv() const;

  HomPoly diff_t() const;
  HomPoly diff_u() const;
  HomPoly diff_v() const;
  HomPoly diff_x() const { return diff_u() + diff_v(); }
  HomPoly diff_y() const { return (diff_u() - diff_v()) * cplx(0, 1); }

 private:
  int degree_;
  std::vector<cplx> coeffs_;
};

HomPoly pow(const HomPoly& p, int e);

/// max |a - b| over coefficients; degrees must match.
double max_coeff_diff(const HomPoly& a, const HomPoly& b);
/// max |a - b| / max |b|.
double rel_coeff_diff(const HomPoly& a, const HomPoly& b);

/// Divides by the coefficient of t^d. Throws ValidationError when that
/// coefficient is (numerically) zero.
HomPoly normalize_lead(const HomPoly& f);

/// Replaces each conjugate pair by its average so that
/// c(a,j,k) == conj(c(a,k,j)) holds bit-exactly.
HomPoly symmetrize_real(const HomPoly& f);

/// Projects onto D_2n-style coefficients: real-valued and symmetric in j<->k,
/// i.e. real coefficients in the (t,u,v) basis.
HomPoly symmetrize_dihedral(const HomPoly& f);

/// Expanded representation in the monomials t^a x^i y^(d-a-i), for
/// cross-checking the (t,u,v) evaluation path.
struct TxyPoly {
  int degree = 0;
  std::vector<cplx> coeffs;  // index (a, i) lexicographic, same triangle as HomPoly
  cplx eval(cplx t, cplx x, cplx y) const;
};
TxyPoly expand_txy(const HomPoly& f);

// --- Group actions -------------------------------------------------------

/// Element rot^power * ref^reflect of D_2n acting on (t,x,y), optionally
/// followed by complex conjugation of coefficients.
struct GroupElement {
  int order = 1;
  int power = 0;
  bool reflect = false;
  bool conjugate = false;

  static GroupElement identity(int n) { return {n, 0, false, false}; }
  static GroupElement rotation(int n, int k = 1);
  static GroupElement reflection(int n) { return {n, 0, true, false}; }
  static GroupElement conjugation(int n) { return {n, 0, false, true}; }

  /// Product in the order of matrix multiplication: (g*h).p = g.(h.p) on
  /// points, and act(act(f, g), h) == act(f, g * h) on polynomials.
  GroupElement operator*(const GroupElement& o) const;
  GroupElement inverse() const;
  friend bool operator==(const GroupElement&, const GroupElement&) = default;

  /// 3x3 real matrix acting on column vectors (t, x, y), row-major.
  std::array<double, 9> matrix() const;
};

/// f(gamma . (t,x,y)), conjugated afterwards when gamma.conjugate is set.
HomPoly act_group(const HomPoly& f, const GroupElement& gamma);

/// Keeps the terms with j - k == ell (mod n): the component of f in the
/// omega^ell eigenspace of h -> h(rot^{-1} . (t,x,y)).
HomPoly eigenspace_project(const HomPoly& f, int ell, int n);

/// Monomials t^a u^j v^k of the given degree with j - k == ell (mod n),
/// in canonical order.
std::vector<Exponent> eigenspace_monomials(int n, int degree, int ell);

/// Dimension of the omega^ell eigenspace in degree `degree`, by counting
/// lattice points.
int eigenspace_dimension(int n, int degree, int ell);

/// Closed form for degree q*n - 1. Returns -1 when the closed form does not
/// apply (it is stated only for that degree).
int eigenspace_dimension_closed_form(int n, int q, int ell);

struct InvarianceReport {
  int n = 1;
  bool real_valued = false;
  bool cyclic = false;    // C_n-invariant
  bool dihedral = false;  // D_2n-invariant
  cplx lead = 0.0;        // coefficient of t^d
  double tolerance = 0.0;
  double real_violation = 0.0;
  double cyclic_violation = 0.0;
  double dihedral_violation = 0.0;
};

/// Checks the coefficient patterns with absolute tolerance
/// rel_tol * (1 + max|c|).
InvarianceReport invariance_report(const HomPoly& f, int n, double rel_tol = 1e-10);

/// Positive remainder.
inline int mod(int a, int n) {
  int r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace cwsrep
