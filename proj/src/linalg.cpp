#include "cwsrep/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "cwsrep/errors.hpp"

namespace cwsrep {

Nullspace smallest_right_singular(const CMat& m, int count) {
  const int cols = static_cast<int>(m.cols());
  Nullspace out;
  if (count <= 0) {
    out.basis.resize(cols, 0);
    return out;
  }
  if (count > cols) throw NumericalError("requested more singular vectors than columns");
  if (m.rows() == 0) {
    out.basis = CMat::Identity(cols, count);
    out.singular_values = RVec::Zero(0);
    return out;
  }
  Eigen::BDCSVD<CMat> svd(m, Eigen::ComputeFullV);
  out.singular_values = svd.singularValues();
  out.sigma_max = out.singular_values.size() ? out.singular_values(0) : 0.0;
  out.basis = svd.matrixV().rightCols(count);
  // reorder so the smallest sigma comes first
  out.basis = out.basis.rowwise().reverse().eval();
  const int kept_index = cols - count;  // index of the largest kept sigma
  const double s_kept = kept_index < out.singular_values.size() ? out.singular_values(kept_index) : 0.0;
  out.sigma_gap = out.sigma_max > 0 ? s_kept / out.sigma_max : 0.0;
  return out;
}

Nullspace numerical_nullspace(const CMat& m, double rel_tol) {
  const int cols = static_cast<int>(m.cols());
  if (m.rows() == 0) return smallest_right_singular(m, cols);
  Eigen::BDCSVD<CMat> svd(m);
  const RVec s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * smax) ++rank;
  return smallest_right_singular(m, cols - rank);
}

CMat least_squares(const CMat& m, const CMat& b) {
  return m.completeOrthogonalDecomposition().solve(b);
}

namespace {

// Coefficients of p(x + sigma), increasing powers.
template <class T>
std::vector<T> taylor_shift(std::vector<T> c, double sigma) {
  const int deg = static_cast<int>(c.size()) - 1;
  for (int i = 0; i < deg; ++i)
    for (int j = deg - 1; j >= i; --j) c[j] += sigma * c[j + 1];
  return c;
}

template <class Mat, class Solver, class T>
bool companion_roots(const std::vector<T>& c, int deg, std::vector<std::complex<double>>& r) {
  Mat comp = Mat::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
  Solver es(comp, false);
  if (es.info() != Eigen::Success) return false;
  r.resize(deg);
  for (int i = 0; i < deg; ++i) r[i] = es.eigenvalues()(i);
  return true;
}

// QR iterations can stall on symmetric root patterns (e.g. even polynomials);
// a shift of the variable breaks the symmetry.
template <class Mat, class Solver, class T>
std::vector<std::complex<double>> roots_with_retry(std::vector<T> c, int deg) {
  c.resize(deg + 1);
  std::vector<std::complex<double>> r;
  if (companion_roots<Mat, Solver>(c, deg, r)) return r;
  double radius = 0.0;
  for (int i = 0; i < deg; ++i)
    radius = std::max(radius, std::pow(std::abs(c[i] / c[deg]), 1.0 / (deg - i)));
  if (radius == 0.0) radius = 1.0;
  for (double f : {0.371, -0.613, 1.129}) {
    const double sigma = f * radius;
    if (companion_roots<Mat, Solver>(taylor_shift(c, sigma), deg, r)) {
      for (auto& z : r) z += sigma;
      return r;
    }
  }
  throw NumericalError("companion eigenvalue solver failed");
}

}  // namespace

std::vector<std::complex<double>> poly_roots(const std::vector<std::complex<double>>& c) {
  int deg = static_cast<int>(c.size()) - 1;
  double scale = 0.0;
  for (const auto& z : c) scale = std::max(scale, std::abs(z));
  if (scale == 0.0) throw NumericalError("zero polynomial has no roots");
  while (deg > 0 && std::abs(c[deg]) <= 1e-300) --deg;
  if (deg <= 0) return {};
  if (deg == 1) return {-c[0] / c[1]};
  return roots_with_retry<CMat, Eigen::ComplexEigenSolver<CMat>>(c, deg);
}

std::vector<std::complex<double>> poly_roots_real(const std::vector<double>& c) {
  int deg = static_cast<int>(c.size()) - 1;
  double scale = 0.0;
  for (double z : c) scale = std::max(scale, std::abs(z));
  if (scale == 0.0) throw NumericalError("zero polynomial has no roots");
  while (deg > 0 && c[deg] == 0.0) --deg;
  if (deg <= 0) return {};
  if (deg == 1) return {std::complex<double>(-c[0] / c[1], 0.0)};
  return roots_with_retry<RMat, Eigen::EigenSolver<RMat>>(c, deg);
}

std::complex<double> complex_normal(std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const double re = nd(rng);
  const double im = nd(rng);
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

CMat random_unitary(int n, std::mt19937_64& rng) {
  CMat z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = complex_normal(rng);
  Eigen::HouseholderQR<CMat> qr(z);
  CMat q = qr.householderQ() * CMat::Identity(n, n);
  const CMat r = qr.matrixQR();
  for (int i = 0; i < n; ++i) {
    const double a = std::abs(r(i, i));
    if (a > 0) q.col(i) *= r(i, i) / a;
  }
  return q;
}

}  // namespace cwsrep
