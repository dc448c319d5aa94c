#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace cwsrep {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

struct Nullspace {
  CMat basis;            // columns, orthonormal
  RVec singular_values;  // all singular values, descending
  double sigma_max = 0.0;
  double sigma_gap = 0.0;  // sigma of the last kept direction / sigma_max
};

/// Right singular vectors of `m` for the `count` smallest singular values
/// (including the zero ones implied by cols > rows).
Nullspace smallest_right_singular(const CMat& m, int count);

/// Numerical nullspace: right singular vectors with sigma <= rel_tol * sigma_max.
Nullspace numerical_nullspace(const CMat& m, double rel_tol);

/// Minimal-norm least-squares solution of m x = b.
CMat least_squares(const CMat& m, const CMat& b);

/// Roots of sum_i c[i] lambda^i (c ordered by increasing power). Leading
/// zeros are trimmed; throws NumericalError when the polynomial is zero.
std::vector<std::complex<double>> poly_roots(const std::vector<std::complex<double>>& c);
std::vector<std::complex<double>> poly_roots_real(const std::vector<double>& c);

/// Haar-distributed unitary matrix.
CMat random_unitary(int n, std::mt19937_64& rng);

/// Standard complex Gaussian entry.
std::complex<double> complex_normal(std::mt19937_64& rng);

}  // namespace cwsrep
