#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "cwsrep/detrep.hpp"
#include "cwsrep/linalg.hpp"
#include "cwsrep/polyring.hpp"

namespace cwsrep {

/// F_A(t, x, y) = det(t I + (u/2) A^* + (v/2) A) with u = x + iy, v = x - iy.
HomPoly char_poly(const CMat& A);

/// Eigen-sweep of the Hermitian family (e^{-i theta} A + e^{i theta} A^*) / 2.
struct RangeSample {
  std::vector<double> theta;  // uniform grid on [0, 2 pi)
  std::vector<double> h;      // support values, h = lambda(:, 0)
  RMat lambda;                // N x d, each row descending
  std::vector<cplx> z;        // v^* A v for a top eigenvector v
  std::vector<bool> crossing; // two branches within tolerance at this theta
  int d = 0;
  int size() const { return static_cast<int>(theta.size()); }
};

inline int default_grid(int d) { return d * 8 > 720 ? d * 8 : 720; }

RangeSample support_sweep(const CMat& A, int N);

struct CurvePoint {
  double theta = 0.0;
  int branch = 0;          // 0 = top eigenvalue
  std::array<double, 3> p; // [-lambda : cos theta : sin theta] on V(F_A)
  cplx z;                  // branch boundary point v_j^* A v_j
};

std::vector<CurvePoint> kippenhahn_samples(const CMat& A, int N);

struct SymmetryInfo {
  int rotation_order = 1;
  bool conj_invariant = false;
  double rotation_error = 0.0;  // shift error at the reported order
  double conj_error = 0.0;
};

/// Largest m <= d dividing the grid size whose 2 pi / m shift leaves h
/// unchanged to tol (1 + max|h|).
SymmetryInfo detect_symmetry(const RangeSample& s, int d, double tol = 1e-6);

struct HigherRankRange {
  int k = 1;
  std::vector<double> theta;
  std::vector<double> support;  // lambda_k(theta)
  std::vector<cplx> vertices;   // polygon of the clipped half-planes
  bool empty = false;
};

HigherRankRange higher_rank_range(const CMat& A, int k, int N);

struct SynthOptions {
  int n = 0;  // 0: use the detected rotation order
  int grid = 0;
  double tol_sym = 1e-6;
  double tol_fit = 1e-7;
  ConstructOptions construct{};
};

struct SynthResult {
  BlockCWS A;
  int n = 1;
  bool conj_invariant = false;
  bool direct = false;        // F_B itself was invariant
  int fit_degree = 0;         // degree of the fitted factor
  double fit_sigma_ratio = 0.0;
  int pad = 0;                // power of t multiplied in
  HomPoly target;
  ConstructDiagnostics construct;
  double support_deviation = 0.0;  // max |h_A - h_B| over the grid
};

SynthResult synthesize_invariant_cws(const CMat& B, const SynthOptions& opt = {});

}  // namespace cwsrep
