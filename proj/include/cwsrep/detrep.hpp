#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cwsrep/intersect.hpp"
#include "cwsrep/linalg.hpp"
#include "cwsrep/polyring.hpp"

namespace cwsrep {

/// d x d matrix with A(i,j) = 0 unless j - i == 1 (mod n).
struct BlockCWS {
  int n = 1;
  int d = 0;
  bool real = false;
  CMat entries;
};

struct CWSReport {
  bool valid = false;
  bool real = false;
  double off_pattern = 0.0;  // max |A(i,j)| over forbidden slots
  double omega_defect = 0.0; // ||Omega^* A Omega - omega A||_max
  double max_imag = 0.0;
  double tolerance = 0.0;
};

/// Zero pattern, Omega-scaling identity and realness of A. Passes when the
/// defects are <= tol * (1 + max|A|); tol = 0 asks for exact structure.
CWSReport validate_cws(const CMat& A, int n, double tol = 0.0);

/// t C_t + u C_u + v C_v with u = x + iy, v = x - iy.
struct LinearPencil {
  CMat ct, cu, cv;
  double fit_residual = 0.0;
  double pattern_defect = 0.0;  // relative size of entries outside Lambda(i-j)_1
  CMat eval(cplx t, cplx u, cplx v) const { return t * ct + u * cu + v * cv; }
};

/// d x d matrix of forms of degree d - 1.
struct GramMatrix {
  int d = 0;
  std::vector<HomPoly> entries;  // row-major
  HomPoly& at(int i, int j) { return entries[static_cast<std::size_t>(i) * d + j]; }
  const HomPoly& at(int i, int j) const { return entries[static_cast<std::size_t>(i) * d + j]; }
};

/// Basis of the forms in Lambda(omega^ell)_degree vanishing at the given
/// points. Points with t = 0 are skipped when n and ell are both even (every
/// such form is divisible by t). With real_basis the basis has real
/// coefficients in (t, u, v). Throws NumericalError when the dimension drops
/// below q = (degree + 1) / n.
std::vector<HomPoly> vanishing_subspace(const std::vector<ProjPoint>& s_tilde, int ell, int n, int degree,
                                        bool real_basis);

struct NoetherResult {
  HomPoly a, b;
  double residual = 0.0;  // ||h - a f - b g|| / ||h||
};

/// Solves h = a f + b g with a, b in Lambda(omega^ell) by least squares.
/// Throws NumericalError when the relative residual exceeds tol.
NoetherResult noether_solve(const HomPoly& f, const HomPoly& g, const HomPoly& h, int ell, int n, double tol = 1e-6);

struct GramOptions {
  std::uint64_t seed = 11;
  int mix = 0;  // > 0: mix each nullspace by a seeded random unitary
};

GramMatrix assemble_gram(const HomPoly& f, const HomPoly& g, const OrbitSplit& split, int n, bool real_mode,
                         const GramOptions& opt = {});

struct PencilOptions {
  int samples = 16;
  std::uint64_t seed = 13;
  double tol_fit = 1e-6;
  int n = 0;  // when > 0, pattern defect is measured and the off-pattern part removed
};

/// Fits M = adj(G) / f^(d-2) as a linear pencil from numeric samples.
LinearPencil pencil_from_adjugate(const GramMatrix& G, const HomPoly& f, const PencilOptions& opt = {});

struct NormalizeInfo {
  bool flipped = false;          // M(1,0,0) was negative definite
  double ct_identity_error = 0;  // ||C_t'' - I||_max
  double imag_dropped = 0;       // real mode: largest imaginary part discarded
};

/// Permutes, block-normalizes by Cholesky and evaluates at (t,x,y) = (0,1,i).
BlockCWS normalize_pencil(const LinearPencil& M, int n, int q, bool real_mode = false, NormalizeInfo* info = nullptr);

struct ConstructOptions {
  std::vector<double> perturb_schedule{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  std::vector<double> interlacer_eps{1e-2, 1e-1};
  std::vector<double> generic_shift{1e-1, 1e-2};  // after smoothing by s, add c s^2 times a random invariant form
  int retries = 8;
  std::uint64_t seed = 1;
  CheckOptions check{};
  double tol_fit = 1e-6;
};

struct ConstructDiagnostics {
  double s = 0.0;    // smoothing parameter used (0: unperturbed)
  double eps = 0.0;  // interlacer perturbation used
  double delta = 0.0;  // relative size of the generic invariant shift of f
  int retries = 0;
  int candidates = 0;
  double fit_residual = 0.0;
  double pattern_defect = 0.0;
  double ct_identity_error = 0.0;
  bool flipped = false;
  double err_used = 0.0;    // ||F_A - f_used|| / ||f||
  double err_target = 0.0;  // ||F_A - f|| / ||f||
  HomPoly f_used;
  HomPoly g_used;
  std::vector<std::string> notes;
};

struct ConstructResult {
  BlockCWS A;
  ConstructDiagnostics diag;
};

/// Builds A in C(n, d) with F_A = f (or a smoothed f when the assumptions
/// fail for f itself).
ConstructResult construct_cws(const HomPoly& f, int n, bool dihedral, const std::optional<HomPoly>& g = std::nullopt,
                              const ConstructOptions& opt = {});

/// One pass of the construction for f, g already known to satisfy the
/// assumptions.
BlockCWS construct_from_pair(const HomPoly& f, const HomPoly& g, int n, bool dihedral, const OrbitSplit& split,
                             const GramOptions& gopt, const PencilOptions& popt, NormalizeInfo* info = nullptr,
                             LinearPencil* pencil_out = nullptr);

}  // namespace cwsrep
