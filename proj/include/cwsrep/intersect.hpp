#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cwsrep/hyperbolicity.hpp"
#include "cwsrep/polyring.hpp"

namespace cwsrep {

/// Point of P^2(C) in (t, x, y) coordinates, scaled so the largest-modulus
/// coordinate equals 1.
struct ProjPoint {
  std::array<cplx, 3> c{1.0, 0.0, 0.0};
  bool at_infinity = false;
  int multiplicity = 1;

  cplx t() const { return c[0]; }
  cplx x() const { return c[1]; }
  cplx y() const { return c[2]; }
  cplx u() const { return c[1] + cplx(0, 1) * c[2]; }
  cplx v() const { return c[1] - cplx(0, 1) * c[2]; }

  static ProjPoint from_txy(cplx t, cplx x, cplx y, double inf_tol = 1e-8);
  static ProjPoint from_tuv(cplx t, cplx u, cplx v, double inf_tol = 1e-8);
};

/// sin of the angle between the lines spanned by p and q in C^3.
double projective_distance(const ProjPoint& p, const ProjPoint& q);

/// Unit-norm representative whose first non-negligible coordinate is real
/// positive. Used for ordering and tie-breaking.
std::array<cplx, 3> canonical_coords(const ProjPoint& p);
/// Lexicographic comparison of canonical coordinates (re then im), with
/// tolerance.
bool canonical_less(const ProjPoint& p, const ProjPoint& q, double tol = 1e-7);

ProjPoint rotate_point(const ProjPoint& p, int n, int k = 1);
ProjPoint conj_point(const ProjPoint& p);
ProjPoint reflect_point(const ProjPoint& p);

struct IntersectOptions {
  double tol_point = 1e-8;    // matching / at-infinity tolerance
  double tol_cluster = 1e-6;  // clustering radius for multiplicity
  double tol_rank = 1e-11;    // Sylvester sigma ratio signalling a common component
  double tol_residual = 1e-8;
  std::uint64_t seed = 7;
  int attempts = 8;  // random coordinate changes tried before giving up
  int symmetry = 0;  // > 1: close found points under rotation by 2 pi / symmetry (and conjugation) when f, g allow it
};

struct IntersectResult {
  std::vector<ProjPoint> points;  // distinct points, canonical order
  int total_multiplicity = 0;
  double max_residual = 0.0;  // max(|f(p)|/|f|, |g(p)|/|g|) at unit-norm p
  double min_transversality = 1.0;  // smallest sine between the two gradients
  int attempts_used = 0;
  bool consistent = false;  // Bezout count reached with polished points
};

/// All points of V(f) cap V(g) in P^2(C), via a resultant in a random
/// coordinate chart, followed by Newton polishing and clustering.
IntersectResult intersect_curves(const HomPoly& f, const HomPoly& g, const IntersectOptions& opt = {});

/// sine of the angle between grad f(p) and grad g(p).
double transversality(const HomPoly& f, const HomPoly& g, const ProjPoint& p);

struct AssumptionReport {
  int n = 1;
  int d = 0;
  bool a1 = false, a2 = false, a3 = false, a4 = false;
  HypVerdict hyperbolicity;
  bool smooth = false;
  double singular_residual = 0.0;  // smallest max|partials| over candidate points
  InterlaceVerdict interlacing;
  IntersectResult intersection;
  int points_at_infinity = 0;
  int expected_at_infinity = 0;
  std::vector<std::string> messages;

  bool all() const { return a1 && a2 && a3 && a4; }
};

struct CheckOptions {
  HypOptions hyp{};
  IntersectOptions inter{};
  double tol_transverse = 1e-6;
};

AssumptionReport check_assumptions(const HomPoly& f, const HomPoly& g, int n, const CheckOptions& opt = {});

struct OrbitSplit {
  int n = 1;
  bool dihedral = false;
  std::vector<std::vector<ProjPoint>> orbits;  // C_n-orbits, canonical order
  std::vector<bool> in_s;                      // per orbit
  std::vector<ProjPoint> s_tilde;              // one representative per orbit in S
  std::vector<ProjPoint> s_points() const;
};

/// Splits intersection points into conjugate families S, conj(S) of C_n-orbits.
OrbitSplit orbit_split(const std::vector<ProjPoint>& points, int n, bool dihedral, double tol = 1e-8);

}  // namespace cwsrep
