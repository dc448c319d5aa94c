#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cwsrep/polyring.hpp"

namespace cwsrep {

enum class HypStatus { strictly_hyperbolic, hyperbolic, not_hyperbolic, undetermined };
std::string to_string(HypStatus s);

struct HypOptions {
  int num_directions = 64;  // 8 fixed axes/diagonals plus seeded random ones
  double tol_root = 1e-7;   // |Im| <= tol_root * (1 + |root|) counts as real
  double tol_band = 1e-4;   // between tol_root and tol_band: undetermined
  double tol_gap = 1e-7;    // gaps below tol_gap * (1 + max|root|) collapse
  std::uint64_t seed = 1;
};

struct HypVerdict {
  HypStatus status = HypStatus::undetermined;
  std::array<double, 2> witness{1.0, 0.0};  // direction (a, b), unit length
  double min_gap = 0.0;                     // smallest root gap over all directions
  double max_imag = 0.0;                    // largest |Im root| over all directions
  int directions = 0;
  double tol_root = 0.0;
  double tol_gap = 0.0;
};

/// Unit directions (a, b): the 8 axes/diagonals first, then seeded uniform
/// angles.
std::vector<std::array<double, 2>> sample_directions(int count, std::uint64_t seed);

/// Coefficients (increasing power) of lambda -> f(lambda, a, b) for real (a, b).
std::vector<double> restriction(const HomPoly& f, double a, double b);

/// Roots of lambda -> f(lambda, a, b).
std::vector<cplx> restriction_roots(const HomPoly& f, double a, double b);

HypVerdict hyperbolicity_verdict(const HomPoly& f, const HypOptions& opt = {});

struct InterlaceVerdict {
  bool interlaces = false;
  bool strict = false;
  std::string status;  // strict, weak, fails, not_real_rooted
  std::array<double, 2> witness{1.0, 0.0};
  double min_separation = 0.0;  // smallest gap in the merged root list
  int directions = 0;
};

/// Checks that the roots of g alternate with those of f on every sampled line
/// through (1,0,0).
InterlaceVerdict interlacing_verdict(const HomPoly& f, const HomPoly& g, const HypOptions& opt = {});

/// T_s(f) = f - s^2 (x^2 + y^2) d^2 f / dt^2.
HomPoly nuij_step(const HomPoly& f, double s);

/// T_s applied deg f times. Refuses inputs that are certainly not hyperbolic
/// and verifies that the result is strictly hyperbolic.
HomPoly nuij_strictify(const HomPoly& f, double s, const HypOptions& opt = {});

/// G_s f = f(t, s^2 x, s^2 y).
HomPoly scale_xy(const HomPoly& f, double s);

/// T_{1-s}^d (G_s f) for s in [0, 1].
HomPoly retraction_point(const HomPoly& f, double s);

/// (1/d) df/dt.
HomPoly default_interlacer(const HomPoly& f);

}  // namespace cwsrep
