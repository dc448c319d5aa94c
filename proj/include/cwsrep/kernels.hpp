#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cwsrep/polyring.hpp"

namespace cwsrep::kernels {

/// Structure-of-arrays batch of complex points (t, u, v).
struct PointBatch {
  std::vector<double> tr, ti, ur, ui, vr, vi;

  std::size_t size() const { return tr.size(); }
  void push_back(cplx t, cplx u, cplx v);
  void reserve(std::size_t n);
};

enum class Backend { scalar, avx2 };

bool avx2_available();
/// Backend used by the dispatching entry points.
Backend active_backend();
/// Overrides runtime selection; std::nullopt restores it. Forcing avx2 on a
/// machine without it throws ValidationError.
void force_backend(std::optional<Backend> b);
std::string backend_name(Backend b);

/// out[p] = f(t_p, u_p, v_p).
void eval_dense(const HomPoly& f, const PointBatch& pts, std::span<cplx> out);
/// Row-major evaluation matrix: out[p * mons.size() + m] = monomial m at point p.
void eval_monomials(std::span<const Exponent> mons, const PointBatch& pts, std::span<cplx> out);

namespace scalar {
void eval_dense(const HomPoly& f, const PointBatch& pts, std::span<cplx> out);
void eval_monomials(std::span<const Exponent> mons, const PointBatch& pts, std::span<cplx> out);
}  // namespace scalar

namespace avx2 {
void eval_dense(const HomPoly& f, const PointBatch& pts, std::span<cplx> out);
void eval_monomials(std::span<const Exponent> mons, const PointBatch& pts, std::span<cplx> out);
}  // namespace avx2

}  // namespace cwsrep::kernels
