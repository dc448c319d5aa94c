#include <atomic>

#include "cwsrep/errors.hpp"
#include "cwsrep/kernels.hpp"

namespace cwsrep::kernels {

namespace {

// -1: automatic, otherwise a Backend value
std::atomic<int> g_forced{-1};

}  // namespace

bool avx2_available() {
#if defined(CWSREP_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Backend active_backend() {
  const int f = g_forced.load(std::memory_order_relaxed);
  if (f >= 0) return static_cast<Backend>(f);
  return avx2_available() ? Backend::avx2 : Backend::scalar;
}

void force_backend(std::optional<Backend> b) {
  if (!b) {
    g_forced.store(-1);
    return;
  }
  if (*b == Backend::avx2 && !avx2_available()) throw ValidationError("avx2 backend not available on this CPU");
  g_forced.store(static_cast<int>(*b));
}

std::string backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

#if !defined(CWSREP_HAVE_AVX2_TU)
namespace avx2 {
void eval_dense(const HomPoly& f, const PointBatch& pts, std::span<cplx> out) { scalar::eval_dense(f, pts, out); }
void eval_monomials(std::span<const Exponent> mons, const PointBatch& pts, std::span<cplx> out) {
  scalar::eval_monomials(mons, pts, out);
}
}  // namespace avx2
#endif

void eval_dense(const HomPoly& f, const PointBatch& pts, std::span<cplx> out) {
  if (active_backend() == Backend::avx2)
    avx2::eval_dense(f, pts, out);
  else
    scalar::eval_dense(f, pts, out);
}

void eval_monomials(std::span<const Exponent> mons, const PointBatch& pts, std::span<cplx> out) {
  if (active_backend() == Backend::avx2)
    avx2::eval_monomials(mons, pts, out);
  else
    scalar::eval_monomials(mons, pts, out);
}

}  // namespace cwsrep::kernels
