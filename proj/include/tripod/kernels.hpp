#pragma once

// Complex double inner loops used by every propagator. Each kernel has a
// scalar reference implementation and, on x86-64, an AVX2+FMA variant. The
// variant is picked once at startup from CPUID; TRIPOD_KERNELS=scalar|avx2
// in the environment overrides the choice.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace tripod::kernels {

using cplx = std::complex<double>;

/// Compressed-row view of a square complex matrix (Eigen RowMajor layout).
struct CsrView {
  std::size_t rows = 0;
  const int* row_ptr = nullptr;  // rows + 1 entries
  const int* cols = nullptr;
  const cplx* values = nullptr;
};

struct KernelTable {
  std::string_view name;
  /// y += alpha * A x
  void (*csr_matvec_acc)(const CsrView& a, cplx alpha, const cplx* x, cplx* y);
  /// y += alpha * x
  void (*axpy)(std::size_t n, cplx alpha, const cplx* x, cplx* y);
  /// x *= alpha
  void (*scale)(std::size_t n, cplx alpha, cplx* x);
  /// sum |x_i|^2
  double (*norm_sq)(std::size_t n, const cplx* x);
  /// sum conj(x_i) y_i
  cplx (*dotc)(std::size_t n, const cplx* x, const cplx* y);
};

const KernelTable& scalar_table();

/// nullptr when the variant was not compiled in or the CPU lacks it.
const KernelTable* avx2_table();

/// The table selected for this process.
const KernelTable& active();

/// Replace the process-wide selection (tests and benchmarks). Returns false
/// if `name` is unknown or unsupported on this CPU.
bool select(std::string_view name);

// Span conveniences over the active table.
inline void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  active().axpy(x.size(), alpha, x.data(), y.data());
}
inline void scale(cplx alpha, std::span<cplx> x) { active().scale(x.size(), alpha, x.data()); }
inline double norm_sq(std::span<const cplx> x) { return active().norm_sq(x.size(), x.data()); }
inline cplx dotc(std::span<const cplx> x, std::span<const cplx> y) {
  return active().dotc(x.size(), x.data(), y.data());
}

namespace detail {
void csr_matvec_acc_scalar(const CsrView& a, cplx alpha, const cplx* x, cplx* y);
void axpy_scalar(std::size_t n, cplx alpha, const cplx* x, cplx* y);
void scale_scalar(std::size_t n, cplx alpha, cplx* x);
double norm_sq_scalar(std::size_t n, const cplx* x);
cplx dotc_scalar(std::size_t n, const cplx* x, const cplx* y);

#if defined(TRIPOD_HAVE_AVX2)
void csr_matvec_acc_avx2(const CsrView& a, cplx alpha, const cplx* x, cplx* y);
void axpy_avx2(std::size_t n, cplx alpha, const cplx* x, cplx* y);
void scale_avx2(std::size_t n, cplx alpha, cplx* x);
double norm_sq_avx2(std::size_t n, const cplx* x);
cplx dotc_avx2(std::size_t n, const cplx* x, const cplx* y);
#endif
}  // namespace detail

}  // namespace tripod::kernels
