#include "tripod/kernels.hpp"

namespace tripod::kernels::detail {

void csr_matvec_acc_scalar(const CsrView& a, cplx alpha, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < a.rows; ++i) {
    cplx acc{0.0, 0.0};
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      acc += a.values[k] * x[a.cols[k]];
    }
    y[i] += alpha * acc;
  }
}

void axpy_scalar(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(std::size_t n, cplx alpha, cplx* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double norm_sq_scalar(std::size_t n, const cplx* x) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::norm(x[i]);
  return s;
}

cplx dotc_scalar(std::size_t n, const cplx* x, const cplx* y) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) s += std::conj(x[i]) * y[i];
  return s;
}

}  // namespace tripod::kernels::detail
