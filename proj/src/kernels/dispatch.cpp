#include <atomic>
#include <cstdlib>
#include <string>

#include "tripod/kernels.hpp"

namespace tripod::kernels {

namespace {

constexpr KernelTable kScalar{
    "scalar",
    detail::csr_matvec_acc_scalar,
    detail::axpy_scalar,
    detail::scale_scalar,
    detail::norm_sq_scalar,
    detail::dotc_scalar,
};

#if defined(TRIPOD_HAVE_AVX2)
constexpr KernelTable kAvx2{
    "avx2",
    detail::csr_matvec_acc_avx2,
    detail::axpy_avx2,
    detail::scale_avx2,
    detail::norm_sq_avx2,
    detail::dotc_avx2,
};

bool cpu_has_avx2() {
#if defined(__GNUC__) || defined(__clang__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}
#endif

const KernelTable* lookup(std::string_view name) {
  if (name == "scalar") return &kScalar;
  if (name == "avx2") return avx2_table();
  return nullptr;
}

const KernelTable* initial_choice() {
  if (const char* env = std::getenv("TRIPOD_KERNELS")) {
    if (const KernelTable* t = lookup(env)) return t;
  }
  if (const KernelTable* t = avx2_table()) return t;
  return &kScalar;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_choice()};
  return table;
}

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() {
#if defined(TRIPOD_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

bool select(std::string_view name) {
  const KernelTable* t = lookup(name);
  if (t == nullptr) return false;
  current().store(t);
  return true;
}

}  // namespace tripod::kernels
