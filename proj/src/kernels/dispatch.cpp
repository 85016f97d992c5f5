#include <atomic>
#include <cstdlib>
#include <string_view>

#include "ddestab/kernels.hpp"
#include "kernels_impl.hpp"

namespace ddestab::kernels {

namespace {

constexpr KernelTable kScalar{Isa::Scalar, scalar::transport_step, scalar::trapezoid_sum_squares,
                              scalar::weighted_sum_squares};

#if defined(DDESTAB_HAVE_AVX2_TU)
constexpr KernelTable kAvx2{Isa::Avx2, avx2::transport_step, avx2::trapezoid_sum_squares,
                            avx2::weighted_sum_squares};

bool cpu_has_avx2() noexcept {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelTable* initial_table() noexcept {
  const char* env = std::getenv("DDESTAB_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") return &kScalar;
  if (const KernelTable* t = avx2_table()) return t;
  return &kScalar;
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(DDESTAB_HAVE_AVX2_TU)
  static const bool supported = cpu_has_avx2();
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_acquire); }

bool select(Isa isa) noexcept {
  const KernelTable* t = isa == Isa::Scalar ? &kScalar : avx2_table();
  if (t == nullptr) return false;
  current().store(t, std::memory_order_release);
  return true;
}

std::string_view to_string(Isa isa) noexcept { return isa == Isa::Scalar ? "scalar" : "avx2"; }

}  // namespace ddestab::kernels
