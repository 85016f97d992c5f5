#pragma once

#include <span>
#include <string_view>

// Data-parallel inner loops of the simulator. Each kernel has a scalar reference
// implementation and, on x86-64, an AVX2 variant chosen at runtime.
namespace ddestab::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  // out[0] = 0, out[j] = in[j-1] * decay + source for 1 <= j < n. in and out have
  // length n and must not alias.
  void (*transport_step)(const double* in, double* out, std::size_t n, double decay, double source);
  // x[0]^2/2 + x[1]^2 + ... + x[n-2]^2 + x[n-1]^2/2, n >= 2
  double (*trapezoid_sum_squares)(const double* x, std::size_t n);
  // sum_i w[i] x[i]^2
  double (*weighted_sum_squares)(const double* x, const double* w, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

/// AVX2 table, or nullptr when the build or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table() noexcept;

/// Table used by the library. Defaults to the widest supported ISA; setting the
/// environment variable DDESTAB_SIMD=scalar before first use forces the reference path.
const KernelTable& active() noexcept;

/// Override the active table. Returns false if the ISA is unavailable.
bool select(Isa isa) noexcept;

std::string_view to_string(Isa isa) noexcept;

inline void transport_step(std::span<const double> in, std::span<double> out, double decay, double source) {
  active().transport_step(in.data(), out.data(), in.size(), decay, source);
}

inline double trapezoid_sum_squares(std::span<const double> x) {
  return active().trapezoid_sum_squares(x.data(), x.size());
}

inline double weighted_sum_squares(std::span<const double> x, std::span<const double> w) {
  return active().weighted_sum_squares(x.data(), w.data(), x.size());
}

}  // namespace ddestab::kernels
