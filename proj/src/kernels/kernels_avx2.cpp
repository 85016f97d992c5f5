#include <immintrin.h>

#include "kernels_impl.hpp"

// Built with -mavx2 -mfma. transport_step keeps separate multiply and add so that
// it matches the scalar reference bit for bit.

namespace ddestab::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void transport_step(const double* in, double* out, std::size_t n, double decay, double source) {
  if (n == 0) return;
  out[0] = 0.0;
  const __m256d vd = _mm256_set1_pd(decay);
  const __m256d vs = _mm256_set1_pd(source);
  std::size_t j = 1;
  for (; j + 4 <= n; j += 4) {
    const __m256d prev = _mm256_loadu_pd(in + j - 1);
    _mm256_storeu_pd(out + j, _mm256_add_pd(_mm256_mul_pd(prev, vd), vs));
  }
  for (; j < n; ++j) {
    const double prod = in[j - 1] * decay;
    out[j] = prod + source;
  }
}

double trapezoid_sum_squares(const double* x, std::size_t n) {
  if (n < 2) return 0.0;
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t j = 1;
  const std::size_t end = n - 1;
  for (; j + 8 <= end; j += 8) {
    const __m256d a = _mm256_loadu_pd(x + j);
    const __m256d b = _mm256_loadu_pd(x + j + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  for (; j + 4 <= end; j += 4) {
    const __m256d a = _mm256_loadu_pd(x + j);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
  }
  double interior = hsum(_mm256_add_pd(acc0, acc1));
  for (; j < end; ++j) interior += x[j] * x[j];
  return interior + 0.5 * (x[0] * x[0] + x[n - 1] * x[n - 1]);
}

double weighted_sum_squares(const double* x, const double* w, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    const __m256d a = _mm256_loadu_pd(x + j);
    const __m256d b = _mm256_loadu_pd(x + j + 4);
    acc0 = _mm256_fmadd_pd(_mm256_mul_pd(a, a), _mm256_loadu_pd(w + j), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_mul_pd(b, b), _mm256_loadu_pd(w + j + 4), acc1);
  }
  for (; j + 4 <= n; j += 4) {
    const __m256d a = _mm256_loadu_pd(x + j);
    acc0 = _mm256_fmadd_pd(_mm256_mul_pd(a, a), _mm256_loadu_pd(w + j), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; j < n; ++j) s += w[j] * x[j] * x[j];
  return s;
}

}  // namespace ddestab::kernels::avx2
