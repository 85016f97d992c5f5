#include "kernels_impl.hpp"

namespace ddestab::kernels::scalar {

void transport_step(const double* in, double* out, std::size_t n, double decay, double source) {
  if (n == 0) return;
  out[0] = 0.0;
  for (std::size_t j = 1; j < n; ++j) out[j] = in[j - 1] * decay + source;
}

double trapezoid_sum_squares(const double* x, std::size_t n) {
  if (n < 2) return 0.0;
  double interior = 0.0;
  for (std::size_t j = 1; j + 1 < n; ++j) interior += x[j] * x[j];
  return interior + 0.5 * (x[0] * x[0] + x[n - 1] * x[n - 1]);
}

double weighted_sum_squares(const double* x, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += w[j] * x[j] * x[j];
  return s;
}

}  // namespace ddestab::kernels::scalar
