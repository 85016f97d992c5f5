#pragma once

#include <cstddef>

namespace ddestab::kernels {

namespace scalar {
void transport_step(const double* in, double* out, std::size_t n, double decay, double source);
double trapezoid_sum_squares(const double* x, std::size_t n);
double weighted_sum_squares(const double* x, const double* w, std::size_t n);
}  // namespace scalar

namespace avx2 {
void transport_step(const double* in, double* out, std::size_t n, double decay, double source);
double trapezoid_sum_squares(const double* x, std::size_t n);
double weighted_sum_squares(const double* x, const double* w, std::size_t n);
}  // namespace avx2

}  // namespace ddestab::kernels
