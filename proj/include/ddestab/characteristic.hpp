#pragma once

#include <complex>

#include "ddestab/params.hpp"

namespace ddestab {

using Complex = std::complex<double>;

// Characteristic function of the system:
//
//   G(lambda) = 1 - beta exp(-lambda tau) (1 - exp(-(lambda+delta) l/f)) / ((lambda+alpha)(lambda+delta))
//
// with the removable singularity at lambda = -delta filled in by continuity. For
// beta != 0 the eigenvalues are exactly the zeros of G other than -alpha.
//
// H(lambda) = (lambda+alpha)(lambda+delta) G(lambda) is entire and is what the
// contour counter works with. It always vanishes at -delta; that zero is
// structural and only an eigenvalue when the deflated function
// D(lambda) = H(lambda) / (lambda+delta) vanishes there as well.

/// G(lambda). Throws PoleAtMinusAlpha when |lambda + alpha| < 1e-12 (1 + |alpha|).
Complex eval_G(const SystemParams& p, Complex lambda);

/// Instantaneous-feedback variant: G with the delay factor removed. Identical to
/// eval_G on parameters with tau = 0.
Complex eval_G0(const SystemParams& p, Complex lambda);

Complex eval_H(const SystemParams& p, Complex lambda) noexcept;
Complex eval_H_prime(const SystemParams& p, Complex lambda) noexcept;

/// D(lambda) = H(lambda) / (lambda + delta), entire. D(-alpha) != 0 whenever beta != 0.
Complex eval_deflated(const SystemParams& p, Complex lambda) noexcept;
Complex eval_deflated_prime(const SystemParams& p, Complex lambda) noexcept;

/// (1 - exp(-w)) / w with value 1 at w = 0.
Complex exp_ratio(Complex w) noexcept;

/// 1 - exp(-w) without cancellation for small |w|.
Complex one_minus_exp_neg(Complex w) noexcept;

/// G(-delta) = 1 - beta l exp(delta tau) / (f (alpha - delta)); meaningful for alpha != delta.
double minus_delta_condition(const SystemParams& p) noexcept;

struct ExclusionReport {
  bool minus_delta_is_eigen = false;  // -delta is a genuine eigenvalue
  bool minus_alpha_note = false;      // -alpha is excluded from the spectrum (beta != 0)
  bool delta_equals_alpha = false;    // H(-alpha) = 0 yet -alpha is still excluded
};

/// Structural root/pole report for beta != 0. With alpha == delta the point
/// -delta = -alpha is treated as excluded.
ExclusionReport exclusions(const SystemParams& p, double tol = 1e-9);

}  // namespace ddestab
