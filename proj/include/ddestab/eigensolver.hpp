#pragma once

#include <vector>

#include "ddestab/characteristic.hpp"
#include "ddestab/error.hpp"

namespace ddestab {

/// Axis-aligned rectangle [re_min, re_max] x [im_min, im_max] in the complex plane.
struct ContourBox {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;

  double width() const noexcept { return re_max - re_min; }
  double height() const noexcept { return im_max - im_min; }
  double diameter() const noexcept;
  Complex center() const noexcept { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
  bool contains(Complex z, double margin = 0.0) const noexcept;
  bool strictly_contains(Complex z) const noexcept;
};

struct Root {
  Complex lambda;
  double residual = 0.0;  // |H(lambda)|
  int newton_iters = 0;
  bool structural = false;  // the zero of H at -delta that is not an eigenvalue
  int multiplicity = 1;
};

/// A cell the solver could not resolve. The count is still part of total_count.
struct FailedCell {
  ContourBox cell;
  int count = 0;
  ErrorCode reason = ErrorCode::NewtonDiverged;
};

struct RootSet {
  std::vector<Root> roots;  // sorted by (Re, Im)
  int total_count = 0;      // zeros of H in box (winding number)
  ContourBox box;           // box actually integrated over, after nudging
  std::vector<FailedCell> failures;

  int listed_multiplicity() const noexcept;
};

struct CountResult {
  int count = 0;
  ContourBox box;
};

/// Number of zeros of H inside the rectangle by the argument principle. A zero on
/// (or within ~1e-8 of) the boundary makes the box grow outward by
/// 1e-4 (1 + diameter) on the offending side, up to five times.
int count_zeros(const SystemParams& p, const ContourBox& box);
CountResult count_zeros_nudged(const SystemParams& p, const ContourBox& box);

/// All zeros of H in the box, including the structural one at -delta when it is
/// inside. Newton stops when |step| < tol.
RootSet find_roots(const SystemParams& p, const ContourBox& box, double tol = 1e-12);

/// Search box [-sigma, C+1] x [-(B), B] with C the eigenvalue bound radius and
/// B = max(C + sigma + 1, 1 + bound on |Im lambda| over Re lambda >= -sigma).
ContourBox spectrum_box(const SystemParams& p, double sigma);

/// Eigenvalues with Re >= -sigma. beta = 0 is answered in closed form as {-alpha}.
RootSet spectrum(const SystemParams& p, double sigma);

struct SpectralBound {
  double value = 0.0;
  bool below_threshold = false;  // no eigenvalue with Re >= value was found
};

/// max Re over spectrum(p, sigma), or {-sigma, below_threshold} when nothing was found.
SpectralBound spectral_bound(const SystemParams& p, double sigma);

/// Newton iteration with multiplicity m on H (or on the deflated function when
/// `deflated` is set). Returns the iterate and its count; converged is set when
/// the last step fell below tol.
struct NewtonResult {
  Complex lambda;
  int iterations = 0;
  bool converged = false;
};
NewtonResult newton_polish(const SystemParams& p, Complex start, double tol, bool deflated,
                           int multiplicity = 1);

}  // namespace ddestab
