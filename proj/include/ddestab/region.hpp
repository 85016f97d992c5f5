#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ddestab/eigensolver.hpp"
#include "ddestab/params.hpp"

namespace ddestab {

enum class Label { StableSteadyState, LimitCycleOscillation, BoundaryBand };

enum class Evidence { SpectralSearch, DecayCertificate, BetaZeroFastPath, BetaZeroCorollaryPath };

std::string_view to_string(Label label) noexcept;
std::string_view to_string(Evidence evidence) noexcept;

struct RegionLabel {
  Label label = Label::BoundaryBand;
  Evidence evidence = Evidence::SpectralSearch;
  std::optional<SpectralBound> max_real_part;  // set only for spectral evidence
};

/// Classification of a parameter point. Analytic arguments are tried first
/// (energy certificate, then the threshold-gain criteria); otherwise the spectrum
/// is searched down to Re = -1000 eps0 and the rightmost real part is compared
/// with +-eps0.
RegionLabel classify(const SystemParams& p, double eps0 = 1e-8);

struct LcoFastPath {
  enum class Kind { InRplusAllTau, InRplusTauInterval, NotDecided };
  Kind kind = Kind::NotDecided;
  double tau_upper = 0.0;  // for InRplusTauInterval: unstable for tau in [0, tau_upper]
};

/// Threshold-gain test for beta > threshold_gain. Requires delta > 0.
LcoFastPath lco_fast_path(const FixedParams& fixed, double beta);

/// Real-axis gain curve (x+alpha)(x+delta) / (1 - exp(-(x+delta) l/f)), x >= 0.
double real_axis_gain(const FixedParams& fixed, double x);

/// Smallest x > 0 with g(x) = level for a g that dips below level and then grows
/// without bound. The bracket is found by doubling from x = 1; throws BracketingFailed.
double upper_level_crossing(const std::function<double(double)>& g, double level);

/// Gain making i omega an eigenvalue at delay tau is the real part of
/// exp(i omega tau) (i omega + alpha)(i omega + delta) / (1 - exp(-(i omega + delta) l/f));
/// a real gain exists only where the imaginary part vanishes.
double phase_residual(const FixedParams& fixed, double omega, double tau);
double beta_on_axis(const FixedParams& fixed, double omega, double tau);

struct R0Point {
  double tau = 0.0;
  double beta = 0.0;
  double omega = 0.0;  // >= 0; -omega is the mirrored crossing with the same beta
  double residual = 0.0;  // |G(i omega)|
};

struct TraceFailure {
  double tau;
  std::string message;
};

struct R0Trace {
  std::vector<R0Point> points;
  std::vector<TraceFailure> failures;
};

/// Imaginary-axis crossings on the grid tau_p = p tau_max / (num_tau - 1), p = 0..num_tau-1,
/// for omega in [0, omega_max].
R0Trace trace_r0(const FixedParams& fixed, double tau_max, int num_tau, double omega_max);

/// Crossing frequencies at one delay.
std::vector<double> axis_frequencies(const FixedParams& fixed, double tau, double omega_max);

/// Nonnegative omega with |i omega + alpha|^2 |i omega + delta|^2 = beta^2 |1 - exp(-(i omega + delta) l/f)|^2.
std::vector<double> modulus_candidates(const SystemParams& p);

struct SweepNode {
  int row = 0;  // beta index
  int col = 0;  // tau index
  double tau = 0.0;
  double beta = 0.0;
  std::optional<RegionLabel> label;
  std::string error;
};

struct GridCounts {
  int beta = 2;
  int tau = 2;
};

/// Classification on a (beta, tau) grid in row-major order (rows are beta values).
std::vector<SweepNode> sweep(const FixedParams& fixed, std::pair<double, double> beta_range,
                             std::pair<double, double> tau_range, GridCounts counts, double eps0 = 1e-8);

/// Worker count: DDE_THREADS if set and positive, else hardware concurrency.
unsigned worker_count() noexcept;

}  // namespace ddestab
