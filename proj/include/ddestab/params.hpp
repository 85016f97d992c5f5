#pragma once

#include <optional>

namespace ddestab {

/// Unvalidated parameter tuple as read from a caller or the command line.
struct RawParams {
  double alpha = 1.0;
  double beta = 1.0;
  double delta = 1.0;
  double l = 1.0;
  double f = 1.0;
  double tau = 1.0;
};

/// Validated parameters of the coupled transport/activation system
///
///   c_t = -f c_x + beta a - delta c,   a' = c(l, t - tau) - alpha a,   c(0, t) = 0.
///
/// Construction goes through validate(); a SystemParams value always satisfies
/// alpha > 0, l > 0, f > 0, tau >= 0 with every field finite.
class SystemParams {
 public:
  static SystemParams validate(const RawParams& raw);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double delta() const noexcept { return delta_; }
  double l() const noexcept { return l_; }
  double f() const noexcept { return f_; }
  double tau() const noexcept { return tau_; }

  /// Transit time l/f of the transport segment.
  double transit_time() const noexcept { return l_ / f_; }

  SystemParams with_beta(double beta) const;
  SystemParams with_tau(double tau) const;
  RawParams raw() const noexcept { return {alpha_, beta_, delta_, l_, f_, tau_}; }

 private:
  SystemParams() = default;

  double alpha_ = 1.0;
  double beta_ = 0.0;
  double delta_ = 1.0;
  double l_ = 1.0;
  double f_ = 1.0;
  double tau_ = 0.0;
};

/// The four parameters held fixed while (tau, beta) vary in a chart.
struct FixedParams {
  double alpha = 1.0;
  double delta = 1.0;
  double l = 1.0;
  double f = 1.0;

  SystemParams at(double beta, double tau) const {
    return SystemParams::validate({alpha, beta, delta, l, f, tau});
  }
};

/// Gain at which lambda = 0 is an eigenvalue for every delay:
/// alpha*delta / (1 - exp(-delta*l/f)), and its delta -> 0 limit alpha*f/l.
double threshold_gain(double alpha, double delta, double l, double f);

/// Radius (|delta| + sqrt(delta^2 + 8|beta|)) / 2 enclosing every eigenvalue with Re >= 0.
double eigenvalue_bound_radius(double beta, double delta) noexcept;

/// exp(delta*l/f) - 1 - (l/f) * alpha*delta/(alpha+delta). Non-negative means the
/// real-axis gain curve is increasing, so every beta above threshold_gain is unstable
/// for all delays.
double threshold_monotonicity_margin(double alpha, double delta, double l, double f);

struct DecayCertificate {
  double gamma;     // energy weight
  double rate;      // K in E(t) <= C exp(-K t)
  double gamma_lo;  // admissible weights are (gamma_lo, gamma_hi]
  double gamma_hi;
};

/// Energy decay certificate. Applicable when f(2 alpha - beta) > 1,
/// delta > beta l / 2 > 0 and exp(tau) < f(2 alpha - beta). The weight defaults to
/// the right end of the admissible interval f exp(-tau). std::nullopt means the
/// sufficient conditions fail, not that the point is unstable.
std::optional<DecayCertificate> decay_certificate(const SystemParams& p,
                                                  std::optional<double> gamma = std::nullopt);

}  // namespace ddestab
