#include "ddestab/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddestab/error.hpp"

namespace ddestab {

namespace {

constexpr double kThresholdSeriesCutoff = 1e-9;

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::NonFiniteField, std::string(name) + " must be finite");
  }
}

}  // namespace

SystemParams SystemParams::validate(const RawParams& raw) {
  require_finite(raw.alpha, "alpha");
  require_finite(raw.beta, "beta");
  require_finite(raw.delta, "delta");
  require_finite(raw.l, "l");
  require_finite(raw.f, "f");
  require_finite(raw.tau, "tau");
  if (!(raw.alpha > 0.0)) throw Error(ErrorCode::NonPositiveAlpha, "alpha must be > 0");
  if (!(raw.l > 0.0)) throw Error(ErrorCode::NonPositiveL, "l must be > 0");
  if (!(raw.tau >= 0.0)) throw Error(ErrorCode::NegativeTau, "tau must be >= 0");
  if (!(raw.f > 0.0)) throw Error(ErrorCode::NonPositiveF, "f must be > 0");

  SystemParams p;
  p.alpha_ = raw.alpha;
  p.beta_ = raw.beta;
  p.delta_ = raw.delta;
  p.l_ = raw.l;
  p.f_ = raw.f;
  p.tau_ = raw.tau;
  return p;
}

SystemParams SystemParams::with_beta(double beta) const {
  auto r = raw();
  r.beta = beta;
  return validate(r);
}

SystemParams SystemParams::with_tau(double tau) const {
  auto r = raw();
  r.tau = tau;
  return validate(r);
}

double threshold_gain(double alpha, double delta, double l, double f) {
  const double x = delta * l / f;
  if (std::abs(x) < kThresholdSeriesCutoff) {
    return alpha * f / l;
  }
  return alpha * delta / -std::expm1(-x);
}

double eigenvalue_bound_radius(double beta, double delta) noexcept {
  return 0.5 * (std::abs(delta) + std::sqrt(delta * delta + 8.0 * std::abs(beta)));
}

double threshold_monotonicity_margin(double alpha, double delta, double l, double f) {
  const double r = l / f;
  return std::expm1(delta * r) - r * alpha * delta / (alpha + delta);
}

std::optional<DecayCertificate> decay_certificate(const SystemParams& p,
                                                  std::optional<double> gamma) {
  const double a = p.alpha(), b = p.beta(), d = p.delta();
  const double margin = p.f() * (2.0 * a - b);
  const double half_bl = 0.5 * b * p.l();
  if (!(margin > 1.0) || !(half_bl > 0.0) || !(d > half_bl)) return std::nullopt;
  if (!(std::exp(p.tau()) < margin)) return std::nullopt;

  DecayCertificate cert{};
  cert.gamma_lo = 1.0 / (2.0 * a - b);
  cert.gamma_hi = p.f() * std::exp(-p.tau());
  cert.gamma = gamma.value_or(cert.gamma_hi);
  if (!(cert.gamma > cert.gamma_lo && cert.gamma <= cert.gamma_hi)) {
    throw Error(ErrorCode::InvalidArgument, "gamma outside the admissible interval");
  }
  cert.rate = std::min({0.5 * cert.gamma, a - 0.5 * b - 0.5 / cert.gamma, d - half_bl});
  return cert;
}

}  // namespace ddestab
