#include "ddestab/characteristic.hpp"

#include <cmath>

#include "ddestab/error.hpp"

namespace ddestab {

namespace {

constexpr double kRatioSeriesCutoff = 1e-6;
constexpr double kRatioPrimeSeriesCutoff = 0.1;

void check_pole(const SystemParams& p, Complex lambda) {
  if (std::abs(lambda + p.alpha()) < 1e-12 * (1.0 + std::abs(p.alpha()))) {
    throw Error(ErrorCode::PoleAtMinusAlpha, "lambda coincides with -alpha");
  }
}

// d/dw of (1 - exp(-w)) / w.
Complex exp_ratio_prime(Complex w) noexcept {
  if (std::abs(w) < kRatioPrimeSeriesCutoff) {
    // sum_{k>=1} k (-w)^(k-1) (-1) / (k+1)!
    Complex sum = 0.0;
    Complex power = 1.0;
    double factorial = 2.0;
    for (int k = 1; k <= 14; ++k) {
      sum += -static_cast<double>(k) * power / factorial;
      power *= -w;
      factorial *= static_cast<double>(k + 2);
    }
    return sum;
  }
  const Complex e = std::exp(-w);
  return (e * w - one_minus_exp_neg(w)) / (w * w);
}

Complex G_with_delay(const SystemParams& p, Complex lambda, double tau) {
  check_pole(p, lambda);
  const double r = p.transit_time();
  const Complex w = (lambda + p.delta()) * r;
  return 1.0 - p.beta() * std::exp(-lambda * tau) * r * exp_ratio(w) / (lambda + p.alpha());
}

}  // namespace

Complex one_minus_exp_neg(Complex w) noexcept {
  const double x = w.real(), y = w.imag();
  const double s = std::sin(0.5 * y);
  return {-std::expm1(-x) * std::cos(y) + 2.0 * s * s, std::exp(-x) * std::sin(y)};
}

Complex exp_ratio(Complex w) noexcept {
  if (std::abs(w) < kRatioSeriesCutoff) {
    return 1.0 + w * (-0.5 + w * (1.0 / 6.0 + w * (-1.0 / 24.0 + w / 120.0)));
  }
  return one_minus_exp_neg(w) / w;
}

Complex eval_G(const SystemParams& p, Complex lambda) {
  return G_with_delay(p, lambda, p.tau());
}

Complex eval_G0(const SystemParams& p, Complex lambda) {
  return G_with_delay(p, lambda, 0.0);
}

Complex eval_H(const SystemParams& p, Complex lambda) noexcept {
  const Complex w = (lambda + p.delta()) * p.transit_time();
  return (lambda + p.alpha()) * (lambda + p.delta()) -
         p.beta() * std::exp(-lambda * p.tau()) * one_minus_exp_neg(w);
}

Complex eval_H_prime(const SystemParams& p, Complex lambda) noexcept {
  const double r = p.transit_time();
  const Complex w = (lambda + p.delta()) * r;
  const Complex delay = std::exp(-lambda * p.tau());
  return 2.0 * lambda + p.alpha() + p.delta() +
         p.beta() * p.tau() * delay * one_minus_exp_neg(w) -
         p.beta() * r * delay * std::exp(-w);
}

Complex eval_deflated(const SystemParams& p, Complex lambda) noexcept {
  const double r = p.transit_time();
  const Complex w = (lambda + p.delta()) * r;
  return lambda + p.alpha() - p.beta() * std::exp(-lambda * p.tau()) * r * exp_ratio(w);
}

Complex eval_deflated_prime(const SystemParams& p, Complex lambda) noexcept {
  const double r = p.transit_time();
  const Complex w = (lambda + p.delta()) * r;
  const Complex delay = std::exp(-lambda * p.tau());
  return 1.0 + p.beta() * p.tau() * delay * r * exp_ratio(w) -
         p.beta() * delay * r * r * exp_ratio_prime(w);
}

double minus_delta_condition(const SystemParams& p) noexcept {
  return 1.0 - p.beta() * p.l() * std::exp(p.delta() * p.tau()) / (p.f() * (p.alpha() - p.delta()));
}

ExclusionReport exclusions(const SystemParams& p, double tol) {
  ExclusionReport rep;
  rep.minus_alpha_note = p.beta() != 0.0;
  rep.delta_equals_alpha = p.alpha() == p.delta();
  if (!rep.delta_equals_alpha && p.beta() != 0.0) {
    rep.minus_delta_is_eigen = std::abs(minus_delta_condition(p)) <= tol;
  }
  return rep;
}

}  // namespace ddestab
