#include <doctest.h>

#include <cmath>
#include <limits>

#include "ddestab/error.hpp"
#include "ddestab/params.hpp"

using namespace ddestab;

namespace {

ErrorCode code_of(const RawParams& raw) {
  try {
    SystemParams::validate(raw);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a validation error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("validate accepts the all-ones point") {
  const SystemParams p = SystemParams::validate({1, 1, 1, 1, 1, 1});
  CHECK(p.alpha() == 1.0);
  CHECK(p.transit_time() == 1.0);
  CHECK(p.with_beta(2.0).beta() == 2.0);
  CHECK(p.with_tau(0.0).tau() == 0.0);
}

TEST_CASE("validate rejects out-of-domain fields") {
  CHECK(code_of({-1, 1, 1, 1, 1, 1}) == ErrorCode::NonPositiveAlpha);
  CHECK(code_of({0, 1, 1, 1, 1, 1}) == ErrorCode::NonPositiveAlpha);
  CHECK(code_of({1, 1, 1, 1, 0, 1}) == ErrorCode::NonPositiveF);
  CHECK(code_of({1, 1, 1, 0, 1, 1}) == ErrorCode::NonPositiveL);
  CHECK(code_of({1, 1, 1, 1, 1, -0.1}) == ErrorCode::NegativeTau);
  CHECK(code_of({1, std::numeric_limits<double>::quiet_NaN(), 1, 1, 1, 1}) == ErrorCode::NonFiniteField);
  CHECK(code_of({1, 1, INFINITY, 1, 1, 1}) == ErrorCode::NonFiniteField);
  CHECK(is_validation_error(ErrorCode::NonPositiveF));
  CHECK_FALSE(is_validation_error(ErrorCode::BoundaryZero));
}

TEST_CASE("threshold gain") {
  CHECK(threshold_gain(1, 1, 1, 1) == doctest::Approx(1.0 / (1.0 - std::exp(-1.0))).epsilon(1e-14));
  CHECK(threshold_gain(1, 1, 1, 1) == doctest::Approx(1.5819767069).epsilon(1e-10));
  CHECK(threshold_gain(1, 0, 1, 1) == 1.0);
  CHECK(threshold_gain(2, 1, 1, 1) == doctest::Approx(2.0 * threshold_gain(1, 1, 1, 1)).epsilon(1e-14));
  // continuity through delta = 0
  CHECK(threshold_gain(1.3, 1e-7, 0.7, 1.9) == doctest::Approx(1.3 * 1.9 / 0.7).epsilon(1e-6));
  CHECK(threshold_gain(1.3, -1e-7, 0.7, 1.9) == doctest::Approx(1.3 * 1.9 / 0.7).epsilon(1e-6));
}

TEST_CASE("eigenvalue bound radius") {
  CHECK(eigenvalue_bound_radius(1, 1) == doctest::Approx(2.0));
  CHECK(eigenvalue_bound_radius(0, -3) == doctest::Approx(3.0));
  CHECK(eigenvalue_bound_radius(2, 0) == doctest::Approx(2.0));
  CHECK(eigenvalue_bound_radius(-2, 0) == doctest::Approx(2.0));
}

TEST_CASE("threshold monotonicity margin") {
  CHECK(threshold_monotonicity_margin(1, 1, 1, 1) == doctest::Approx(std::exp(1.0) - 1.5).epsilon(1e-14));
  CHECK(threshold_monotonicity_margin(2, 2, 0.5, 1) == doctest::Approx(std::exp(1.0) - 1.0 - 0.5).epsilon(1e-14));
  // small l: leading term (l/f) delta^2 / (alpha + delta), positive
  const double l = 1e-4;
  CHECK(threshold_monotonicity_margin(1.0, 2.0, l, 1.0) == doctest::Approx(l * 4.0 / 3.0).epsilon(1e-3));
  CHECK(threshold_monotonicity_margin(1.0, 2.0, l, 1.0) > 0.0);
}

TEST_CASE("decay certificate") {
  SUBCASE("applicable at (1,0.5,1,1,1,0.3)") {
    const auto cert = decay_certificate(SystemParams::validate({1, 0.5, 1, 1, 1, 0.3}));
    REQUIRE(cert);
    const double g = std::exp(-0.3);
    CHECK(cert->gamma == doctest::Approx(g).epsilon(1e-15));
    CHECK(cert->rate == doctest::Approx(1.0 - 0.25 - 0.5 / g).epsilon(1e-14));
    CHECK(cert->rate == doctest::Approx(0.0751).epsilon(1e-3));
    CHECK(cert->gamma_lo == doctest::Approx(1.0 / 1.5));
    CHECK(cert->gamma_hi == doctest::Approx(g));
  }
  SUBCASE("conditions fail") {
    CHECK_FALSE(decay_certificate(SystemParams::validate({1, 1.5, 1, 1, 1, 0})));
    CHECK_FALSE(decay_certificate(SystemParams::validate({1, 0.5, 0.2, 1, 1, 0.3})));
    CHECK_FALSE(decay_certificate(SystemParams::validate({1, 0.5, 1, 1, 1, 0.5})));  // e^0.5 > 1.5
    CHECK_FALSE(decay_certificate(SystemParams::validate({1, -0.5, 1, 1, 1, 0.1})));
  }
  SUBCASE("gamma override") {
    const SystemParams p = SystemParams::validate({1, 0.5, 1, 1, 1, 0.3});
    const auto cert = decay_certificate(p, 0.7);
    REQUIRE(cert);
    CHECK(cert->rate == doctest::Approx(std::min({0.35, 0.75 - 1.0 / 1.4, 0.75})));
    CHECK_THROWS_AS(decay_certificate(p, 0.5), Error);
    CHECK_THROWS_AS(decay_certificate(p, 0.9), Error);
  }
}
