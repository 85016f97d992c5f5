#pragma once

#include <random>

#include "ddestab/params.hpp"

namespace testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline ddestab::SystemParams random_params(std::mt19937_64& rng, double beta_lo = -5.0, double beta_hi = 5.0) {
  return ddestab::SystemParams::validate({uniform(rng, 0.2, 3.0), uniform(rng, beta_lo, beta_hi),
                                          uniform(rng, 0.2, 3.0), uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0),
                                          uniform(rng, 0.0, 3.0)});
}

inline ddestab::SystemParams all_ones(double beta, double tau) {
  return ddestab::SystemParams::validate({1.0, beta, 1.0, 1.0, 1.0, tau});
}

}  // namespace testing
