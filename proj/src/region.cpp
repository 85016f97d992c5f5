#include "ddestab/region.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "ddestab/error.hpp"

namespace ddestab {

namespace {

constexpr int kScanPoints = 4000;
constexpr double kBisectionWidth = 1e-12;
constexpr double kAxisResidual = 1e-8;

// Runs body(i) for i in [0, n) over worker_count() threads. Each index writes only
// its own output slot, so the merged result does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const unsigned workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

Complex axis_gain(const FixedParams& fx, double omega, double tau) {
  if (!(fx.l > 0.0) || !(fx.f > 0.0)) throw Error(ErrorCode::InvalidArgument, "l and f must be > 0");
  const double r = fx.l / fx.f;
  const Complex w = Complex{fx.delta, omega} * r;
  if (std::abs(w) > 1e-6 && std::abs(one_minus_exp_neg(w)) < 1e-14) {
    throw Error(ErrorCode::DenominatorVanishes, "1 - exp(-(i omega + delta) l/f) vanishes");
  }
  const Complex rotation{std::cos(omega * tau), std::sin(omega * tau)};
  return rotation * Complex{fx.alpha, omega} / (r * exp_ratio(w));
}

template <class F>
double bisect(F&& fn, double a, double fa, double b) {
  for (int it = 0; it < 200 && b - a > kBisectionWidth; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = fn(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Sign-change roots of fn on (0, hi], scanned on a uniform grid. Grid points where
// fn throws are skipped together with their neighbouring intervals.
template <class F>
std::vector<double> scan_roots(F&& fn, double hi) {
  std::vector<double> roots;
  if (!(hi > 0.0)) return roots;
  const double h = hi / kScanPoints;
  auto safe = [&](double x) -> std::optional<double> {
    try {
      return fn(x);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  std::optional<double> prev = safe(h);
  double prev_x = h;
  if (prev && *prev == 0.0) roots.push_back(h);
  for (int k = 2; k <= kScanPoints; ++k) {
    const double x = k * h;
    const std::optional<double> cur = safe(x);
    if (cur && *cur == 0.0) {
      roots.push_back(x);
    } else if (cur && prev && *prev != 0.0 && ((*prev < 0.0) != (*cur < 0.0))) {
      roots.push_back(bisect(fn, prev_x, *prev, x));
    }
    prev = cur;
    prev_x = x;
  }
  return roots;
}

}  // namespace

std::string_view to_string(Label label) noexcept {
  switch (label) {
    case Label::StableSteadyState: return "StableSteadyState";
    case Label::LimitCycleOscillation: return "LimitCycleOscillation";
    case Label::BoundaryBand: return "BoundaryBand";
  }
  return "?";
}

std::string_view to_string(Evidence evidence) noexcept {
  switch (evidence) {
    case Evidence::SpectralSearch: return "SpectralSearch";
    case Evidence::DecayCertificate: return "DecayCertificate";
    case Evidence::BetaZeroFastPath: return "BetaZeroFastPath";
    case Evidence::BetaZeroCorollaryPath: return "BetaZeroCorollaryPath";
  }
  return "?";
}

unsigned worker_count() noexcept {
  if (const char* env = std::getenv("DDE_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

RegionLabel classify(const SystemParams& p, double eps0) {
  if (!(eps0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps0 must be > 0");
  if (decay_certificate(p)) {
    return {Label::StableSteadyState, Evidence::DecayCertificate, std::nullopt};
  }
  if (p.delta() > 0.0) {
    const FixedParams fx{p.alpha(), p.delta(), p.l(), p.f()};
    const LcoFastPath fast = lco_fast_path(fx, p.beta());
    if (fast.kind == LcoFastPath::Kind::InRplusAllTau) {
      return {Label::LimitCycleOscillation, Evidence::BetaZeroFastPath, std::nullopt};
    }
    if (fast.kind == LcoFastPath::Kind::InRplusTauInterval && p.tau() <= fast.tau_upper) {
      return {Label::LimitCycleOscillation, Evidence::BetaZeroCorollaryPath, std::nullopt};
    }
  }
  const SpectralBound bound = spectral_bound(p, 1e3 * eps0);
  RegionLabel out{Label::BoundaryBand, Evidence::SpectralSearch, bound};
  if (bound.below_threshold || bound.value < -eps0) {
    out.label = Label::StableSteadyState;
  } else if (bound.value > eps0) {
    out.label = Label::LimitCycleOscillation;
  }
  return out;
}

double real_axis_gain(const FixedParams& fx, double x) {
  const double r = fx.l / fx.f;
  return (x + fx.alpha) * (x + fx.delta) / -std::expm1(-(x + fx.delta) * r);
}

double upper_level_crossing(const std::function<double(double)>& g, double level) {
  double hi = 1.0;
  int doublings = 0;
  while (!(g(hi) > level)) {
    hi *= 2.0;
    if (++doublings > 60) throw Error(ErrorCode::BracketingFailed, "no upper bracket found");
  }
  constexpr int kCoarse = 200;
  double lo = 0.0, g_lo = level;
  for (int k = 1; k < kCoarse; ++k) {
    const double x = hi * k / kCoarse;
    const double gx = g(x);
    if (gx < g_lo) {
      lo = x;
      g_lo = gx;
    }
  }
  if (!(g_lo < level)) throw Error(ErrorCode::BracketingFailed, "function does not dip below the level");
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double m = 0.5 * (lo + hi);
    (g(m) < level ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

LcoFastPath lco_fast_path(const FixedParams& fx, double beta) {
  if (!(fx.delta > 0.0) || !(fx.f > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "threshold-gain test needs delta > 0 and f > 0");
  }
  const double b0 = threshold_gain(fx.alpha, fx.delta, fx.l, fx.f);
  if (!(beta > b0)) return {};
  if (threshold_monotonicity_margin(fx.alpha, fx.delta, fx.l, fx.f) >= 0.0) {
    return {LcoFastPath::Kind::InRplusAllTau, 0.0};
  }
  const double x0 = upper_level_crossing([&](double x) { return real_axis_gain(fx, x); }, b0);
  return {LcoFastPath::Kind::InRplusTauInterval, -std::log(b0 / beta) / x0};
}

double phase_residual(const FixedParams& fx, double omega, double tau) {
  return axis_gain(fx, omega, tau).imag();
}

double beta_on_axis(const FixedParams& fx, double omega, double tau) {
  return axis_gain(fx, omega, tau).real();
}

std::vector<double> axis_frequencies(const FixedParams& fx, double tau, double omega_max) {
  std::vector<double> out;
  out.push_back(0.0);
  const auto rest = scan_roots([&](double w) { return phase_residual(fx, w, tau); }, omega_max);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

R0Trace trace_r0(const FixedParams& fx, double tau_max, int num_tau, double omega_max) {
  if (!(tau_max > 0.0) || num_tau < 2 || !(omega_max >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "trace_r0 needs tau_max > 0, num_tau >= 2, omega_max >= 0");
  }
  struct Slot {
    std::vector<R0Point> points;
    std::vector<TraceFailure> failures;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(num_tau));
  parallel_for(slots.size(), [&](std::size_t idx) {
    const double tau = tau_max * static_cast<double>(idx) / (num_tau - 1);
    Slot& slot = slots[idx];
    try {
      for (const double omega : axis_frequencies(fx, tau, omega_max)) {
        const double beta = beta_on_axis(fx, omega, tau);
        const SystemParams p = fx.at(beta, tau);
        const double residual = std::abs(eval_G(p, Complex{0.0, omega}));
        if (residual <= kAxisResidual) {
          slot.points.push_back({tau, beta, omega, residual});
        } else {
          slot.failures.push_back({tau, "residual " + std::to_string(residual) + " at omega " +
                                            std::to_string(omega)});
        }
      }
    } catch (const Error& e) {
      slot.failures.push_back({tau, e.what()});
    }
  });
  R0Trace out;
  for (auto& s : slots) {
    out.points.insert(out.points.end(), s.points.begin(), s.points.end());
    out.failures.insert(out.failures.end(), s.failures.begin(), s.failures.end());
  }
  return out;
}

std::vector<double> modulus_candidates(const SystemParams& p) {
  const double a = p.alpha(), d = p.delta(), b = p.beta(), r = p.transit_time();
  const double e1 = std::exp(-d * r);
  auto mismatch = [&](double w) {
    const double lhs = b * b * (1.0 + e1 * e1 - 2.0 * e1 * std::cos(w * r));
    const double w2 = w * w;
    return w2 * w2 + w2 * (a * a + d * d) + d * d * a * a - lhs;
  };
  std::vector<double> out;
  const double at_zero = mismatch(0.0);
  const double scale = d * d * a * a + b * b * (1.0 + e1) * (1.0 + e1) + 1.0;
  if (std::abs(at_zero) <= 1e-12 * scale) out.push_back(0.0);
  const auto rest = scan_roots(mismatch, eigenvalue_bound_radius(b, d) + 1.0);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

std::vector<SweepNode> sweep(const FixedParams& fx, std::pair<double, double> beta_range,
                             std::pair<double, double> tau_range, GridCounts counts, double eps0) {
  if (counts.beta < 2 || counts.tau < 2) throw Error(ErrorCode::InvalidArgument, "grid counts must be >= 2");
  for (double v : {beta_range.first, beta_range.second, tau_range.first, tau_range.second}) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteField, "sweep ranges must be finite");
  }
  std::vector<SweepNode> nodes(static_cast<std::size_t>(counts.beta) * counts.tau);
  parallel_for(nodes.size(), [&](std::size_t idx) {
    SweepNode& n = nodes[idx];
    n.row = static_cast<int>(idx / counts.tau);
    n.col = static_cast<int>(idx % counts.tau);
    n.beta = beta_range.first + (beta_range.second - beta_range.first) * n.row / (counts.beta - 1);
    n.tau = tau_range.first + (tau_range.second - tau_range.first) * n.col / (counts.tau - 1);
    try {
      n.label = classify(fx.at(n.beta, n.tau), eps0);
    } catch (const Error& e) {
      n.error = e.what();
    }
  });
  return nodes;
}

}  // namespace ddestab
